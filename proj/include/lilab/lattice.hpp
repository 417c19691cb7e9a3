#pragma once

// Integer-lattice utilities: multi-indices, windows, prefix-sum tables with a
// zero boundary layer, directional partial sums, dyadic index enumeration, and
// the iterated-logarithm window normalizer.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lilab {

// A point of the d-dimensional integer lattice (d = size of the vector).
using Index = std::vector<long long>;

std::string index_to_string(const Index& i);

// Componentwise comparisons / lattice operations.
bool index_leq(const Index& a, const Index& b);
Index index_min(const Index& a, const Index& b);
Index index_add(const Index& a, const Index& b);
Index index_sub(const Index& a, const Index& b);
Index index_of(std::initializer_list<long long> v);
Index index_fill(std::size_t d, long long value);

// Iterate over the inclusive box [lo, hi], last coordinate fastest
// (lexicographic ascending).  Does nothing if the box is empty.
void for_each_index(const Index& lo, const Index& hi,
                    const std::function<void(const Index&)>& fn);

// max(ln x, 1); throws std::domain_error for x <= 0.
double log_plus(double x);

// log_plus(log_plus(x)); equals 1 on [0, e^e] intersected with the domain.
double log_log_plus(double x);

// Normalizer for window maxima under bounded-LIL scaling:
//   sqrt(prod_q n_q) * prod_q sqrt(log_log_plus(n_q)).
// Every n_q must be >= 1.
double lil_normalizer(const Index& n);

// Dense prefix-sum table over a rectangular window.  Axis q has sizes[q]
// sites, addressed by 0-based offsets 0 .. sizes[q]-1.  Internally the table
// keeps a zero layer at position 0 of every axis, so corner lookups never
// special-case the boundary.  T is long long (exact) or double (the per-axis
// accumulation is tree-structured, keeping float error growth logarithmic in
// the line length).
template <typename T>
class PrefixTable {
 public:
  PrefixTable(Index sizes, const std::function<T(const Index&)>& site_value)
      : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw std::invalid_argument("PrefixTable: dimension 0");
    long long total = 1;
    strides_.assign(sizes_.size(), 0);
    for (std::size_t q = sizes_.size(); q-- > 0;) {
      if (sizes_[q] < 1)
        throw std::invalid_argument("PrefixTable: size must be >= 1 on axis " +
                                    std::to_string(q));
      strides_[q] = total;
      total *= sizes_[q] + 1;
    }
    data_.assign(static_cast<std::size_t>(total), T{});
    Index offset(sizes_.size(), 0);
    fill_values(0, offset, site_value);
    for (std::size_t q = 0; q < sizes_.size(); ++q) scan_axis(q);
  }

  const Index& sizes() const { return sizes_; }
  std::size_t dim() const { return sizes_.size(); }

  // Sum of site values over the inclusive 1-based rectangle [lo, hi]
  // (site with 1-based position p corresponds to 0-based offset p-1).
  // Empty rectangles (hi_q = lo_q - 1) are allowed and sum to zero.
  T rect_sum(const Index& lo, const Index& hi) const {
    check_dim(lo);
    check_dim(hi);
    for (std::size_t q = 0; q < sizes_.size(); ++q) {
      if (lo[q] < 1 || hi[q] > sizes_[q] || hi[q] < lo[q] - 1)
        throw std::out_of_range("rect_sum: invalid range on axis " +
                                std::to_string(q) + ": [" +
                                std::to_string(lo[q]) + ", " +
                                std::to_string(hi[q]) + "] in window " +
                                index_to_string(sizes_));
    }
    // Signed sum over the 2^d corners of the rectangle.
    const std::size_t d = sizes_.size();
    T acc{};
    Index corner(d, 0);
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      int parity = 0;
      for (std::size_t q = 0; q < d; ++q) {
        if (mask & (1u << q)) {
          corner[q] = lo[q] - 1;
          ++parity;
        } else {
          corner[q] = hi[q];
        }
      }
      if (parity % 2 == 0)
        acc += data_[flat(corner)];
      else
        acc -= data_[flat(corner)];
    }
    return acc;
  }

  // Single site value (0-based offset), recovered from corner differences.
  T site(const Index& offset) const {
    Index lo(offset), hi(offset);
    for (auto& v : lo) v += 1;
    for (auto& v : hi) v += 1;
    return rect_sum(lo, hi);
  }

  // Directional partial sum: axes listed in `summed` accumulate offsets
  // 0 .. i_q - 1 (i_q >= 0; i_q = 0 gives an empty sum), the remaining axes
  // stay fixed at offset i_q (which must lie inside the window).  With all
  // axes summed and i = sizes this is the full-window sum; with no axes
  // summed it is the single site at offset i.
  T directional_sum(const Index& i, const std::vector<std::size_t>& summed) const {
    check_dim(i);
    std::vector<char> in_sum(sizes_.size(), 0);
    for (std::size_t q : summed) {
      if (q >= sizes_.size())
        throw std::out_of_range("directional_sum: axis " + std::to_string(q));
      in_sum[q] = 1;
    }
    Index lo(sizes_.size(), 0), hi(sizes_.size(), 0);
    for (std::size_t q = 0; q < sizes_.size(); ++q) {
      if (in_sum[q]) {
        if (i[q] < 0 || i[q] > sizes_[q])
          throw std::out_of_range(
              "directional_sum: count " + std::to_string(i[q]) +
              " exceeds window on summed axis " + std::to_string(q));
        lo[q] = 1;
        hi[q] = i[q];
      } else {
        if (i[q] < 0 || i[q] >= sizes_[q])
          throw std::out_of_range(
              "directional_sum: fixed offset " + std::to_string(i[q]) +
              " outside window on axis " + std::to_string(q));
        lo[q] = hi[q] = i[q] + 1;
      }
    }
    return rect_sum(lo, hi);
  }

 private:
  Index sizes_;
  std::vector<long long> strides_;
  std::vector<T> data_;

  void check_dim(const Index& i) const {
    if (i.size() != sizes_.size())
      throw std::invalid_argument("PrefixTable: index dimension mismatch");
  }

  std::size_t flat(const Index& corner) const {
    long long p = 0;
    for (std::size_t q = 0; q < corner.size(); ++q) p += corner[q] * strides_[q];
    return static_cast<std::size_t>(p);
  }

  void fill_values(std::size_t axis, Index& offset,
                   const std::function<T(const Index&)>& site_value) {
    if (axis == sizes_.size()) {
      Index corner(offset);
      for (auto& v : corner) v += 1;
      data_[flat(corner)] = site_value(offset);
      return;
    }
    for (offset[axis] = 0; offset[axis] < sizes_[axis]; ++offset[axis])
      fill_values(axis + 1, offset, site_value);
    offset[axis] = 0;
  }

  // In-place divide-and-conquer prefix scan of `len` entries spaced `stride`
  // apart, starting from accumulated value `carry`; returns the raw total of
  // the segment.  Both the prefixes and the returned total are built from
  // balanced partial sums.
  T tree_scan(T* p, long long stride, long long len, T carry) {
    if (len <= 0) return T{};
    if (len <= 16) {
      T acc = carry;
      T tot{};
      for (long long t = 0; t < len; ++t) {
        T v = p[t * stride];
        tot += v;
        acc += v;
        p[t * stride] = acc;
      }
      return tot;
    }
    const long long half = len / 2;
    T left = tree_scan(p, stride, half, carry);
    T right = tree_scan(p + half * stride, stride, len - half, carry + left);
    return left + right;
  }

  void scan_axis(std::size_t axis) {
    // One scan per line along `axis`; other coordinates range over their full
    // extended range (the zero layers stay zero and cost nothing to revisit).
    Index corner(sizes_.size(), 0);
    scan_lines(axis, 0, corner);
  }

  void scan_lines(std::size_t axis, std::size_t q, Index& corner) {
    if (q == sizes_.size()) {
      corner[axis] = 1;
      tree_scan(&data_[flat(corner)], strides_[axis], sizes_[axis], T{});
      corner[axis] = 0;
      return;
    }
    if (q == axis) {
      scan_lines(axis, q + 1, corner);
      return;
    }
    for (corner[q] = 0; corner[q] <= sizes_[q]; ++corner[q])
      scan_lines(axis, q + 1, corner);
    corner[q] = 0;
  }
};

// Builds the exact-integer or floating prefix table for a window given a site
// evaluation callback (0-based offsets).
PrefixTable<long long> build_prefix_table_int(
    const Index& sizes, const std::function<long long(const Index&)>& site_value);
PrefixTable<double> build_prefix_table(
    const Index& sizes, const std::function<double(const Index&)>& site_value);

// All window indices n (1 <= n_q <= sizes_q) whose coordinates on axes
// restriction+1 .. d (1-based) are powers of two; axes 1 .. restriction are
// unconstrained.  restriction = 0 gives the fully dyadic family, restriction =
// d the whole window.  Lexicographically ascending, last axis fastest.
std::vector<Index> dyadic_indices(const Index& sizes, std::size_t restriction);

// 2^k with overflow guard (k < 62).
long long pow2ll(long long k);

}  // namespace lilab
