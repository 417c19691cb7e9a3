#include "lilab/lattice.hpp"

#include <cmath>
#include <sstream>

namespace lilab {

std::string index_to_string(const Index& i) {
  std::ostringstream os;
  os << '(';
  for (std::size_t q = 0; q < i.size(); ++q) {
    if (q) os << ',';
    os << i[q];
  }
  os << ')';
  return os.str();
}

bool index_leq(const Index& a, const Index& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("index_leq: dimension mismatch");
  for (std::size_t q = 0; q < a.size(); ++q)
    if (a[q] > b[q]) return false;
  return true;
}

Index index_min(const Index& a, const Index& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("index_min: dimension mismatch");
  Index r(a.size());
  for (std::size_t q = 0; q < a.size(); ++q) r[q] = std::min(a[q], b[q]);
  return r;
}

Index index_add(const Index& a, const Index& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("index_add: dimension mismatch");
  Index r(a.size());
  for (std::size_t q = 0; q < a.size(); ++q) r[q] = a[q] + b[q];
  return r;
}

Index index_sub(const Index& a, const Index& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("index_sub: dimension mismatch");
  Index r(a.size());
  for (std::size_t q = 0; q < a.size(); ++q) r[q] = a[q] - b[q];
  return r;
}

Index index_of(std::initializer_list<long long> v) { return Index(v); }

Index index_fill(std::size_t d, long long value) { return Index(d, value); }

void for_each_index(const Index& lo, const Index& hi,
                    const std::function<void(const Index&)>& fn) {
  if (lo.size() != hi.size())
    throw std::invalid_argument("for_each_index: dimension mismatch");
  for (std::size_t q = 0; q < lo.size(); ++q)
    if (lo[q] > hi[q]) return;
  Index cur(lo);
  while (true) {
    fn(cur);
    std::size_t q = lo.size();
    while (q-- > 0) {
      if (cur[q] < hi[q]) {
        ++cur[q];
        for (std::size_t r = q + 1; r < lo.size(); ++r) cur[r] = lo[r];
        break;
      }
      if (q == 0) return;
    }
  }
}

double log_plus(double x) {
  if (!(x > 0.0))
    throw std::domain_error("log_plus: argument must be positive, got " +
                            std::to_string(x));
  return std::max(std::log(x), 1.0);
}

double log_log_plus(double x) { return log_plus(log_plus(x)); }

double lil_normalizer(const Index& n) {
  if (n.empty()) throw std::invalid_argument("lil_normalizer: dimension 0");
  double prod = 1.0;
  double loglog = 1.0;
  for (long long nq : n) {
    if (nq < 1)
      throw std::domain_error("lil_normalizer: coordinates must be >= 1, got " +
                              std::to_string(nq));
    prod *= static_cast<double>(nq);
    loglog *= log_log_plus(static_cast<double>(nq));
  }
  return std::sqrt(prod) * std::sqrt(loglog);
}

PrefixTable<long long> build_prefix_table_int(
    const Index& sizes,
    const std::function<long long(const Index&)>& site_value) {
  return PrefixTable<long long>(sizes, site_value);
}

PrefixTable<double> build_prefix_table(
    const Index& sizes, const std::function<double(const Index&)>& site_value) {
  return PrefixTable<double>(sizes, site_value);
}

std::vector<Index> dyadic_indices(const Index& sizes, std::size_t restriction) {
  if (restriction > sizes.size())
    throw std::invalid_argument("dyadic_indices: restriction exceeds dimension");
  std::vector<std::vector<long long>> choices(sizes.size());
  for (std::size_t q = 0; q < sizes.size(); ++q) {
    if (sizes[q] < 1)
      throw std::invalid_argument("dyadic_indices: window size must be >= 1");
    if (q < restriction) {
      for (long long v = 1; v <= sizes[q]; ++v) choices[q].push_back(v);
    } else {
      for (long long v = 1; v <= sizes[q]; v *= 2) choices[q].push_back(v);
    }
  }
  std::vector<Index> out;
  Index cur(sizes.size());
  std::function<void(std::size_t)> rec = [&](std::size_t q) {
    if (q == sizes.size()) {
      out.push_back(cur);
      return;
    }
    for (long long v : choices[q]) {
      cur[q] = v;
      rec(q + 1);
    }
  };
  rec(0);
  return out;
}

long long pow2ll(long long k) {
  if (k < 0 || k >= 62) throw std::domain_error("pow2ll: exponent out of range");
  return 1LL << k;
}

}  // namespace lilab
