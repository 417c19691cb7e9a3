#include "lilab/maximal_stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lilab {

MaximalResult maximal_function(const PrefixTable<double>& table,
                               std::size_t restriction) {
  const Index& sizes = table.sizes();
  const std::size_t d = sizes.size();
  if (restriction > d) {
    throw std::invalid_argument("maximal_function: restriction " +
                                std::to_string(restriction) + " exceeds dimension " +
                                std::to_string(d));
  }
  MaximalResult result;
  result.window = sizes;
  result.restriction = restriction;
  result.value = -1.0;
  const Index ones(d, 1);
  for (const Index& n : dyadic_indices(sizes, restriction)) {
    const double sum = table.rect_sum(ones, n);
    const double value = std::abs(sum) / lil_normalizer(n);
    if (value > result.value) {
      result.value = value;
      result.argmax = n;
    }
  }
  if (result.value < 0.0) {
    throw std::invalid_argument("maximal_function: empty window family");
  }
  return result;
}

MaximalResult maximal_function(const FieldSample& sample,
                               std::size_t restriction) {
  return maximal_function(sample.table, restriction);
}

double y_statistic(const PrefixTable<double>& table, const Index& exponents) {
  const Index& sizes = table.sizes();
  const std::size_t d = sizes.size();
  if (exponents.size() != d) {
    throw std::invalid_argument("y_statistic: exponent vector has dimension " +
                                std::to_string(exponents.size()) + ", table has " +
                                std::to_string(d));
  }
  Index extent(d);
  double denom = 1.0;
  for (std::size_t q = 0; q < d; ++q) {
    if (exponents[q] < 0) {
      throw std::invalid_argument("y_statistic: negative exponent at axis " +
                                  std::to_string(q));
    }
    extent[q] = pow2ll(exponents[q]);
    if (extent[q] > sizes[q]) {
      throw std::out_of_range("y_statistic: block 2^" +
                              std::to_string(exponents[q]) +
                              " exceeds window size " + std::to_string(sizes[q]) +
                              " on axis " + std::to_string(q));
    }
    denom *= std::sqrt(static_cast<double>(extent[q]));
    denom *= std::sqrt(log_plus(static_cast<double>(std::max<long long>(exponents[q], 1))));
  }
  const Index ones(d, 1);
  return std::abs(table.rect_sum(ones, extent)) / denom;
}

double y_statistic(const FieldSample& sample, const Index& exponents) {
  return y_statistic(sample.table, exponents);
}

double z_statistic(const PrefixTable<double>& table, std::size_t axis,
                   AxisBlock block) {
  const Index& sizes = table.sizes();
  const std::size_t d = sizes.size();
  if (axis >= d) {
    throw std::invalid_argument("z_statistic: axis " + std::to_string(axis) +
                                " out of range for dimension " + std::to_string(d));
  }
  const long long thickness = (block == AxisBlock::two_layer) ? 2 : 1;
  if (sizes[axis] < thickness) {
    throw std::invalid_argument("z_statistic: window size " +
                                std::to_string(sizes[axis]) + " on axis " +
                                std::to_string(axis) +
                                " cannot hold a block of thickness " +
                                std::to_string(thickness));
  }
  // Exponent lists for the non-scanned axes: every power of two that fits.
  std::vector<std::vector<long long>> exps(d);
  for (std::size_t q = 0; q < d; ++q) {
    if (q == axis) {
      exps[q] = {0};  // placeholder, the scanned axis uses the fixed thickness
      continue;
    }
    for (long long e = 0; pow2ll(e) <= sizes[q]; ++e) exps[q].push_back(e);
  }
  const Index ones(d, 1);
  double best = 0.0;
  std::vector<std::size_t> pos(d, 0);
  while (true) {
    Index extent(d);
    double denom = 1.0;
    for (std::size_t q = 0; q < d; ++q) {
      if (q == axis) {
        extent[q] = thickness;
        continue;
      }
      const long long e = exps[q][pos[q]];
      extent[q] = pow2ll(e);
      denom *= std::sqrt(static_cast<double>(extent[q]));
      denom *= std::sqrt(log_plus(static_cast<double>(std::max<long long>(e, 1))));
    }
    const double value = std::abs(table.rect_sum(ones, extent)) / denom;
    best = std::max(best, value);
    // Odometer over the non-scanned axes.
    std::size_t q = 0;
    while (q < d) {
      if (q == axis) {
        ++q;
        continue;
      }
      if (++pos[q] < exps[q].size()) break;
      pos[q] = 0;
      ++q;
    }
    if (q == d) break;
  }
  return best;
}

double z_statistic(const FieldSample& sample, std::size_t axis, AxisBlock block) {
  return z_statistic(sample.table, axis, block);
}

DyadicRatioDiagnostic dyadic_ratio_diagnostic(const PrefixTable<double>& table) {
  DyadicRatioDiagnostic diag;
  diag.full = maximal_function(table, table.sizes().size());
  diag.dyadic = maximal_function(table, 0);
  if (diag.dyadic.value > diag.full.value) {
    throw std::logic_error(
        "dyadic_ratio_diagnostic: dyadic maximum exceeds full maximum");
  }
  if (diag.dyadic.value == 0.0) {
    diag.ratio = (diag.full.value == 0.0)
                     ? 1.0
                     : std::numeric_limits<double>::infinity();
  } else {
    diag.ratio = diag.full.value / diag.dyadic.value;
  }
  return diag;
}

DyadicRatioDiagnostic dyadic_ratio_diagnostic(const FieldSample& sample) {
  return dyadic_ratio_diagnostic(sample.table);
}

}  // namespace lilab
