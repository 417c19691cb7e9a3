#pragma once

// Window maxima under iterated-logarithm normalization, the dyadic-exponent
// single-window statistic, the per-axis sup statistic, and the ratio
// diagnostic comparing full-window maxima with their dyadic restriction.

#include "lilab/field_model.hpp"

namespace lilab {

struct MaximalResult {
  double value = 0.0;   // max |S_n| / lil_normalizer(n) over the family
  Index argmax;         // first n attaining the maximum (lexicographic order)
  Index window;
  std::size_t restriction = 0;  // axes 1..restriction ran over all sizes
};

// Maximum of |S_n| / lil_normalizer(n) over the dyadic family of the window:
// axes restriction+1..d are constrained to powers of two, axes
// 1..restriction are free.  restriction = d scans the whole window.
MaximalResult maximal_function(const PrefixTable<double>& table,
                               std::size_t restriction);
MaximalResult maximal_function(const FieldSample& sample,
                               std::size_t restriction);

// Single dyadic window statistic: |S_{2^n}| divided by
// sqrt(prod_q 2^{n_q}) * prod_q sqrt(max(ln(max(n_q,1)), 1)), where n is the
// vector of exponents.  The window must contain the 2^n block.
double y_statistic(const PrefixTable<double>& table, const Index& exponents);
double y_statistic(const FieldSample& sample, const Index& exponents);

// Block convention for the per-axis sup statistic: the scanned axis
// contributes a block of thickness 2 (two_layer) or 1 (single_layer); the
// other axes contribute their full dyadic extent 2^{n_q}.
enum class AxisBlock { two_layer, single_layer };

// sup over admissible exponent vectors of |S_block| divided by
// sqrt(prod_{q != axis} 2^{n_q}) * prod_{q != axis} sqrt(max(ln(max(n_q,1)),1)).
// The statistic does not depend on the exponent of the scanned axis, so the
// sup runs over the other axes' exponents (every dyadic block that fits).
double z_statistic(const PrefixTable<double>& table, std::size_t axis,
                   AxisBlock block = AxisBlock::two_layer);
double z_statistic(const FieldSample& sample, std::size_t axis,
                   AxisBlock block = AxisBlock::two_layer);

struct DyadicRatioDiagnostic {
  MaximalResult full;    // restriction = d
  MaximalResult dyadic;  // restriction = 0
  double ratio = 1.0;    // full.value / dyadic.value; 0/0 gives 1
};

// The dyadic family is a sub-family of the full window scan, so
// dyadic.value <= full.value holds exactly; violated means a programming
// error and throws.  A zero dyadic maximum with a positive full maximum
// yields an infinite ratio.
DyadicRatioDiagnostic dyadic_ratio_diagnostic(const PrefixTable<double>& table);
DyadicRatioDiagnostic dyadic_ratio_diagnostic(const FieldSample& sample);

}  // namespace lilab
