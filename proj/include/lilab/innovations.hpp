#pragma once

// Innovation models and their materialized realizations.
//
// Two input structures drive every field in the library:
//   * iid: one independent centered draw per lattice site;
//   * product: one independent centered draw per axis coordinate, the site
//     value being the product across axes (a rank-1 input field).
// A Realization materializes the draws over an explicit margin box; reading
// outside the box is a hard error (never a silent zero), so window/margin
// accounting mistakes surface immediately.

#include <cstdint>
#include <vector>

#include "lilab/combination.hpp"
#include "lilab/laws.hpp"

namespace lilab {

enum class InnovationKind { iid, product };

struct InnovationModel {
  InnovationKind kind = InnovationKind::iid;
  std::size_t dim = 1;
  MarginalLaw marginal = MarginalLaw::rademacher;  // iid
  std::vector<MarginalLaw> axis_laws;              // product, one per axis

  static InnovationModel make_iid(std::size_t d, MarginalLaw law);
  static InnovationModel make_product(std::vector<MarginalLaw> laws);

  // Centering check: every discrete marginal must have |mean| <= 1e-12.
  void validate() const;
};

struct Realization {
  InnovationKind kind = InnovationKind::iid;
  Index lo, hi;  // inclusive box
  // iid: row-major values over the box (last axis fastest).
  std::vector<double> site_values;
  // product: per-axis draws for coordinates lo[q] .. hi[q].
  std::vector<std::vector<double>> axis_values;

  std::size_t dim() const { return lo.size(); }

  // Innovation value at a lattice site inside the box; throws out_of_range
  // with the offending site otherwise.
  double value_at(const Index& site) const;

  // Product models only: the single-axis draw at a coordinate.
  double axis_value(std::size_t axis, long long coord) const;
};

// Materializes all draws of `model` over the inclusive box [lo, hi] for a
// seed.  Values depend only on (seed, site) — never on the box — so
// realizations with different boxes agree exactly on their overlap.
Realization sample_realization(const InnovationModel& model, std::uint64_t seed,
                               const Index& lo, const Index& hi);

// Value of a symbolic combination under a realization:
// constant + sum coeff * innovation(site).
double evaluate(const AtomCombination& c, const Realization& r);

}  // namespace lilab
