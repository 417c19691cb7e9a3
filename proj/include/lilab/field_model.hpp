#pragma once

// Stationary field models driven by innovation inputs, their symbolic
// window sums, and rendered numeric samples.
//
// A field model pairs an innovation structure with an observable f given as a
// finite combination of innovation atoms:
//   * the single-atom model: f = the innovation at the origin (the canonical
//     orthomartingale-difference field);
//   * causal linear: f = sum_j a_j * innovation(-j) over finitely many j >= 0.
// The stationary field is X_i = f composed with the shift by i, so window
// sums, maxima, and decompositions all reduce to shifted copies of f.

#include <cstdint>
#include <map>

#include "lilab/innovations.hpp"

namespace lilab {

enum class FieldKind { orthomartingale_atom, causal_linear };

std::string field_kind_name(FieldKind k);

struct FieldModel {
  FieldKind kind = FieldKind::orthomartingale_atom;
  InnovationModel innovations;
  // Causal coefficients a_j, keys j >= 0 componentwise.  The atom model is
  // the single coefficient a_0 = 1.
  std::map<Index, double> coefficients;

  static FieldModel atom_field(InnovationModel innovations);
  static FieldModel causal_linear(InnovationModel innovations,
                                  std::map<Index, double> coefficients);

  std::size_t dim() const { return innovations.dim; }

  // f as a combination: sum_j a_j * atom(-j).
  AtomCombination observable() const;

  // Componentwise maximum coefficient offset R (R = 0 for the atom model):
  // the observable reaches atoms down to -R.
  Index max_offset() const;

  void validate() const;
};

// Symbolic window sum S_n(f) = sum over 0 <= i <= n-1 of shift(f, i); any
// n_q = 0 gives the zero combination.  Throws if the symbolic support would
// exceed `support_cap` atoms.
AtomCombination symbolic_partial_sum(const FieldModel& model, const Index& n,
                                     long long support_cap = 1000000);

// A rendered window of the stationary field: site values X_i for 0-based
// offsets i inside the window, backed by a prefix table, plus the underlying
// realization for direct symbolic evaluations.
struct FieldSample {
  Index window;
  Realization realization;
  PrefixTable<double> table;

  double site_value(const Index& offset) const { return table.site(offset); }
};

// Innovation box needed to evaluate every X_i of the window plus
// `extra_margin` sites on each side: [-R - extra, window - 1 + extra].
void required_box(const FieldModel& model, const Index& window,
                  const Index& extra_margin, Index& lo, Index& hi);

// Renders the field over a window (0-based offsets 0..window_q-1).  The
// materialized innovation box follows required_box; reads outside it throw.
FieldSample render_sample(const FieldModel& model, const Index& window,
                          std::uint64_t seed, const Index& extra_margin);
FieldSample render_sample(const FieldModel& model, const Index& window,
                          std::uint64_t seed);

// Exact finite law of a combination under an innovation model with discrete
// marginals, by enumeration over the joint support (iid: one state per
// occupied site; product: one state per occupied axis coordinate).  Throws
// std::length_error if the state count would exceed `max_states`, and
// std::invalid_argument for the Gaussian marginal (no finite law).
DiscreteLaw exact_law_of(const AtomCombination& c, const InnovationModel& model,
                         long long max_states = 1 << 20);

}  // namespace lilab
