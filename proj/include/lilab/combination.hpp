#pragma once

// Finite linear combinations of single-site innovation atoms plus a constant,
// with the conditioning calculus used throughout: translation, coordinatewise
// truncation (conditioning on the past of a lattice index), per-axis
// truncation, and single-site extraction.
//
// The truncation rule implements conditional expectation for the innovation
// models of this library (independent single-site inputs, mean zero): keeping
// exactly the atoms whose site lies inside the conditioning past is the exact
// conditional expectation of the combination; everything dropped has mean
// zero independent of the retained sigma-field.

#include <map>
#include <string>
#include <vector>

#include "lilab/lattice.hpp"

namespace lilab {

class AtomCombination {
 public:
  explicit AtomCombination(std::size_t dim) : dim_(dim) {}

  static AtomCombination atom(const Index& site, double coeff = 1.0);
  static AtomCombination constant_term(std::size_t dim, double value);

  std::size_t dim() const { return dim_; }
  double constant() const { return constant_; }
  // Coefficient of the atom at `site` (0 if absent).
  double coeff(const Index& site) const;
  const std::map<Index, double>& atoms() const { return coeffs_; }
  std::size_t support_size() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty() && constant_ == 0.0; }

  AtomCombination& operator+=(const AtomCombination& o);
  AtomCombination& operator-=(const AtomCombination& o);
  AtomCombination& operator*=(double s);
  friend AtomCombination operator+(AtomCombination a, const AtomCombination& b) {
    a += b;
    return a;
  }
  friend AtomCombination operator-(AtomCombination a, const AtomCombination& b) {
    a -= b;
    return a;
  }
  friend AtomCombination operator*(AtomCombination a, double s) {
    a *= s;
    return a;
  }
  bool operator==(const AtomCombination& o) const {
    return dim_ == o.dim_ && constant_ == o.constant_ && coeffs_ == o.coeffs_;
  }

  std::string to_string() const;

 private:
  std::size_t dim_;
  std::map<Index, double> coeffs_;
  double constant_ = 0.0;

  void set_coeff(const Index& site, double value);
  friend AtomCombination shift(const AtomCombination& c, const Index& j);
  friend AtomCombination conditional_projection(const AtomCombination& c,
                                                const Index& i);
  friend AtomCombination conditional_projection_axis(const AtomCombination& c,
                                                     std::size_t axis,
                                                     long long bound);
  friend AtomCombination hannan_projector(const AtomCombination& c,
                                          const Index& j);
};

// Translation: the atom at site l moves to site l + j (composition with the
// shift by j); the constant part is unchanged.
AtomCombination shift(const AtomCombination& c, const Index& j);

// Conditioning on the past of i: keeps the constant and exactly the atoms
// whose site l satisfies l <= i coordinatewise.
AtomCombination conditional_projection(const AtomCombination& c, const Index& i);

// Conditioning along a single axis: keeps the constant and the atoms whose
// site has coordinate <= bound on `axis`; other coordinates are unrestricted.
AtomCombination conditional_projection_axis(const AtomCombination& c,
                                            std::size_t axis, long long bound);

// Single-site component: the atom at site j with its coefficient, and nothing
// else.  The family over all sites recovers the combination minus its
// constant part (constants are annihilated by every single-site extraction).
AtomCombination hannan_projector(const AtomCombination& c, const Index& j);

}  // namespace lilab
