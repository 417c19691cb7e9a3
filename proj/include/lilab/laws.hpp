#pragma once

// Finite discrete probability laws (exact atom lists) and the built-in
// innovation marginals.  All built-in marginals are centered with unit
// variance; the Gaussian marginal has no finite atom list and is handled by
// sampling wherever a law object is not required.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lilab/rng.hpp"

namespace lilab {

struct DiscreteLaw {
  // (value, probability) pairs; probabilities strictly positive, summing to 1
  // within 1e-12.  Values need not be distinct (merge() canonicalizes).
  std::vector<std::pair<double, double>> atoms;

  void validate() const {
    if (atoms.empty()) throw std::invalid_argument("DiscreteLaw: no atoms");
    double total = 0.0;
    for (const auto& [v, p] : atoms) {
      (void)v;
      if (!(p > 0.0))
        throw std::invalid_argument("DiscreteLaw: probabilities must be > 0");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument(
          "DiscreteLaw: probabilities sum to " + std::to_string(total));
  }

  // Canonical form: distinct ascending values, probabilities merged.
  DiscreteLaw merged() const {
    std::map<double, double> m;
    for (const auto& [v, p] : atoms) m[v] += p;
    DiscreteLaw out;
    for (const auto& [v, p] : m) out.atoms.emplace_back(v, p);
    return out;
  }

  double expectation(const std::function<double(double)>& f) const {
    double acc = 0.0;
    for (const auto& [v, p] : atoms) acc += p * f(v);
    return acc;
  }

  double mean() const {
    return expectation([](double x) { return x; });
  }
  double variance() const {
    const double m = mean();
    return expectation([m](double x) { return (x - m) * (x - m); });
  }

  DiscreteLaw map(const std::function<double(double)>& f) const {
    DiscreteLaw out;
    for (const auto& [v, p] : atoms) out.atoms.emplace_back(f(v), p);
    return out.merged();
  }

  DiscreteLaw abs() const {
    return map([](double x) { return std::abs(x); });
  }

  double max_abs_value() const {
    double m = 0.0;
    for (const auto& [v, p] : atoms) {
      (void)p;
      m = std::max(m, std::abs(v));
    }
    return m;
  }

  // P(|X| > t) and P(|X| >= t).
  double tail_abs_gt(double t) const {
    double acc = 0.0;
    for (const auto& [v, p] : atoms)
      if (std::abs(v) > t) acc += p;
    return acc;
  }
  double tail_abs_ge(double t) const {
    double acc = 0.0;
    for (const auto& [v, p] : atoms)
      if (std::abs(v) >= t) acc += p;
    return acc;
  }

  // Law of X + Y for independent X, Y.
  static DiscreteLaw sum_independent(const DiscreteLaw& a, const DiscreteLaw& b) {
    DiscreteLaw out;
    for (const auto& [va, pa] : a.atoms)
      for (const auto& [vb, pb] : b.atoms) out.atoms.emplace_back(va + vb, pa * pb);
    return out.merged();
  }

  // Law of X * Y for independent X, Y.
  static DiscreteLaw product_independent(const DiscreteLaw& a,
                                         const DiscreteLaw& b) {
    DiscreteLaw out;
    for (const auto& [va, pa] : a.atoms)
      for (const auto& [vb, pb] : b.atoms) out.atoms.emplace_back(va * vb, pa * pb);
    return out.merged();
  }

  // Representation-level refinement: each atom split into `parts` equal
  // pieces with the same value.  The distribution is unchanged; numeric
  // routines must be invariant under it.
  DiscreteLaw split_atoms(int parts) const {
    if (parts < 1) throw std::invalid_argument("split_atoms: parts must be >= 1");
    DiscreteLaw out;
    for (const auto& [v, p] : atoms)
      for (int t = 0; t < parts; ++t) out.atoms.emplace_back(v, p / parts);
    return out;
  }

  // Inverse-CDF draw from one uniform in [0, 1).
  double sample(double u) const {
    double acc = 0.0;
    for (const auto& [v, p] : atoms) {
      acc += p;
      if (u < acc) return v;
    }
    return atoms.back().first;
  }
};

// Built-in innovation marginals (all centered, unit variance).
enum class MarginalLaw {
  rademacher,        // +-1 with probability 1/2
  gaussian,          // standard normal
  two_point,         // 1/3 w.p. 0.9, -3 w.p. 0.1
  heavy_three_point  // +-5 w.p. 0.02 each, 0 w.p. 0.96
};

std::string marginal_name(MarginalLaw law);
MarginalLaw marginal_from_name(const std::string& name);

// Finite atom list of a marginal; throws for the Gaussian.
DiscreteLaw marginal_discrete_law(MarginalLaw law);
bool marginal_is_discrete(MarginalLaw law);

// Deterministic draw from the marginal given a counter hash.
double sample_marginal(MarginalLaw law, std::uint64_t h);

}  // namespace lilab
