#include "lilab/norms.hpp"

#include <algorithm>
#include <cmath>

namespace lilab {

double young_phi(double x, double p, double r) {
  if (x < 0.0)
    throw std::domain_error("young_phi: negative argument " + std::to_string(x));
  if (x == 0.0) return 0.0;
  return std::pow(x, p) * std::pow(1.0 + std::log1p(x), r);
}

namespace {

void check_pr(double p, double r) {
  if (!(p >= 1.0)) throw std::invalid_argument("requires p >= 1");
  if (!(r >= 0.0)) throw std::invalid_argument("requires r >= 0");
}

}  // namespace

double orlicz_norm(const DiscreteLaw& law, double p, double r, double scale) {
  check_pr(p, r);
  if (!(scale > 0.0)) throw std::invalid_argument("orlicz_norm: scale <= 0");
  law.validate();
  const DiscreteLaw a = law.abs();
  const double vmax = a.max_abs_value();
  if (vmax == 0.0) return 0.0;

  auto mean_phi = [&](double lambda) {
    double acc = 0.0;
    for (const auto& [v, pr] : a.atoms) acc += pr * young_phi(v / lambda, p, r);
    return scale * acc;
  };

  // Bracket the level set { E[scale phi(|X|/lambda)] = 1 }: mean_phi is
  // continuous and strictly decreasing in lambda wherever positive mass
  // exists, diverges as lambda -> 0 and vanishes as lambda -> infinity.
  double hi = 2.0 * std::max(1.0, vmax);
  for (int guard = 0; mean_phi(hi) > 1.0; ++guard) {
    hi *= 2.0;
    if (guard > 200) throw std::runtime_error("orlicz_norm: no upper bracket");
  }
  double lo = hi;
  for (int guard = 0; mean_phi(lo) <= 1.0; ++guard) {
    lo *= 0.5;
    if (guard > 2000) return 0.0;  // only reachable for vanishing mass
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_phi(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  // hi is feasible (mean <= 1), within 1e-12 relative of the infimum.
  return hi;
}

double orlicz_scaling_ratio(const DiscreteLaw& law, double p, double r,
                            double a) {
  const double denom = orlicz_norm(law, p, r, a);
  const double num = orlicz_norm(law, p, r, 1.0);
  if (denom == 0.0 && num == 0.0) return 1.0;
  if (denom == 0.0) throw std::runtime_error("orlicz_scaling_ratio: zero denominator");
  return num / denom;
}

double lp_norm(const DiscreteLaw& law, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p <= 0");
  law.validate();
  double acc = 0.0;
  for (const auto& [v, pr] : law.atoms) acc += pr * std::pow(std::abs(v), p);
  return std::pow(acc, 1.0 / p);
}

WeakLpNorms weak_lp_norms(const DiscreteLaw& law, double p) {
  if (!(p > 1.0 && p <= 2.0))
    throw std::invalid_argument("weak_lp_norms: requires 1 < p <= 2, got p = " +
                                std::to_string(p));
  law.validate();
  auto a = law.abs();  // merged, ascending distinct values
  std::sort(a.atoms.begin(), a.atoms.end(),
            [](const auto& x, const auto& y) { return x.first > y.first; });

  WeakLpNorms out;
  double mass = 0.0, partial = 0.0;
  for (const auto& [v, pr] : a.atoms) {
    mass += pr;
    partial += v * pr;
    // Event = top slice down to this atom; optimum over all events is
    // attained at one of these slices.
    out.dual_norm =
        std::max(out.dual_norm, std::pow(mass, 1.0 / p - 1.0) * partial);
    if (v > 0.0)
      out.tail_sup = std::max(out.tail_sup, v * std::pow(mass, 1.0 / p));
  }
  return out;
}

PowerComparison check_orlicz_power_lemma(const DiscreteLaw& law, double r) {
  const DiscreteLaw a = law.abs();
  if (a.max_abs_value() == 0.0)
    throw std::invalid_argument("check_orlicz_power_lemma: zero law");
  PowerComparison out;
  const DiscreteLaw square = a.map([](double v) { return v * v; });
  const DiscreteLaw root = a.map([](double v) { return std::sqrt(v); });
  out.square_ratio =
      orlicz_norm(square, 1.0, r) / std::pow(orlicz_norm(a, 2.0, r), 2.0);
  out.sqrt_ratio =
      orlicz_norm(root, 2.0, r) / std::sqrt(orlicz_norm(a, 1.0, r));
  return out;
}

SeriesLemmaResult check_series_lemma(const DiscreteLaw& law, double p, double q,
                                     int k_max) {
  check_pr(p, q);
  if (k_max < 1) throw std::invalid_argument("check_series_lemma: k_max < 1");
  law.validate();
  const DiscreteLaw a = law.abs();
  SeriesLemmaResult out;
  for (int k = 1; k <= k_max; ++k) {
    const double weight = std::pow(2.0, k * p) * std::pow(static_cast<double>(k), q);
    const double threshold = std::exp2(static_cast<double>(k)) /
                             std::sqrt(static_cast<double>(k));
    out.lhs_strict += weight * a.tail_abs_gt(threshold);
    out.lhs_nonstrict += weight * a.tail_abs_ge(threshold);
    const double cweight = std::pow(2.0, k) * std::pow(static_cast<double>(k), q);
    out.companion_lhs += cweight * a.tail_abs_gt(std::exp2(0.5 * k));
  }
  const double exponent = q + 0.5 * p;
  const double c_main = std::pow(2.0 / std::log(2.0), exponent);
  const double c_companion = 2.0 * std::pow(2.0 / std::log(2.0), q);
  double moment_main = 0.0, moment_companion = 0.0;
  for (const auto& [v, pr] : a.atoms) {
    if (v <= 1.0) continue;
    moment_main += pr * std::pow(v, p) * std::pow(std::log(v), exponent);
    moment_companion += pr * v * v * std::pow(std::log(v), q);
  }
  out.rhs = c_main * moment_main;
  out.companion_rhs = c_companion * moment_companion;
  const auto leq = [](double l, double rr) {
    return l <= rr * (1.0 + 1e-12) + 1e-12;
  };
  out.pass = leq(out.lhs_nonstrict, out.rhs);
  out.companion_pass = leq(out.companion_lhs, out.companion_rhs);
  return out;
}

EmpiricalNorm empirical_lp_norm(const std::vector<double>& sample, double p) {
  if (sample.empty()) throw std::invalid_argument("empirical_lp_norm: empty");
  if (!(p > 0.0)) throw std::invalid_argument("empirical_lp_norm: p <= 0");
  const double n = static_cast<double>(sample.size());
  double m = 0.0;
  for (double x : sample) m += std::pow(std::abs(x), p);
  m /= n;
  double s2 = 0.0;
  for (double x : sample) {
    const double d = std::pow(std::abs(x), p) - m;
    s2 += d * d;
  }
  s2 = sample.size() > 1 ? s2 / (n - 1.0) : 0.0;
  const double se = std::sqrt(s2 / n);
  const double z = 1.959963984540054;  // two-sided 95%
  EmpiricalNorm out;
  out.value = std::pow(m, 1.0 / p);
  out.ci_lo = std::pow(std::max(m - z * se, 0.0), 1.0 / p);
  out.ci_hi = std::pow(m + z * se, 1.0 / p);
  return out;
}

EmpiricalNorm empirical_lp_norm_bootstrap(const std::vector<double>& sample,
                                          double p, int resamples,
                                          std::uint64_t seed) {
  if (sample.empty()) throw std::invalid_argument("empirical_lp_norm: empty");
  if (resamples < 8)
    throw std::invalid_argument("empirical_lp_norm_bootstrap: need >= 8 resamples");
  EmpiricalNorm out = empirical_lp_norm(sample, p);
  const std::size_t n = sample.size();
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(resamples));
  for (int b = 0; b < resamples; ++b) {
    double m = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::uint64_t h =
          hash_site(seed, 0xB00757 + static_cast<std::uint64_t>(b),
                    {static_cast<long long>(t)});
      const std::size_t idx =
          static_cast<std::size_t>(to_unit(h) * static_cast<double>(n));
      m += std::pow(std::abs(sample[idx < n ? idx : n - 1]), p);
    }
    stats.push_back(std::pow(m / static_cast<double>(n), 1.0 / p));
  }
  std::sort(stats.begin(), stats.end());
  const auto at = [&](double frac) {
    const double pos = frac * static_cast<double>(stats.size() - 1);
    return stats[static_cast<std::size_t>(pos + 0.5)];
  };
  out.ci_lo = at(0.025);
  out.ci_hi = at(0.975);
  return out;
}

double orlicz_norm_empirical(const std::vector<double>& sample, double p,
                             double r) {
  if (sample.empty()) throw std::invalid_argument("orlicz_norm_empirical: empty");
  DiscreteLaw law;
  const double pr = 1.0 / static_cast<double>(sample.size());
  for (double x : sample) law.atoms.emplace_back(std::abs(x), pr);
  law = law.merged();
  return orlicz_norm(law, p, r);
}

}  // namespace lilab
