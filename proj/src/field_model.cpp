#include "lilab/field_model.hpp"

#include <cmath>

namespace lilab {

std::string field_kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::orthomartingale_atom: return "orthomartingale_atom";
    case FieldKind::causal_linear: return "causal_linear";
  }
  throw std::logic_error("field_kind_name: unknown kind");
}

FieldModel FieldModel::atom_field(InnovationModel innovations) {
  FieldModel m;
  m.kind = FieldKind::orthomartingale_atom;
  m.coefficients[Index(innovations.dim, 0)] = 1.0;
  m.innovations = std::move(innovations);
  m.validate();
  return m;
}

FieldModel FieldModel::causal_linear(InnovationModel innovations,
                                     std::map<Index, double> coefficients) {
  FieldModel m;
  m.kind = FieldKind::causal_linear;
  m.innovations = std::move(innovations);
  m.coefficients = std::move(coefficients);
  m.validate();
  return m;
}

void FieldModel::validate() const {
  innovations.validate();
  if (coefficients.empty())
    throw std::invalid_argument("FieldModel: no coefficients");
  bool any_nonzero = false;
  for (const auto& [j, a] : coefficients) {
    if (j.size() != innovations.dim)
      throw std::invalid_argument(
          "FieldModel: coefficient index dimension mismatch at " +
          index_to_string(j));
    for (long long v : j)
      if (v < 0)
        throw std::invalid_argument(
            "FieldModel: causal coefficients need offsets >= 0, got " +
            index_to_string(j));
    if (!std::isfinite(a))
      throw std::invalid_argument("FieldModel: non-finite coefficient at " +
                                  index_to_string(j));
    if (a != 0.0) any_nonzero = true;
  }
  if (!any_nonzero)
    throw std::invalid_argument("FieldModel: all coefficients vanish");
  if (kind == FieldKind::orthomartingale_atom) {
    if (coefficients.size() != 1 ||
        coefficients.begin()->first != Index(innovations.dim, 0) ||
        coefficients.begin()->second != 1.0)
      throw std::invalid_argument(
          "FieldModel: the atom model has the single coefficient a_0 = 1");
  }
}

AtomCombination FieldModel::observable() const {
  AtomCombination f(dim());
  for (const auto& [j, a] : coefficients) {
    Index neg(j);
    for (auto& v : neg) v = -v;
    f += AtomCombination::atom(neg, a);
  }
  return f;
}

Index FieldModel::max_offset() const {
  Index r(dim(), 0);
  for (const auto& [j, a] : coefficients) {
    if (a == 0.0) continue;
    for (std::size_t q = 0; q < r.size(); ++q) r[q] = std::max(r[q], j[q]);
  }
  return r;
}

AtomCombination symbolic_partial_sum(const FieldModel& model, const Index& n,
                                     long long support_cap) {
  if (n.size() != model.dim())
    throw std::invalid_argument("symbolic_partial_sum: dimension mismatch");
  for (long long v : n)
    if (v < 0)
      throw std::invalid_argument("symbolic_partial_sum: negative window " +
                                  index_to_string(n));
  AtomCombination acc(model.dim());
  for (long long v : n)
    if (v == 0) return acc;

  // Support bound: every atom site lies in [-R, n-1].
  const Index R = model.max_offset();
  long double bound = 1.0L;
  for (std::size_t q = 0; q < n.size(); ++q)
    bound *= static_cast<long double>(n[q] + R[q]);
  if (bound > static_cast<long double>(support_cap))
    throw std::length_error(
        "symbolic_partial_sum: support bound " +
        std::to_string(static_cast<double>(bound)) + " exceeds cap " +
        std::to_string(support_cap) + " for window " + index_to_string(n));

  const AtomCombination f = model.observable();
  for_each_index(Index(n.size(), 0), index_sub(n, Index(n.size(), 1)),
                 [&](const Index& i) { acc += shift(f, i); });
  return acc;
}

void required_box(const FieldModel& model, const Index& window,
                  const Index& extra_margin, Index& lo, Index& hi) {
  if (window.size() != model.dim())
    throw std::invalid_argument("required_box: dimension mismatch");
  Index extra = extra_margin.empty() ? Index(window.size(), 0) : extra_margin;
  if (extra.size() != window.size())
    throw std::invalid_argument("required_box: margin dimension mismatch");
  const Index R = model.max_offset();
  lo.assign(window.size(), 0);
  hi.assign(window.size(), 0);
  for (std::size_t q = 0; q < window.size(); ++q) {
    if (window[q] < 1)
      throw std::invalid_argument("required_box: window must be >= 1, got " +
                                  index_to_string(window));
    if (extra[q] < 0)
      throw std::invalid_argument("required_box: negative margin");
    lo[q] = -R[q] - extra[q];
    hi[q] = window[q] - 1 + extra[q];
  }
}

FieldSample render_sample(const FieldModel& model, const Index& window,
                          std::uint64_t seed, const Index& extra_margin) {
  model.validate();
  Index lo, hi;
  required_box(model, window, extra_margin, lo, hi);
  Realization r = sample_realization(model.innovations, seed, lo, hi);
  PrefixTable<double> table(window, [&](const Index& offset) {
    double acc = 0.0;
    for (const auto& [j, a] : model.coefficients)
      acc += a * r.value_at(index_sub(offset, j));
    return acc;
  });
  return FieldSample{window, std::move(r), std::move(table)};
}

FieldSample render_sample(const FieldModel& model, const Index& window,
                          std::uint64_t seed) {
  return render_sample(model, window, seed, Index(window.size(), 0));
}

namespace {

void enumerate_iid(const std::vector<const Index*>& sites,
                   const std::vector<double>& coeffs, std::size_t level,
                   double value, double prob, const DiscreteLaw& marginal,
                   DiscreteLaw& out) {
  if (level == sites.size()) {
    out.atoms.emplace_back(value, prob);
    return;
  }
  for (const auto& [v, p] : marginal.atoms)
    enumerate_iid(sites, coeffs, level + 1, value + coeffs[level] * v, prob * p,
                  marginal, out);
}

}  // namespace

DiscreteLaw exact_law_of(const AtomCombination& c, const InnovationModel& model,
                         long long max_states) {
  model.validate();
  if (c.dim() != model.dim)
    throw std::invalid_argument("exact_law_of: dimension mismatch");

  if (model.kind == InnovationKind::iid) {
    const DiscreteLaw marginal = marginal_discrete_law(model.marginal);
    long double states = 1.0L;
    std::vector<const Index*> sites;
    std::vector<double> coeffs;
    for (const auto& [site, a] : c.atoms()) {
      sites.push_back(&site);
      coeffs.push_back(a);
      states *= static_cast<long double>(marginal.atoms.size());
    }
    if (states > static_cast<long double>(max_states))
      throw std::length_error("exact_law_of: " +
                              std::to_string(static_cast<double>(states)) +
                              " states exceed cap " + std::to_string(max_states));
    DiscreteLaw out;
    enumerate_iid(sites, coeffs, 0, c.constant(), 1.0, marginal, out);
    out = out.merged();
    out.validate();
    return out;
  }

  // Product innovations: one state per occupied axis coordinate.
  std::vector<std::vector<long long>> axis_coords(model.dim);
  for (const auto& [site, a] : c.atoms()) {
    (void)a;
    for (std::size_t q = 0; q < model.dim; ++q) {
      auto& v = axis_coords[q];
      if (std::find(v.begin(), v.end(), site[q]) == v.end())
        v.push_back(site[q]);
    }
  }
  std::vector<DiscreteLaw> axis_marginal(model.dim);
  long double states = 1.0L;
  // Flattened slots: (axis, coordinate) pairs.
  std::vector<std::pair<std::size_t, long long>> slots;
  for (std::size_t q = 0; q < model.dim; ++q) {
    axis_marginal[q] = marginal_discrete_law(model.axis_laws[q]);
    std::sort(axis_coords[q].begin(), axis_coords[q].end());
    for (long long coord : axis_coords[q]) {
      slots.emplace_back(q, coord);
      states *= static_cast<long double>(axis_marginal[q].atoms.size());
    }
  }
  if (states > static_cast<long double>(max_states))
    throw std::length_error("exact_law_of: " +
                            std::to_string(static_cast<double>(states)) +
                            " states exceed cap " + std::to_string(max_states));

  DiscreteLaw out;
  std::map<std::pair<std::size_t, long long>, double> assigned;
  std::function<void(std::size_t, double)> rec = [&](std::size_t level,
                                                     double prob) {
    if (level == slots.size()) {
      double value = c.constant();
      for (const auto& [site, a] : c.atoms()) {
        double factor = 1.0;
        for (std::size_t q = 0; q < model.dim; ++q)
          factor *= assigned.at({q, site[q]});
        value += a * factor;
      }
      out.atoms.emplace_back(value, prob);
      return;
    }
    const auto [q, coord] = slots[level];
    for (const auto& [v, p] : axis_marginal[q].atoms) {
      assigned[{q, coord}] = v;
      rec(level + 1, prob * p);
    }
    assigned.erase({q, coord});
  };
  rec(0, 1.0);
  out = out.merged();
  out.validate();
  return out;
}

}  // namespace lilab
