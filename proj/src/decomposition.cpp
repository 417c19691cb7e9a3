#include "lilab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "lilab/norms.hpp"
#include "lilab/rng.hpp"

namespace lilab {

namespace {

Index axis_step(std::size_t d, std::size_t axis, long long v) {
  Index e(d, 0);
  e[axis] = v;
  return e;
}

void check_dim1(const FieldModel& model, const char* op) {
  if (model.dim() != 1) {
    throw std::invalid_argument(std::string(op) +
                                ": requires dimension 1, model has dimension " +
                                std::to_string(model.dim()));
  }
}

// Per-axis key extents of a combination's support.
void key_extents(const AtomCombination& c, Index& lo, Index& hi) {
  const std::size_t d = c.dim();
  lo.assign(d, 0);
  hi.assign(d, 0);
  bool first = true;
  for (const auto& [key, coeff] : c.atoms()) {
    (void)coeff;
    for (std::size_t q = 0; q < d; ++q) {
      if (first || key[q] < lo[q]) lo[q] = key[q];
      if (first || key[q] > hi[q]) hi[q] = key[q];
    }
    first = false;
  }
}

void validate_term(const DecompositionTerm& term) {
  const std::size_t d = term.combination.dim();
  if (!(conditional_projection(term.combination, term.defining_index) ==
        term.combination)) {
    throw std::logic_error(
        "decomposition term is not measurable at its defining index: " +
        term.label);
  }
  const AtomCombination zero(d);
  for (std::size_t q = 0; q < d; ++q) {
    if (!term.in_I[q]) continue;
    for (long long j = 1; j <= 2; ++j) {
      const AtomCombination shifted =
          shift(term.combination, axis_step(d, q, j * term.spacing[q]));
      if (!(conditional_projection(shifted, term.defining_index) == zero)) {
        throw std::logic_error(
            "shifted decomposition term fails the orthomartingale "
            "annihilation on axis " +
            std::to_string(q) + ": " + term.label);
      }
    }
  }
}

bool scale_family(DecompositionVariant v) {
  return v == DecompositionVariant::general_half_block ||
         v == DecompositionVariant::general_half_block_lagged ||
         v == DecompositionVariant::general_full_block ||
         v == DecompositionVariant::dim2_tabulated;
}

struct AxisShape {
  long long block = 1;   // sites summed along the axis inside the block
  bool shell = false;    // difference of two truncations vs a single one
  long long hi = 0;      // upper (weaker) truncation bound
  long long lo = 0;      // lower bound, used when shell
};

AxisShape axis_shape(DecompositionVariant v, long long kq, bool member,
                     std::size_t i_size, std::size_t dim) {
  const long long p = pow2ll(kq);
  AxisShape s;
  if (!member) {
    s.shell = false;
    s.hi = -p;
    s.block = (v == DecompositionVariant::general_full_block)
                  ? p
                  : (kq == 0 ? 2 : p);
    return s;
  }
  switch (v) {
    case DecompositionVariant::general_half_block:
    case DecompositionVariant::general_half_block_lagged:
      if (kq == 0) {
        s.block = 1;
        s.shell = true;
        s.hi = (v == DecompositionVariant::general_half_block) ? 0 : -1;
        s.lo = s.hi - 1;
      } else {
        s.block = pow2ll(kq - 1);
        s.shell = true;
        s.hi = -pow2ll(kq - 1);
        s.lo = -p;
      }
      return s;
    case DecompositionVariant::general_full_block:
      if (kq == 0) {
        s.block = 1;
        s.shell = true;
        s.hi = 0;
        s.lo = -1;
      } else {
        s.block = p;
        s.shell = true;
        s.hi = -pow2ll(kq - 1);
        s.lo = -p;
      }
      return s;
    case DecompositionVariant::dim2_tabulated:
      if (i_size == dim) {
        // All axes summed: same shapes as the half-block family.
        if (kq == 0) {
          s.block = 1;
          s.shell = true;
          s.hi = 0;
          s.lo = -1;
        } else {
          s.block = pow2ll(kq - 1);
          s.shell = true;
          s.hi = -pow2ll(kq - 1);
          s.lo = -p;
        }
      } else {
        // Single-axis cells: full block with the consecutive shell.
        s.block = p;
        s.shell = true;
        s.hi = -p;
        s.lo = -p - 1;
      }
      return s;
    default:
      throw std::logic_error("axis_shape: not a scale-family variant");
  }
}

std::string subset_label(const std::vector<std::size_t>& I) {
  std::ostringstream os;
  os << "{";
  for (std::size_t t = 0; t < I.size(); ++t) os << (t ? "," : "") << I[t];
  os << "}";
  return os.str();
}

// Nested-chain per-axis choice: a martingale block at scale s (summed) or a
// coboundary copy at scale j (translated).
struct AxisChoice {
  bool summed = false;
  long long scale = 0;
};

}  // namespace

AtomCombination u_k(const FieldModel& model, long long k) {
  check_dim1(model, "u_k");
  if (k < 0) throw std::invalid_argument("u_k: negative scale");
  const long long len = pow2ll(k);
  return conditional_projection(symbolic_partial_sum(model, Index{len}),
                                Index{-len});
}

AtomCombination d_k(const FieldModel& model, long long k) {
  check_dim1(model, "d_k");
  const AtomCombination uk = u_k(model, k);
  return uk + shift(uk, Index{pow2ll(k)}) - u_k(model, k + 1);
}

AtomCombination axis_partial_sum(const AtomCombination& g, std::size_t axis,
                                 long long len) {
  if (axis >= g.dim()) {
    throw std::invalid_argument("axis_partial_sum: axis " +
                                std::to_string(axis) +
                                " out of range for dimension " +
                                std::to_string(g.dim()));
  }
  if (len < 0) throw std::invalid_argument("axis_partial_sum: negative length");
  AtomCombination out(g.dim());
  for (long long t = 0; t < len; ++t) {
    out += shift(g, axis_step(g.dim(), axis, t));
  }
  return out;
}

AtomCombination axis_u(const AtomCombination& g, std::size_t axis,
                       long long j) {
  if (j < 0) throw std::invalid_argument("axis_u: negative scale");
  const long long len = pow2ll(j);
  return conditional_projection_axis(axis_partial_sum(g, axis, len), axis,
                                     -len);
}

AtomCombination axis_d(const AtomCombination& g, std::size_t axis,
                       long long s) {
  if (s < 1) throw std::invalid_argument("axis_d: scale must be >= 1");
  const AtomCombination u_prev = axis_u(g, axis, s - 1);
  return u_prev + shift(u_prev, axis_step(g.dim(), axis, pow2ll(s - 1))) -
         axis_u(g, axis, s);
}

std::string variant_name(DecompositionVariant v) {
  switch (v) {
    case DecompositionVariant::nested_chain:
      return "nested-chain";
    case DecompositionVariant::nested_chain_no_origin:
      return "nested-chain-no-origin";
    case DecompositionVariant::general_half_block:
      return "general-half-block";
    case DecompositionVariant::general_half_block_lagged:
      return "general-half-block-lagged";
    case DecompositionVariant::general_full_block:
      return "general-full-block";
    case DecompositionVariant::dim2_tabulated:
      return "dim2-tabulated";
  }
  throw std::logic_error("variant_name: unknown variant");
}

DecompositionVariant variant_from_name(const std::string& name) {
  for (DecompositionVariant v :
       {DecompositionVariant::nested_chain,
        DecompositionVariant::nested_chain_no_origin,
        DecompositionVariant::general_half_block,
        DecompositionVariant::general_half_block_lagged,
        DecompositionVariant::general_full_block,
        DecompositionVariant::dim2_tabulated}) {
    if (variant_name(v) == name) return v;
  }
  throw std::invalid_argument(
      "unknown decomposition variant '" + name +
      "' (expected one of: nested-chain, nested-chain-no-origin, "
      "general-half-block, general-half-block-lagged, general-full-block, "
      "dim2-tabulated)");
}

DecompositionVariant default_variant(std::size_t dim) {
  (void)dim;
  return DecompositionVariant::nested_chain;
}

std::vector<DecompositionVariant> variants_for_dimension(std::size_t dim) {
  std::vector<DecompositionVariant> out{DecompositionVariant::nested_chain};
  if (dim == 1) out.push_back(DecompositionVariant::nested_chain_no_origin);
  out.push_back(DecompositionVariant::general_half_block);
  out.push_back(DecompositionVariant::general_half_block_lagged);
  out.push_back(DecompositionVariant::general_full_block);
  if (dim == 2) out.push_back(DecompositionVariant::dim2_tabulated);
  return out;
}

DecompositionTerm d_kI(const FieldModel& model, const Index& k,
                       const std::vector<std::size_t>& I,
                       DecompositionVariant variant) {
  const std::size_t d = model.dim();
  if (!scale_family(variant)) {
    throw std::invalid_argument(
        "d_kI: variant " + variant_name(variant) +
        " is not a scale family; use build_decomposition for it");
  }
  if (variant == DecompositionVariant::dim2_tabulated && d != 2) {
    throw std::invalid_argument("d_kI: " + variant_name(variant) +
                                " requires dimension 2");
  }
  if (k.size() != d) {
    throw std::invalid_argument("d_kI: scale vector has dimension " +
                                std::to_string(k.size()) + ", model has " +
                                std::to_string(d));
  }
  std::vector<bool> in_I(d, false);
  for (std::size_t q : I) {
    if (q >= d) {
      throw std::invalid_argument("d_kI: axis " + std::to_string(q) +
                                  " out of range");
    }
    in_I[q] = true;
  }
  for (std::size_t q = 0; q < d; ++q) {
    if (k[q] < 0) {
      throw std::invalid_argument("d_kI: negative scale on axis " +
                                  std::to_string(q));
    }
  }

  Index block(d);
  std::vector<AxisShape> shapes(d);
  for (std::size_t q = 0; q < d; ++q) {
    shapes[q] = axis_shape(variant, k[q], in_I[q], I.size(), d);
    block[q] = shapes[q].block;
  }
  AtomCombination comb = symbolic_partial_sum(model, block);
  Index defining(d);
  Index spacing(d);
  for (std::size_t q = 0; q < d; ++q) {
    if (shapes[q].shell) {
      comb = conditional_projection_axis(comb, q, shapes[q].hi) -
             conditional_projection_axis(comb, q, shapes[q].lo);
    } else {
      comb = conditional_projection_axis(comb, q, shapes[q].hi);
    }
    defining[q] = shapes[q].hi;
    spacing[q] = pow2ll(k[q]);
  }

  DecompositionTerm term;
  term.k = k;
  term.in_I = in_I;
  term.combination = std::move(comb);
  term.defining_index = defining;
  term.spacing = spacing;
  term.label = variant_name(variant) + " k=" + index_to_string(k) +
               " I=" + subset_label(I);
  validate_term(term);
  return term;
}

DecompositionPlan build_decomposition(const FieldModel& model, const Index& n,
                                      DecompositionVariant variant) {
  const std::size_t d = model.dim();
  model.validate();
  if (n.size() != d) {
    throw std::invalid_argument("build_decomposition: exponent vector has "
                                "dimension " +
                                std::to_string(n.size()) + ", model has " +
                                std::to_string(d));
  }
  for (std::size_t q = 0; q < d; ++q) {
    if (n[q] < 0) {
      throw std::invalid_argument(
          "build_decomposition: negative exponent on axis " +
          std::to_string(q));
    }
  }
  if (variant == DecompositionVariant::nested_chain_no_origin && d != 1) {
    throw std::invalid_argument("build_decomposition: " +
                                variant_name(variant) +
                                " requires dimension 1");
  }
  if (variant == DecompositionVariant::dim2_tabulated && d != 2) {
    throw std::invalid_argument("build_decomposition: " +
                                variant_name(variant) +
                                " requires dimension 2");
  }

  DecompositionPlan plan;
  plan.variant = variant;
  plan.exponents = n;
  plan.window.resize(d);
  for (std::size_t q = 0; q < d; ++q) plan.window[q] = pow2ll(n[q]);
  plan.observable = model.observable();

  if (scale_family(variant)) {
    const Index zero(d, 0);
    for_each_index(zero, n, [&](const Index& k) {
      for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        std::vector<std::size_t> I;
        for (std::size_t q = 0; q < d; ++q) {
          if (mask & (std::size_t{1} << q)) I.push_back(q);
        }
        DecompositionTerm term = d_kI(model, k, I, variant);
        if (term.combination.is_zero()) continue;
        PlannedTerm planned;
        planned.ranges.resize(d);
        for (std::size_t q = 0; q < d; ++q) {
          TermRange& range = planned.ranges[q];
          range.summed = term.in_I[q];
          range.first = 0;
          const long long span = pow2ll(n[q] - k[q]);
          range.count = range.summed ? span : span + 1;
        }
        planned.term = std::move(term);
        plan.terms.push_back(std::move(planned));
      }
    });
  } else {
    // Nested chain: one choice per axis — a martingale block at some scale
    // (summed) or a coboundary copy at some scale (translated).
    std::vector<std::vector<AxisChoice>> choices(d);
    for (std::size_t q = 0; q < d; ++q) {
      for (long long s = 0; s <= n[q]; ++s) choices[q].push_back({true, s});
      for (long long j = 0; j <= n[q]; ++j) choices[q].push_back({false, j});
    }
    std::vector<std::size_t> pos(d, 0);
    while (true) {
      AtomCombination comb = plan.observable;
      PlannedTerm planned;
      planned.ranges.resize(d);
      DecompositionTerm& term = planned.term;
      term.k.assign(d, 0);
      term.in_I.assign(d, false);
      term.defining_index.assign(d, 0);
      term.spacing.assign(d, 0);
      std::ostringstream label;
      label << variant_name(variant);
      bool viable = true;
      for (std::size_t q = 0; q < d; ++q) {
        const AxisChoice& c = choices[q][pos[q]];
        TermRange& range = planned.ranges[q];
        term.k[q] = c.scale;
        term.in_I[q] = c.summed;
        if (c.summed) {
          if (c.scale == 0) {
            comb = comb - conditional_projection_axis(comb, q, -1);
            term.spacing[q] = 1;
          } else {
            comb = axis_d(comb, q, c.scale);
            term.spacing[q] = pow2ll(c.scale);
          }
          term.defining_index[q] = 0;
          range.summed = true;
          range.first = 0;
          range.count = pow2ll(n[q] - c.scale);
          label << " axis" << q << ":block(" << c.scale << ")";
        } else {
          comb = axis_u(comb, q, c.scale);
          term.defining_index[q] = -pow2ll(c.scale);
          range.summed = false;
          if (c.scale == n[q]) {
            term.spacing[q] = 1;
            range.first = 0;
            range.count = 1;
          } else {
            term.spacing[q] = pow2ll(c.scale + 1);
            range.first = 0;
            range.count = pow2ll(n[q] - c.scale - 1);
            if (variant == DecompositionVariant::nested_chain_no_origin) {
              range.first = 1;
              range.count -= 1;
            }
          }
          label << " axis" << q << ":copy(" << c.scale << ")";
        }
        if (range.count <= 0) viable = false;
      }
      if (viable && !comb.is_zero()) {
        term.combination = std::move(comb);
        term.label = label.str();
        validate_term(term);
        plan.terms.push_back(std::move(planned));
      }
      std::size_t q = 0;
      while (q < d && ++pos[q] == choices[q].size()) {
        pos[q] = 0;
        ++q;
      }
      if (q == d) break;
    }
  }

  // Innovation box the evaluation reads: the window sums of the observable
  // plus every translated copy of every term.
  Index lo(d, 0), hi(d, 0);
  {
    Index klo, khi;
    key_extents(plan.observable, klo, khi);
    for (std::size_t q = 0; q < d; ++q) {
      lo[q] = std::min<long long>(0, klo[q]);
      hi[q] = std::max<long long>(0, plan.window[q] - 1 + khi[q]);
    }
  }
  for (const PlannedTerm& planned : plan.terms) {
    Index klo, khi;
    key_extents(planned.term.combination, klo, khi);
    for (std::size_t q = 0; q < d; ++q) {
      const TermRange& range = planned.ranges[q];
      const long long min_off = range.first * planned.term.spacing[q];
      const long long max_off =
          (range.first + range.count - 1) * planned.term.spacing[q];
      lo[q] = std::min(lo[q], min_off + klo[q]);
      hi[q] = std::max(hi[q], max_off + khi[q]);
    }
  }
  plan.box_lo = lo;
  plan.box_hi = hi;
  return plan;
}

PointwiseCheck evaluate_pointwise(const DecompositionPlan& plan,
                                  const Realization& realization) {
  const std::size_t d = plan.window.size();
  if (realization.dim() != d) {
    throw std::invalid_argument("evaluate_pointwise: realization dimension " +
                                std::to_string(realization.dim()) +
                                " does not match plan dimension " +
                                std::to_string(d));
  }
  for (std::size_t q = 0; q < d; ++q) {
    if (realization.lo[q] > plan.box_lo[q] ||
        realization.hi[q] < plan.box_hi[q]) {
      throw std::invalid_argument(
          "evaluate_pointwise: realization box on axis " + std::to_string(q) +
          " is [" + std::to_string(realization.lo[q]) + ", " +
          std::to_string(realization.hi[q]) + "], plan needs [" +
          std::to_string(plan.box_lo[q]) + ", " +
          std::to_string(plan.box_hi[q]) + "]");
    }
  }

  const auto combination_value = [&](const AtomCombination& c,
                                     const Index& offset) {
    double v = c.constant();
    Index site(d);
    for (const auto& [key, coeff] : c.atoms()) {
      for (std::size_t q = 0; q < d; ++q) site[q] = key[q] + offset[q];
      v += coeff * realization.value_at(site);
    }
    return v;
  };

  PointwiseCheck check;
  {
    PrefixTable<double> field(plan.window, [&](const Index& j) {
      return combination_value(plan.observable, j);
    });
    const Index ones(d, 1);
    for_each_index(ones, plan.window, [&](const Index& i) {
      check.lhs = std::max(check.lhs, std::abs(field.rect_sum(ones, i)));
    });
  }

  for (const PlannedTerm& planned : plan.terms) {
    Index counts(d);
    bool empty = false;
    for (std::size_t q = 0; q < d; ++q) {
      counts[q] = planned.ranges[q].count;
      if (counts[q] <= 0) empty = true;
    }
    if (empty || planned.term.combination.is_zero()) continue;
    PrefixTable<double> grid(counts, [&](const Index& t) {
      Index offset(d);
      for (std::size_t q = 0; q < d; ++q) {
        offset[q] =
            (planned.ranges[q].first + t[q]) * planned.term.spacing[q];
      }
      return combination_value(planned.term.combination, offset);
    });
    std::vector<std::size_t> summed_axes;
    for (std::size_t q = 0; q < d; ++q) {
      if (planned.ranges[q].summed) summed_axes.push_back(q);
    }
    double best = 0.0;
    const Index zero(d, 0);
    Index top(d);
    for (std::size_t q = 0; q < d; ++q) top[q] = counts[q] - 1;
    Index query(d);
    for_each_index(zero, top, [&](const Index& t) {
      for (std::size_t q = 0; q < d; ++q) {
        query[q] = planned.ranges[q].summed ? t[q] + 1 : t[q];
      }
      best = std::max(best, std::abs(grid.directional_sum(query, summed_axes)));
    });
    check.rhs += best;
  }

  check.pass = check.lhs <= check.rhs + 1e-9 * (1.0 + std::abs(check.rhs));
  return check;
}

PointwiseCheck verify_pointwise_inequality(const FieldModel& model,
                                           const Index& n,
                                           const Realization& realization,
                                           DecompositionVariant variant) {
  return evaluate_pointwise(build_decomposition(model, n, variant),
                            realization);
}

PointwiseCheck verify_pointwise_inequality(const FieldModel& model,
                                           const Index& n,
                                           const Realization& realization) {
  return verify_pointwise_inequality(model, n, realization,
                                     default_variant(model.dim()));
}

std::vector<VariantOutcome> run_variant_suite(
    const std::function<FieldModel(std::size_t)>& model_for_rep,
    const SuiteConfig& config) {
  if (config.variants.empty()) {
    throw std::invalid_argument("run_variant_suite: no variants requested");
  }
  if (config.realizations == 0) {
    throw std::invalid_argument("run_variant_suite: no realizations requested");
  }
  std::vector<VariantOutcome> outcomes(config.variants.size());
  for (std::size_t v = 0; v < config.variants.size(); ++v) {
    outcomes[v].variant = config.variants[v];
    outcomes[v].max_violation = -std::numeric_limits<double>::infinity();
    outcomes[v].min_slack = std::numeric_limits<double>::infinity();
  }
  for (std::size_t rep = 0; rep < config.realizations; ++rep) {
    const FieldModel model = model_for_rep(rep);
    std::vector<DecompositionPlan> plans;
    plans.reserve(config.variants.size());
    for (DecompositionVariant variant : config.variants) {
      plans.push_back(build_decomposition(model, config.n, variant));
    }
    Index lo = plans.front().box_lo;
    Index hi = plans.front().box_hi;
    for (const DecompositionPlan& plan : plans) {
      lo = index_min(lo, plan.box_lo);
      for (std::size_t q = 0; q < hi.size(); ++q) {
        hi[q] = std::max(hi[q], plan.box_hi[q]);
      }
    }
    const Realization realization = sample_realization(
        model.innovations, child_seed(config.seed, rep), lo, hi);
    for (std::size_t v = 0; v < plans.size(); ++v) {
      const PointwiseCheck check = evaluate_pointwise(plans[v], realization);
      VariantOutcome& out = outcomes[v];
      out.realizations += 1;
      if (!check.pass) out.failures += 1;
      out.max_violation = std::max(out.max_violation, check.lhs - check.rhs);
      out.min_slack = std::min(out.min_slack, check.rhs - check.lhs);
    }
  }
  return outcomes;
}

std::vector<CellComparison> compare_dim2_cells(const FieldModel& model,
                                               const Index& n) {
  if (model.dim() != 2) {
    throw std::invalid_argument("compare_dim2_cells: requires dimension 2");
  }
  std::vector<CellComparison> cells;
  const Index zero(2, 0);
  for_each_index(zero, n, [&](const Index& k) {
    for (std::size_t mask = 0; mask < 4; ++mask) {
      std::vector<std::size_t> I;
      for (std::size_t q = 0; q < 2; ++q) {
        if (mask & (std::size_t{1} << q)) I.push_back(q);
      }
      const DecompositionTerm tab =
          d_kI(model, k, I, DecompositionVariant::dim2_tabulated);
      const DecompositionTerm ref =
          d_kI(model, k, I, DecompositionVariant::general_half_block);
      CellComparison cell;
      cell.k = k;
      cell.I = I;
      cell.agrees = tab.combination == ref.combination;
      cell.tabulated = tab.combination.to_string();
      cell.reference = ref.combination.to_string();
      cells.push_back(std::move(cell));
    }
  });
  return cells;
}

AtomCombination conditioned_partial_sum(const FieldModel& model,
                                        const Index& n) {
  return conditional_projection(symbolic_partial_sum(model, n),
                                Index(model.dim(), 0));
}

std::map<Index, double> mw_inner_sums(const FieldModel& model, const Index& n) {
  const std::size_t d = model.dim();
  if (n.size() != d) {
    throw std::invalid_argument("mw_inner_sums: window has dimension " +
                                std::to_string(n.size()) + ", model has " +
                                std::to_string(d));
  }
  const Index R = model.max_offset();
  std::map<Index, double> out;
  const Index zero(d, 0);
  for_each_index(zero, R, [&](const Index& l) {
    double c = 0.0;
    for (const auto& [j, a] : model.coefficients) {
      bool counted = true;
      for (std::size_t q = 0; q < d; ++q) {
        const long long t = j[q] - l[q];
        if (t < 0 || t > n[q] - 1) {
          counted = false;
          break;
        }
      }
      if (counted) c += a;
    }
    if (c != 0.0) out[l] = c;
  });
  return out;
}

namespace {

bool discrete_innovations(const InnovationModel& model) {
  if (model.kind == InnovationKind::iid) {
    return marginal_is_discrete(model.marginal);
  }
  for (MarginalLaw law : model.axis_laws) {
    if (!marginal_is_discrete(law)) return false;
  }
  return true;
}

// Monte Carlo Orlicz norm of a combination with a bootstrap percentile CI.
double mc_orlicz_norm(const AtomCombination& c, const InnovationModel& innov,
                      double p, double r, std::uint64_t seed,
                      std::size_t samples, double* ci_halfwidth) {
  Index lo, hi;
  key_extents(c, lo, hi);
  std::vector<double> values(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const Realization real =
        sample_realization(innov, child_seed(seed, s), lo, hi);
    values[s] = evaluate(c, real);
  }
  const double value = orlicz_norm_empirical(values, p, r);
  const std::size_t boots = 64;
  std::vector<double> boot(boots);
  std::vector<double> resample(samples);
  for (std::size_t b = 0; b < boots; ++b) {
    for (std::size_t t = 0; t < samples; ++t) {
      const std::uint64_t h =
          hash_site(seed ^ 0xB007B007u, b + 1,
                    Index{static_cast<long long>(t)});
      resample[t] = values[h % samples];
    }
    boot[b] = orlicz_norm_empirical(resample, p, r);
  }
  std::sort(boot.begin(), boot.end());
  const double lo_q = boot[static_cast<std::size_t>(0.025 * (boots - 1))];
  const double hi_q = boot[static_cast<std::size_t>(0.975 * (boots - 1))];
  if (ci_halfwidth) *ci_halfwidth = (hi_q - lo_q) / 2.0;
  return value;
}

}  // namespace

MwSeriesResult mw_series(const FieldModel& model, const Index& n_max,
                         long long exact_state_cap, bool allow_monte_carlo,
                         std::uint64_t mc_seed, std::size_t mc_samples) {
  const std::size_t d = model.dim();
  model.validate();
  if (n_max.size() != d) {
    throw std::invalid_argument("mw_series: n_max has dimension " +
                                std::to_string(n_max.size()) + ", model has " +
                                std::to_string(d));
  }
  for (std::size_t q = 0; q < d; ++q) {
    if (n_max[q] < 1) {
      throw std::invalid_argument("mw_series: n_max must be >= 1 per axis");
    }
  }
  MwSeriesResult result;
  const Index R = model.max_offset();

  // Per-axis stabilization sweep: the conditioned combination changes along
  // axis q exactly while coefficients with axis-q offset >= n_q exist, so
  // the first consecutive equality is final.
  Index clamp(d);
  for (std::size_t q = 0; q < d; ++q) clamp[q] = R[q] + 1;
  result.stabilization_index.assign(d, 1);
  for (std::size_t q = 0; q < d; ++q) {
    Index probe = clamp;
    long long s = 1;
    for (;; ++s) {
      probe[q] = s;
      const AtomCombination at_s = conditioned_partial_sum(model, probe);
      probe[q] = s + 1;
      const AtomCombination at_next = conditioned_partial_sum(model, probe);
      if (at_s == at_next) break;
      if (s > R[q] + 1) {
        throw std::logic_error("mw_series: stabilization sweep overran");
      }
    }
    result.stabilization_index[q] = s;
  }
  result.stabilized = index_leq(result.stabilization_index, n_max);

  const double r_param = 2.0 * static_cast<double>(d - 1);
  const auto cell_norm = [&](const AtomCombination& c) {
    if (c.is_zero()) return 0.0;
    if (discrete_innovations(model.innovations)) {
      try {
        const DiscreteLaw law =
            exact_law_of(c, model.innovations, exact_state_cap);
        result.exact_cells += 1;
        return orlicz_norm(law, 2.0, r_param);
      } catch (const std::length_error&) {
        if (!allow_monte_carlo) throw;
      }
    } else if (!allow_monte_carlo) {
      throw std::length_error(
          "mw_series: continuous marginal needs the Monte Carlo fallback");
    }
    double ci = 0.0;
    const double value = mc_orlicz_norm(c, model.innovations, 2.0, r_param,
                                        mc_seed, mc_samples, &ci);
    result.sampled_cells += 1;
    result.ci_halfwidth += ci;  // scaled by the cell weight at the call site
    return value;
  };

  // Series weights aggregated per clamped cell: the conditioned combination
  // for window n equals the one for min(n, stabilization) componentwise.
  std::map<Index, double> weights;
  const Index ones(d, 1);
  for_each_index(ones, n_max, [&](const Index& nn) {
    Index cell = index_min(nn, result.stabilization_index);
    double w = 1.0;
    for (std::size_t q = 0; q < d; ++q) {
      w *= std::pow(static_cast<double>(nn[q]), -1.5);
    }
    weights[cell] += w;
  });

  double ci_weighted = 0.0;
  for (const auto& [cell, weight] : weights) {
    const AtomCombination full = conditioned_partial_sum(model, cell);
    const AtomCombination adapted = conditional_projection(
        shift(symbolic_partial_sum(model, cell), ones), Index(d, 0));
    const double before = result.ci_halfwidth;
    result.ci_halfwidth = 0.0;
    const double norm_full = cell_norm(full);
    const double norm_adapted = cell_norm(adapted);
    ci_weighted += weight * result.ci_halfwidth;
    result.ci_halfwidth = before;
    result.series_full += weight * norm_full;
    result.series_adapted += weight * norm_adapted;
  }
  result.ci_halfwidth = ci_weighted;
  return result;
}

double innovation_norm(const InnovationModel& model,
                       std::size_t gaussian_samples, std::uint64_t seed) {
  model.validate();
  const double r_param = 2.0 * static_cast<double>(model.dim - 1);
  const AtomCombination origin =
      AtomCombination::atom(Index(model.dim, 0));
  if (discrete_innovations(model)) {
    const DiscreteLaw law = exact_law_of(origin, model);
    return orlicz_norm(law, 2.0, r_param);
  }
  std::vector<double> values(gaussian_samples);
  const Index zero(model.dim, 0);
  for (std::size_t s = 0; s < gaussian_samples; ++s) {
    const Realization real =
        sample_realization(model, child_seed(seed, s), zero, zero);
    values[s] = real.value_at(zero);
  }
  return orlicz_norm_empirical(values, 2.0, r_param);
}

double hannan_series(const FieldModel& model, std::size_t gaussian_samples,
                     std::uint64_t seed) {
  model.validate();
  double coefficient_mass = 0.0;
  for (const auto& [j, a] : model.coefficients) {
    (void)j;
    coefficient_mass += std::abs(a);
  }
  return coefficient_mass *
         innovation_norm(model.innovations, gaussian_samples, seed);
}

}  // namespace lilab
