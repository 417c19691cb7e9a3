#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "lilab/decomposition.hpp"
#include "lilab/norms.hpp"
#include "lilab/rng.hpp"

namespace {

using namespace lilab;

FieldModel rademacher_linear(std::size_t d, std::map<Index, double> coeffs) {
  return FieldModel::causal_linear(
      InnovationModel::make_iid(d, MarginalLaw::rademacher),
      std::move(coeffs));
}

FieldModel atom_model(std::size_t d,
                      MarginalLaw law = MarginalLaw::rademacher) {
  return FieldModel::atom_field(InnovationModel::make_iid(d, law));
}

// Realization with every innovation on [lo, hi] equal to `value`.
Realization constant_sites(const Index& lo, const Index& hi, double value) {
  Realization real;
  real.kind = InnovationKind::iid;
  real.lo = lo;
  real.hi = hi;
  std::size_t total = 1;
  for (std::size_t q = 0; q < lo.size(); ++q) {
    total *= static_cast<std::size_t>(hi[q] - lo[q] + 1);
  }
  real.site_values.assign(total, value);
  return real;
}

FieldModel random_suite_model(std::size_t d, long long max_extent,
                              std::uint64_t seed) {
  const double pool[] = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  Index extent(d);
  for (std::size_t q = 0; q < d; ++q) {
    extent[q] = static_cast<long long>(hash_site(seed, 11 + q, Index{0}) %
                                       (max_extent + 1));
  }
  std::map<Index, double> coeffs;
  std::uint64_t stream = 100;
  for_each_index(Index(d, 0), extent, [&](const Index& j) {
    const std::uint64_t h = hash_site(seed, ++stream, j);
    if (h % 3 == 0) return;
    coeffs[j] = pool[h % 6];
  });
  if (coeffs.empty()) coeffs[Index(d, 0)] = 1.0;
  return rademacher_linear(d, std::move(coeffs));
}

}  // namespace

TEST_CASE("dimension-1 building blocks") {
  SUBCASE("atom model: every projected window sum is empty") {
    const FieldModel model = atom_model(1);
    for (long long k = 0; k <= 4; ++k) {
      CHECK(u_k(model, k).is_zero());
    }
  }

  SUBCASE("two-coefficient model keeps the past site at scale 0") {
    const FieldModel model = rademacher_linear(1, {{{0}, 1.0}, {{1}, 1.0}});
    CHECK(u_k(model, 0) == AtomCombination::atom({-1}));
  }

  SUBCASE("block identity u_k + shifted u_k - u_{k+1}") {
    const std::vector<FieldModel> models = {
        atom_model(1), rademacher_linear(1, {{{0}, 1.0}, {{1}, 1.0}}),
        rademacher_linear(1, {{{0}, 1.0}, {{1}, 0.5}, {{3}, -1.0}})};
    for (const FieldModel& model : models) {
      for (long long k = 0; k <= 3; ++k) {
        const AtomCombination uk = u_k(model, k);
        CHECK(d_k(model, k) ==
              uk + shift(uk, {pow2ll(k)}) - u_k(model, k + 1));
        // One scale further out, the block is annihilated exactly.
        CHECK(conditional_projection(d_k(model, k), {-pow2ll(k + 1)})
                  .is_zero());
      }
    }
  }

  SUBCASE("axis operators specialize to the scalar ones in dimension 1") {
    const FieldModel model =
        rademacher_linear(1, {{{0}, 0.5}, {{2}, -1.0}, {{3}, 2.0}});
    const AtomCombination f = model.observable();
    for (long long k = 0; k <= 3; ++k) {
      CHECK(axis_u(f, 0, k) == u_k(model, k));
    }
    for (long long s = 1; s <= 3; ++s) {
      CHECK(axis_d(f, 0, s) == d_k(model, s - 1));
    }
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(u_k(atom_model(2), 0), std::invalid_argument);
    CHECK_THROWS_AS(u_k(atom_model(1), -1), std::invalid_argument);
    CHECK_THROWS_AS(d_k(atom_model(2), 0), std::invalid_argument);
  }
}

TEST_CASE("per-axis operators commute across axes and annihilate") {
  AtomCombination g(2);
  g += AtomCombination::atom({0, 0});
  g += AtomCombination::atom({-1, -2}, 0.5);
  g += AtomCombination::atom({-3, 0}, 2.0);

  SUBCASE("commutation") {
    CHECK(axis_u(axis_d(g, 0, 2), 1, 1) == axis_d(axis_u(g, 1, 1), 0, 2));
    CHECK(axis_d(axis_d(g, 0, 1), 1, 2) == axis_d(axis_d(g, 1, 2), 0, 1));
    CHECK(axis_partial_sum(axis_partial_sum(g, 0, 3), 1, 2) ==
          axis_partial_sum(axis_partial_sum(g, 1, 2), 0, 3));
  }

  SUBCASE("annihilation one scale further out, per axis") {
    for (std::size_t q = 0; q < 2; ++q) {
      for (long long s = 1; s <= 3; ++s) {
        CHECK(conditional_projection_axis(axis_d(g, q, s), q, -pow2ll(s))
                  .is_zero());
      }
    }
  }

  SUBCASE("length zero and errors") {
    CHECK(axis_partial_sum(g, 0, 0).is_zero());
    CHECK_THROWS_AS(axis_partial_sum(g, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(axis_u(g, 0, -1), std::invalid_argument);
    CHECK_THROWS_AS(axis_d(g, 0, 0), std::invalid_argument);
  }
}

TEST_CASE("variant names round-trip") {
  for (std::size_t d : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
    for (DecompositionVariant v : variants_for_dimension(d)) {
      CHECK(variant_from_name(variant_name(v)) == v);
    }
  }
  CHECK(default_variant(1) == DecompositionVariant::nested_chain);
  CHECK(default_variant(2) == DecompositionVariant::nested_chain);
  CHECK_THROWS_AS(variant_from_name("no-such-variant"), std::invalid_argument);
}

TEST_CASE("scale-family cells reduce to their displayed special cases") {
  const FieldModel linear = rademacher_linear(1, {{{0}, 1.0}, {{1}, 0.5}});

  SUBCASE("scale 0 summed cell is the martingale part") {
    const DecompositionTerm term =
        d_kI(linear, {0}, {0}, DecompositionVariant::general_half_block);
    const AtomCombination f = linear.observable();
    CHECK(term.combination == f - conditional_projection(f, {-1}));
    CHECK(term.combination == AtomCombination::atom({0}));
  }

  SUBCASE("translate-only cells recover the projected window sums") {
    for (long long k = 1; k <= 3; ++k) {
      CHECK(d_kI(linear, {k}, {}, DecompositionVariant::general_half_block)
                .combination == u_k(linear, k));
      CHECK(d_kI(linear, {k}, {}, DecompositionVariant::general_full_block)
                .combination == u_k(linear, k));
    }
    // At scale 0 the families differ: block 1 versus block 2.
    CHECK(d_kI(linear, {0}, {}, DecompositionVariant::general_full_block)
              .combination == u_k(linear, 0));
    CHECK(d_kI(linear, {0}, {}, DecompositionVariant::general_half_block)
              .combination ==
          conditional_projection(symbolic_partial_sum(linear, {2}), {-1}));
  }

  SUBCASE("atom model collapses to the single all-axes scale-0 cell") {
    for (std::size_t d : {std::size_t{1}, std::size_t{2}}) {
      const FieldModel model = atom_model(d);
      std::vector<std::size_t> all_axes;
      for (std::size_t q = 0; q < d; ++q) all_axes.push_back(q);
      for (DecompositionVariant v :
           {DecompositionVariant::general_half_block,
            DecompositionVariant::general_full_block}) {
        const Index top(d, 2);
        for_each_index(Index(d, 0), top, [&](const Index& k) {
          for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
            std::vector<std::size_t> I;
            for (std::size_t q = 0; q < d; ++q) {
              if (mask & (std::size_t{1} << q)) I.push_back(q);
            }
            const AtomCombination cell = d_kI(model, k, I, v).combination;
            bool origin_cell = I.size() == d;
            for (long long kq : k) origin_cell = origin_cell && kq == 0;
            if (origin_cell) {
              CHECK(cell == model.observable());
            } else {
              CHECK(cell.is_zero());
            }
          }
        });
      }
      // The lagged family conditions strictly into the past everywhere, so
      // for the atom model even the origin cell vanishes.
      const DecompositionTerm lagged =
          d_kI(model, Index(d, 0), all_axes,
               DecompositionVariant::general_half_block_lagged);
      CHECK(lagged.combination.is_zero());
    }
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(d_kI(linear, {0}, {0}, DecompositionVariant::nested_chain),
                    std::invalid_argument);
    CHECK_THROWS_AS(d_kI(linear, {0}, {0}, DecompositionVariant::dim2_tabulated),
                    std::invalid_argument);
    CHECK_THROWS_AS(d_kI(linear, {0}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(d_kI(linear, {-1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(d_kI(linear, {0, 0}, {0}), std::invalid_argument);
  }
}

TEST_CASE("built terms satisfy measurability and annihilation") {
  const FieldModel model = rademacher_linear(
      2, {{{0, 0}, 1.0}, {{1, 0}, 0.5}, {{0, 1}, -1.0}, {{1, 1}, 2.0}});
  for (DecompositionVariant v : variants_for_dimension(2)) {
    const DecompositionPlan plan = build_decomposition(model, {2, 2}, v);
    CHECK(!plan.terms.empty());
    for (const PlannedTerm& planned : plan.terms) {
      const DecompositionTerm& term = planned.term;
      CHECK(conditional_projection(term.combination, term.defining_index) ==
            term.combination);
      for (std::size_t q = 0; q < 2; ++q) {
        if (!term.in_I[q]) continue;
        for (long long j = 1; j <= 2; ++j) {
          Index step(2, 0);
          step[q] = j * term.spacing[q];
          CHECK(conditional_projection(shift(term.combination, step),
                                       term.defining_index)
                    .is_zero());
        }
      }
    }
  }
}

TEST_CASE("pointwise verdicts on the frozen fixtures") {
  SUBCASE("dimension 1, constant-sign sites, one past-shifted atom") {
    const FieldModel model = rademacher_linear(1, {{{1}, 1.0}});
    const auto run = [&](DecompositionVariant v) {
      const DecompositionPlan plan = build_decomposition(model, {2}, v);
      return evaluate_pointwise(
          plan, constant_sites(plan.box_lo, plan.box_hi, -1.0));
    };
    const PointwiseCheck nested = run(DecompositionVariant::nested_chain);
    CHECK(nested.pass);
    CHECK(nested.lhs == doctest::Approx(4.0));
    CHECK(nested.rhs == doctest::Approx(5.0));
    const PointwiseCheck half = run(DecompositionVariant::general_half_block);
    CHECK(!half.pass);
    CHECK(half.lhs == doctest::Approx(4.0));
    CHECK(half.rhs == doctest::Approx(3.0));
    const PointwiseCheck full = run(DecompositionVariant::general_full_block);
    CHECK(!full.pass);
    CHECK(full.rhs == doctest::Approx(3.0));
    // The lagged family conditions one step further into the past, which on
    // this past-measurable field keeps enough mass to dominate.
    const PointwiseCheck lagged =
        run(DecompositionVariant::general_half_block_lagged);
    CHECK(lagged.pass);
    CHECK(lagged.rhs == doctest::Approx(7.0));
  }

  SUBCASE("dimension 1, adversarial two-site flip isolates the origin copy") {
    const FieldModel model = rademacher_linear(1, {{{1}, 1.0}});
    const auto run = [&](DecompositionVariant v) {
      const DecompositionPlan plan = build_decomposition(model, {1}, v);
      Realization real = constant_sites(plan.box_lo, plan.box_hi, -1.0);
      real.site_values[static_cast<std::size_t>(-1 - plan.box_lo[0])] = 1.0;
      return evaluate_pointwise(plan, real);
    };
    const PointwiseCheck nested = run(DecompositionVariant::nested_chain);
    CHECK(nested.pass);
    CHECK(nested.lhs == doctest::Approx(1.0));
    CHECK(nested.rhs == doctest::Approx(1.0));
    const PointwiseCheck no_origin =
        run(DecompositionVariant::nested_chain_no_origin);
    CHECK(!no_origin.pass);
    CHECK(no_origin.lhs == doctest::Approx(1.0));
    CHECK(no_origin.rhs == doctest::Approx(0.0));
  }

  SUBCASE("dimension 2, constant-sign sites, one past-shifted atom") {
    const FieldModel model = FieldModel::causal_linear(
        InnovationModel::make_iid(2, MarginalLaw::rademacher),
        {{{1, 1}, 1.0}});
    const auto run = [&](DecompositionVariant v) {
      const DecompositionPlan plan = build_decomposition(model, {2, 2}, v);
      return evaluate_pointwise(
          plan, constant_sites(plan.box_lo, plan.box_hi, -1.0));
    };
    const PointwiseCheck nested = run(DecompositionVariant::nested_chain);
    CHECK(nested.pass);
    CHECK(nested.lhs == doctest::Approx(16.0));
    CHECK(nested.rhs == doctest::Approx(25.0));
    CHECK(!run(DecompositionVariant::general_half_block).pass);
    CHECK(run(DecompositionVariant::general_half_block).rhs ==
          doctest::Approx(9.0));
    CHECK(!run(DecompositionVariant::general_full_block).pass);
    CHECK(!run(DecompositionVariant::dim2_tabulated).pass);
    CHECK(run(DecompositionVariant::dim2_tabulated).rhs ==
          doctest::Approx(13.0));
    CHECK(run(DecompositionVariant::general_half_block_lagged).pass);
  }

  SUBCASE("atom model: the chain is exact, the lagged family vanishes") {
    const FieldModel model = atom_model(1);
    const DecompositionPlan nested =
        build_decomposition(model, {3}, DecompositionVariant::nested_chain);
    const DecompositionPlan lagged = build_decomposition(
        model, {3}, DecompositionVariant::general_half_block_lagged);
    const Index lo = index_min(nested.box_lo, lagged.box_lo);
    Index hi{std::max(nested.box_hi[0], lagged.box_hi[0])};
    const Realization real =
        sample_realization(model.innovations, 77u, lo, hi);
    // For the atom field the only surviving chain term is the scale-0
    // martingale block, whose prefix maxima reproduce the left side exactly.
    CHECK(nested.terms.size() == 1);
    const PointwiseCheck chain = evaluate_pointwise(nested, real);
    CHECK(chain.pass);
    CHECK(chain.lhs == doctest::Approx(chain.rhs));
    CHECK(lagged.terms.empty());
    const PointwiseCheck dead = evaluate_pointwise(lagged, real);
    CHECK(!dead.pass);
    CHECK(dead.rhs == 0.0);
    CHECK(dead.lhs > 0.0);
  }
}

TEST_CASE("realization box margin is enforced with the axis named") {
  const FieldModel model = rademacher_linear(1, {{{0}, 1.0}, {{1}, 1.0}});
  const DecompositionPlan plan =
      build_decomposition(model, {2}, DecompositionVariant::nested_chain);
  Realization tight = constant_sites(plan.box_lo, plan.box_hi, 1.0);
  CHECK_NOTHROW(evaluate_pointwise(plan, tight));
  Realization short_box =
      constant_sites({plan.box_lo[0] + 1}, plan.box_hi, 1.0);
  CHECK_THROWS_WITH_AS(evaluate_pointwise(plan, short_box),
                       doctest::Contains("axis 0"), std::invalid_argument);
}

TEST_CASE("variant suite over random models") {
  SUBCASE("dimension 1: the chain never fails; the suite is deterministic") {
    SuiteConfig config;
    config.n = {3};
    config.realizations = 40;
    config.seed = 0xDECAF;
    config.variants = variants_for_dimension(1);
    const auto models = [](std::size_t rep) {
      return random_suite_model(1, 3, 900u + rep);
    };
    const auto outcomes = run_variant_suite(models, config);
    REQUIRE(outcomes.size() == config.variants.size());
    for (const VariantOutcome& out : outcomes) {
      CHECK(out.realizations == 40);
      if (out.variant == DecompositionVariant::nested_chain) {
        CHECK(out.failures == 0);
        CHECK(out.max_violation <= 1e-9);
      }
    }
    const auto again = run_variant_suite(models, config);
    for (std::size_t v = 0; v < outcomes.size(); ++v) {
      CHECK(outcomes[v].failures == again[v].failures);
      CHECK(outcomes[v].max_violation == again[v].max_violation);
      CHECK(outcomes[v].min_slack == again[v].min_slack);
    }
  }

  SUBCASE("dimension 2: the chain never fails") {
    SuiteConfig config;
    config.n = {2, 2};
    config.realizations = 12;
    config.seed = 0xFEED;
    config.variants = {DecompositionVariant::nested_chain,
                       DecompositionVariant::general_half_block};
    const auto outcomes = run_variant_suite(
        [](std::size_t rep) { return random_suite_model(2, 1, 300u + rep); },
        config);
    CHECK(outcomes[0].failures == 0);
    CHECK(outcomes[0].max_violation <= 1e-9);
  }

  SUBCASE("errors") {
    SuiteConfig config;
    config.n = {1};
    config.realizations = 0;
    config.variants = {DecompositionVariant::nested_chain};
    CHECK_THROWS_AS(
        run_variant_suite([](std::size_t) { return atom_model(1); }, config),
        std::invalid_argument);
    config.realizations = 1;
    config.variants.clear();
    CHECK_THROWS_AS(
        run_variant_suite([](std::size_t) { return atom_model(1); }, config),
        std::invalid_argument);
  }
}

TEST_CASE("tabulated two-dimensional cells versus the half-block family") {
  const FieldModel model = rademacher_linear(
      2, {{{0, 0}, 1.0}, {{1, 0}, 0.5}, {{0, 1}, -1.0}, {{1, 1}, 2.0}});
  const auto cells = compare_dim2_cells(model, {2, 2});
  REQUIRE(cells.size() == 9 * 4);
  std::size_t singleton_disagreements = 0;
  for (const CellComparison& cell : cells) {
    if (cell.I.size() == 0 || cell.I.size() == 2) {
      // The all-axes and no-axes cells of the tabulated list coincide with
      // the half-block family by construction.
      CHECK(cell.agrees);
    } else if (!cell.agrees) {
      singleton_disagreements += 1;
      CHECK(cell.tabulated != cell.reference);
    }
  }
  CHECK(singleton_disagreements > 0);
  CHECK_THROWS_AS(compare_dim2_cells(atom_model(1), {1}),
                  std::invalid_argument);
}

TEST_CASE("conditioned window sums and the independent inner-sum path") {
  SUBCASE("coefficients match the direct arithmetic on random models") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
      const FieldModel model = random_suite_model(2, 2, 5000u + seed);
      for (const Index& n : {Index{1, 1}, Index{2, 3}, Index{4, 4}}) {
        const AtomCombination cps = conditioned_partial_sum(model, n);
        const std::map<Index, double> inner = mw_inner_sums(model, n);
        CHECK(cps.support_size() == inner.size());
        for (const auto& [l, c] : inner) {
          Index site(2);
          for (std::size_t q = 0; q < 2; ++q) site[q] = -l[q];
          CHECK(cps.coeff(site) == doctest::Approx(c).epsilon(1e-12));
        }
      }
    }
  }

  SUBCASE("two-coefficient model stabilizes one step past its reach") {
    const FieldModel model =
        rademacher_linear(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}});
    const AtomCombination at_reach = conditioned_partial_sum(model, {2, 1});
    CHECK(at_reach.coeff({0, 0}) == doctest::Approx(2.0));
    CHECK(at_reach.coeff({-1, 0}) == doctest::Approx(1.0));
    CHECK(at_reach == conditioned_partial_sum(model, {5, 1}));
    CHECK(conditioned_partial_sum(model, {1, 1}) !=
          conditioned_partial_sum(model, {2, 1}));
  }

  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(mw_inner_sums(atom_model(2), {4}), std::invalid_argument);
  }
}

TEST_CASE("Maxwell-Woodroofe series") {
  SUBCASE("atom model, dimension 1: adapted zero, full in closed form") {
    const MwSeriesResult r = mw_series(atom_model(1), {8});
    CHECK(r.series_adapted == 0.0);
    double expected = 0.0;
    for (int n = 1; n <= 8; ++n) expected += std::pow(n, -1.5);
    // The single conditioned cell is the innovation itself, whose (2, 0)
    // norm is its second moment, 1.
    CHECK(r.series_full == doctest::Approx(expected).epsilon(1e-9));
    CHECK(r.stabilization_index == Index{1});
    CHECK(r.stabilized);
    CHECK(r.exact_cells == 1);
    CHECK(r.sampled_cells == 0);
    CHECK(r.ci_halfwidth == 0.0);
  }

  SUBCASE("atom model, dimension 2: adapted zero, weighted innovation norm") {
    const MwSeriesResult r = mw_series(atom_model(2), {3, 3});
    CHECK(r.series_adapted == 0.0);
    const double unit = orlicz_norm(
        marginal_discrete_law(MarginalLaw::rademacher), 2.0, 2.0);
    double expected = 0.0;
    for (int a = 1; a <= 3; ++a) {
      for (int b = 1; b <= 3; ++b) expected += std::pow(a * b, -1.5) * unit;
    }
    CHECK(r.series_full == doctest::Approx(expected).epsilon(1e-9));
    CHECK(r.stabilization_index == Index{1, 1});
  }

  SUBCASE("dimension 1 linear model matches the coefficient closed form") {
    const FieldModel model =
        rademacher_linear(1, {{{0}, 1.0}, {{1}, 1.0}, {{2}, -0.5}});
    const Index n_max{12};
    const MwSeriesResult r = mw_series(model, n_max);
    CHECK(r.stabilization_index == Index{3});
    CHECK(r.stabilized);
    CHECK(r.sampled_cells == 0);
    // With r = 0 the Orlicz norm is the plain second moment, so each cell is
    // the Euclidean norm of its inner-sum coefficients.
    double expected = 0.0;
    for (long long n = 1; n <= n_max[0]; ++n) {
      const Index cell{std::min<long long>(n, 3)};
      double sq = 0.0;
      for (const auto& [l, c] : mw_inner_sums(model, cell)) {
        (void)l;
        sq += c * c;
      }
      expected += std::pow(static_cast<double>(n), -1.5) * std::sqrt(sq);
    }
    CHECK(r.series_full == doctest::Approx(expected).epsilon(1e-9));
    CHECK(r.series_adapted < r.series_full);
    CHECK(r.series_adapted > 0.0);
  }

  SUBCASE("partial series grow with the window bound") {
    const FieldModel model = rademacher_linear(1, {{{0}, 1.0}, {{1}, 1.0}});
    const double s4 = mw_series(model, {4}).series_full;
    const double s8 = mw_series(model, {8}).series_full;
    const double s16 = mw_series(model, {16}).series_full;
    CHECK(s4 < s8);
    CHECK(s8 < s16);
  }

  SUBCASE("wide support falls back to Monte Carlo with a reported interval") {
    std::map<Index, double> coeffs;
    for (long long j = 0; j <= 11; ++j) coeffs[{j}] = 1.0;
    const FieldModel model = rademacher_linear(1, std::move(coeffs));
    const MwSeriesResult r =
        mw_series(model, {12}, /*exact_state_cap=*/1 << 10,
                  /*allow_monte_carlo=*/true, /*mc_seed=*/0x51AB5EED,
                  /*mc_samples=*/512);
    CHECK(r.exact_cells == 0);
    CHECK(r.sampled_cells == 24);
    CHECK(r.ci_halfwidth > 0.0);
    // Cross-check the sampled series against the exact closed form.
    double expected = 0.0;
    for (long long n = 1; n <= 12; ++n) {
      const Index cell{std::min<long long>(n, 12)};
      double sq = 0.0;
      for (const auto& [l, c] : mw_inner_sums(model, cell)) {
        (void)l;
        sq += c * c;
      }
      expected += std::pow(static_cast<double>(n), -1.5) * std::sqrt(sq);
    }
    CHECK(std::abs(r.series_full - expected) / expected < 0.10);
    CHECK_THROWS_AS(mw_series(model, {12}, 1 << 10,
                              /*allow_monte_carlo=*/false),
                    std::length_error);
  }

  SUBCASE("Gaussian innovations are always sampled") {
    const MwSeriesResult r =
        mw_series(atom_model(1, MarginalLaw::gaussian), {4});
    CHECK(r.exact_cells == 0);
    CHECK(r.sampled_cells == 1);
    double weight = 0.0;
    for (int n = 1; n <= 4; ++n) weight += std::pow(n, -1.5);
    // (2, 0) norm of a standard normal is 1; Monte Carlo within a few percent.
    CHECK(r.series_full == doctest::Approx(weight).epsilon(0.05));
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(mw_series(atom_model(1), {0}), std::invalid_argument);
    CHECK_THROWS_AS(mw_series(atom_model(2), {4}), std::invalid_argument);
  }
}

TEST_CASE("Hannan series and the innovation norm") {
  SUBCASE("atom models in closed form") {
    CHECK(hannan_series(atom_model(1)) == doctest::Approx(1.0).epsilon(1e-9));
    const double unit2 = orlicz_norm(
        marginal_discrete_law(MarginalLaw::rademacher), 2.0, 2.0);
    CHECK(hannan_series(atom_model(2)) ==
          doctest::Approx(unit2).epsilon(1e-9));
  }

  SUBCASE("homogeneity in the coefficients") {
    CHECK(hannan_series(rademacher_linear(1, {{{0}, 2.0}})) ==
          doctest::Approx(2.0).epsilon(1e-9));
    const FieldModel model =
        rademacher_linear(1, {{{0}, 1.0}, {{2}, -0.5}, {{5}, 0.25}});
    CHECK(hannan_series(model) == doctest::Approx(1.75).epsilon(1e-9));
  }

  SUBCASE("product innovations use the exact product law") {
    const InnovationModel innov = InnovationModel::make_product(
        {MarginalLaw::rademacher, MarginalLaw::two_point});
    const double unit = innovation_norm(innov);
    CHECK(unit > 0.0);
    const FieldModel model = FieldModel::causal_linear(
        innov, {{{0, 0}, 1.0}, {{1, 1}, -2.0}});
    CHECK(hannan_series(model) == doctest::Approx(3.0 * unit).epsilon(1e-9));
  }

  SUBCASE("Gaussian marginal is sampled near its exact norm") {
    const double norm = innovation_norm(
        InnovationModel::make_iid(1, MarginalLaw::gaussian));
    CHECK(norm == doctest::Approx(1.0).epsilon(0.03));
  }
}
