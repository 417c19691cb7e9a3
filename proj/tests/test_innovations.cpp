#include <doctest.h>

#include <cmath>

#include "lilab/innovations.hpp"

using namespace lilab;

TEST_CASE("built-in marginals are centered with unit variance") {
  for (MarginalLaw law : {MarginalLaw::rademacher, MarginalLaw::two_point,
                          MarginalLaw::heavy_three_point}) {
    auto d = marginal_discrete_law(law);
    CHECK(std::abs(d.mean()) <= 1e-12);
    CHECK(d.variance() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(marginal_discrete_law(MarginalLaw::gaussian),
                  std::invalid_argument);
}

TEST_CASE("draws are a pure function of seed and site") {
  auto model = InnovationModel::make_iid(2, MarginalLaw::rademacher);
  auto small = sample_realization(model, 99, {-2, -2}, {3, 3});
  auto large = sample_realization(model, 99, {-5, -5}, {8, 8});
  for_each_index({-2, -2}, {3, 3}, [&](const Index& site) {
    CHECK(small.value_at(site) == large.value_at(site));
  });
  auto other_seed = sample_realization(model, 100, {-2, -2}, {3, 3});
  int diffs = 0;
  for_each_index({-2, -2}, {3, 3}, [&](const Index& site) {
    if (other_seed.value_at(site) != small.value_at(site)) ++diffs;
  });
  CHECK(diffs > 0);
}

TEST_CASE("sampled moments match the marginals") {
  const long long n = 100000;
  for (MarginalLaw law : {MarginalLaw::rademacher, MarginalLaw::gaussian,
                          MarginalLaw::two_point, MarginalLaw::heavy_three_point}) {
    auto model = InnovationModel::make_iid(1, law);
    auto r = sample_realization(model, 7, {0}, {n - 1});
    double s1 = 0.0, s2 = 0.0;
    for (long long i = 0; i < n; ++i) {
      double v = r.value_at({i});
      s1 += v;
      s2 += v * v;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    // Both moments are within 5 standard errors for every built-in marginal
    // (worst fourth moment is 25 for the heavy three-point law).
    CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 5.0 * 5.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("product realizations factor through per-axis draws") {
  auto model = InnovationModel::make_product(
      {MarginalLaw::rademacher, MarginalLaw::rademacher});
  auto r = sample_realization(model, 3, {-4, -4}, {4, 4});

  SUBCASE("site value is the product of axis draws") {
    for_each_index({-4, -4}, {4, 4}, [&](const Index& site) {
      CHECK(r.value_at(site) == r.axis_value(0, site[0]) * r.axis_value(1, site[1]));
    });
  }

  SUBCASE("rank-1 cross identity holds exactly") {
    for (long long i1 = -4; i1 <= 4; ++i1)
      for (long long i2 = -4; i2 <= 4; ++i2)
        for (long long j1 = -4; j1 <= 4; ++j1)
          for (long long j2 = -4; j2 <= 4; ++j2)
            CHECK(r.value_at({i1, i2}) * r.value_at({j1, j2}) ==
                  r.value_at({i1, j2}) * r.value_at({j1, i2}));
  }

  SUBCASE("Gaussian axes satisfy the cross identity to rounding") {
    auto gm = InnovationModel::make_product(
        {MarginalLaw::gaussian, MarginalLaw::gaussian});
    auto gr = sample_realization(gm, 5, {-3, -3}, {3, 3});
    for (long long i1 = -3; i1 <= 3; ++i1)
      for (long long j1 = -3; j1 <= 3; ++j1) {
        double lhs = gr.value_at({i1, 0}) * gr.value_at({j1, 2});
        double rhs = gr.value_at({i1, 2}) * gr.value_at({j1, 0});
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
      }
  }
}

TEST_CASE("reads outside the materialized box fail loudly") {
  auto model = InnovationModel::make_iid(1, MarginalLaw::rademacher);
  auto r = sample_realization(model, 1, {-2}, {5});
  CHECK_NOTHROW(r.value_at({-2}));
  CHECK_NOTHROW(r.value_at({5}));
  CHECK_THROWS_AS(r.value_at({6}), std::out_of_range);
  CHECK_THROWS_AS(r.value_at({-3}), std::out_of_range);
  try {
    r.value_at({7});
  } catch (const std::out_of_range& e) {
    // The offending site and the box bounds are both named.
    CHECK(std::string(e.what()).find("(7)") != std::string::npos);
    CHECK(std::string(e.what()).find("(-2)") != std::string::npos);
  }
}

TEST_CASE("combination evaluation") {
  auto model = InnovationModel::make_iid(1, MarginalLaw::gaussian);
  auto r = sample_realization(model, 17, {-3}, {3});
  auto c = AtomCombination::atom({0}, 2.0) + AtomCombination::atom({-2}, -0.5) +
           AtomCombination::constant_term(1, 1.25);
  CHECK(evaluate(c, r) ==
        doctest::Approx(1.25 + 2.0 * r.value_at({0}) - 0.5 * r.value_at({-2}))
            .epsilon(1e-15));
  auto out_of_box = AtomCombination::atom({9}, 1.0);
  CHECK_THROWS_AS(evaluate(out_of_box, r), std::out_of_range);
}

TEST_CASE("gaussian draws are finite and nondegenerate") {
  auto model = InnovationModel::make_iid(1, MarginalLaw::gaussian);
  auto r = sample_realization(model, 23, {0}, {9999});
  double min_v = 1e300, max_v = -1e300;
  for (long long i = 0; i < 10000; ++i) {
    double v = r.value_at({i});
    CHECK(std::isfinite(v));
    min_v = std::min(min_v, v);
    max_v = std::max(max_v, v);
  }
  CHECK(min_v < -2.5);
  CHECK(max_v > 2.5);
}
