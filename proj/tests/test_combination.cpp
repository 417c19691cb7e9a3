#include <doctest.h>

#include <random>

#include "lilab/combination.hpp"

using namespace lilab;

namespace {

AtomCombination random_combination(std::mt19937_64& gen, std::size_t d) {
  std::uniform_int_distribution<int> natoms(0, 6);
  std::uniform_int_distribution<long long> coord(-8, 8);
  std::uniform_int_distribution<int> pick(0, 6);
  const double pool[] = {1.0, -1.0, 2.0, -2.0, 0.5, -0.25, 3.75};
  AtomCombination c(d);
  int n = natoms(gen);
  for (int t = 0; t < n; ++t) {
    Index site(d);
    for (auto& s : site) s = coord(gen);
    c += AtomCombination::atom(site, pool[pick(gen)]);
  }
  if (pick(gen) < 3) c += AtomCombination::constant_term(d, pool[pick(gen)]);
  return c;
}

Index random_index(std::mt19937_64& gen, std::size_t d) {
  std::uniform_int_distribution<long long> coord(-8, 8);
  Index i(d);
  for (auto& v : i) v = coord(gen);
  return i;
}

}  // namespace

TEST_CASE("conditioning keeps exactly the past atoms and the constant") {
  auto c = AtomCombination::constant_term(1, 3.0) +
           AtomCombination::atom({0}, 2.0) + AtomCombination::atom({-1}, 5.0) +
           AtomCombination::atom({1}, 7.0);

  auto p0 = conditional_projection(c, {0});
  CHECK(p0.constant() == 3.0);
  CHECK(p0.coeff({0}) == 2.0);
  CHECK(p0.coeff({-1}) == 5.0);
  CHECK(p0.coeff({1}) == 0.0);
  CHECK(p0.support_size() == 2);

  auto pm1 = conditional_projection(c, {-1});
  CHECK(pm1.constant() == 3.0);
  CHECK(pm1.support_size() == 1);
  CHECK(pm1.coeff({-1}) == 5.0);
}

TEST_CASE("conditioning in two dimensions is coordinatewise") {
  auto c = AtomCombination::atom({0, 0}) + AtomCombination::atom({-2, 1}) +
           AtomCombination::atom({1, -3});
  auto p = conditional_projection(c, {0, 0});
  CHECK(p.support_size() == 1);
  CHECK(p.coeff({0, 0}) == 1.0);  // the others each have one positive coord
}

TEST_CASE("conditioning algebra laws on random sparse combinations") {
  std::mt19937_64 gen(2024);
  for (std::size_t d = 1; d <= 3; ++d) {
    for (int rep = 0; rep < 120; ++rep) {
      auto c = random_combination(gen, d);
      auto i = random_index(gen, d);
      auto j = random_index(gen, d);

      // Idempotence.
      auto pi = conditional_projection(c, i);
      CHECK(conditional_projection(pi, i) == pi);

      // Composition law: conditioning twice conditions on the meet.
      CHECK(conditional_projection(pi, j) ==
            conditional_projection(c, index_min(i, j)));

      // Shift equivariance: conditioning a translate equals translating the
      // conditioning at the shifted level.
      CHECK(conditional_projection(shift(c, j), i) ==
            shift(conditional_projection(c, index_sub(i, j)), j));

      // Full conditioning factors through the per-axis conditionings, in any
      // axis order.
      auto seq = c;
      for (std::size_t q = 0; q < d; ++q)
        seq = conditional_projection_axis(seq, q, i[q]);
      CHECK(seq == conditional_projection(c, i));
      auto seq_rev = c;
      for (std::size_t q = d; q-- > 0;)
        seq_rev = conditional_projection_axis(seq_rev, q, i[q]);
      CHECK(seq_rev == conditional_projection(c, i));
    }
  }
}

TEST_CASE("translation moves atom sites and preserves coefficients") {
  auto c = AtomCombination::atom({0}, 2.0) + AtomCombination::atom({-1}, -1.0) +
           AtomCombination::constant_term(1, 4.0);
  auto s = shift(c, {3});
  CHECK(s.coeff({3}) == 2.0);
  CHECK(s.coeff({2}) == -1.0);
  CHECK(s.constant() == 4.0);
  CHECK(s.support_size() == 2);
  // Round trip.
  CHECK(shift(s, {-3}) == c);
}

TEST_CASE("single-site extraction") {
  auto c = AtomCombination::atom({0, 0}, 2.0) +
           AtomCombination::atom({-1, 2}, -3.0) +
           AtomCombination::constant_term(2, 9.0);

  auto at = hannan_projector(c, {-1, 2});
  CHECK(at.support_size() == 1);
  CHECK(at.coeff({-1, 2}) == -3.0);
  CHECK(at.constant() == 0.0);

  CHECK(hannan_projector(c, {5, 5}).is_zero());

  SUBCASE("extraction annihilates constants; the family reconstructs the "
          "atom part exactly") {
    auto only_const = AtomCombination::constant_term(2, 7.0);
    CHECK(hannan_projector(only_const, {0, 0}).is_zero());

    AtomCombination sum(2);
    for (const auto& [site, v] : c.atoms()) {
      (void)v;
      sum += hannan_projector(c, site);
    }
    CHECK(sum == c - AtomCombination::constant_term(2, 9.0));
  }
}

TEST_CASE("zero coefficients are pruned") {
  auto a = AtomCombination::atom({1}, 2.5) + AtomCombination::atom({0}, -1.0);
  auto z = a - a;
  CHECK(z.is_zero());
  CHECK(z.support_size() == 0);
  auto scaled = a * 0.0;
  CHECK(scaled.is_zero());
}
