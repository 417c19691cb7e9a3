#pragma once

// Calibrated law families shared by the lemma experiments, the unit tests,
// and the acceptance suite: a 20-law
// stress family for norm functionals and a 10-law family with upper tails
// for the dyadic tail-sum comparison.

#include <string>
#include <utility>
#include <vector>

#include "lilab/laws.hpp"

namespace lilab {

inline std::vector<std::pair<std::string, lilab::DiscreteLaw>>
stress_law_family() {
  using lilab::DiscreteLaw;
  std::vector<std::pair<std::string, DiscreteLaw>> fam;
  auto add = [&](std::string name, std::vector<std::pair<double, double>> atoms) {
    DiscreteLaw law;
    law.atoms = std::move(atoms);
    law.validate();
    fam.emplace_back(std::move(name), std::move(law));
  };
  add("rademacher", {{-1, 0.5}, {1, 0.5}});
  add("constant_1", {{1, 1.0}});
  add("constant_3_5", {{3.5, 1.0}});
  add("two_point_skew", {{-3, 0.1}, {1.0 / 3.0, 0.9}});
  add("heavy_three_point", {{-5, 0.02}, {0, 0.96}, {5, 0.02}});
  add("uniform_pm12", {{-2, 0.25}, {-1, 0.25}, {1, 0.25}, {2, 0.25}});
  {
    std::vector<std::pair<double, double>> a;
    for (int k = 1; k <= 8; ++k) a.emplace_back(k, 1.0 / 8.0);
    add("uniform_1_8", std::move(a));
  }
  {
    std::vector<std::pair<double, double>> a;
    double total = 0.0;
    for (int k = 1; k <= 10; ++k) total += std::pow(2.0, -k);
    for (int k = 1; k <= 10; ++k)
      a.emplace_back(std::pow(2.0, k), std::pow(2.0, -k) / total);
    add("dyadic_tail", std::move(a));
  }
  {
    std::vector<std::pair<double, double>> a;
    double total = 0.0;
    for (int k = 1; k <= 12; ++k) total += 1.0 / (k * k * k);
    for (int k = 1; k <= 12; ++k) a.emplace_back(k, (1.0 / (k * k * k)) / total);
    add("cubic_tail", std::move(a));
  }
  add("small_values", {{0.1, 0.5}, {0.2, 0.5}});
  add("mixed", {{-0.5, 0.25}, {0, 0.5}, {4, 0.25}});
  {
    std::vector<std::pair<double, double>> a = {
        {-4, 1.0 / 16}, {-2, 4.0 / 16}, {0, 6.0 / 16}, {2, 4.0 / 16}, {4, 1.0 / 16}};
    add("binomial_walk", std::move(a));
  }
  add("rare_spike", {{10, 0.01}, {0.05, 0.99}});
  add("extreme_tail", {{1, 0.999}, {1000, 0.001}});
  add("exp_values", {{std::exp(1.0), 0.5}, {std::exp(2.0), 0.25}, {std::exp(3.0), 0.25}});
  add("bernoulli_01", {{0, 0.9}, {1, 0.1}});
  add("three_scales", {{0.01, 1.0 / 3}, {1, 1.0 / 3}, {100, 1.0 / 3}});
  add("rademacher_7", {{-7, 0.5}, {7, 0.5}});
  add("centered_pair", {{1.5, 2.0 / 3}, {-3, 1.0 / 3}});
  {
    std::vector<std::pair<double, double>> a;
    for (int k = 1; k <= 7; ++k) a.emplace_back(k / 7.0, 1.0 / 7.0);
    add("sevenths", std::move(a));
  }
  return fam;
}

inline std::vector<std::pair<std::string, lilab::DiscreteLaw>>
series_law_family() {
  using lilab::DiscreteLaw;
  std::vector<std::pair<std::string, DiscreteLaw>> fam;
  auto add = [&](std::string name, std::vector<std::pair<double, double>> atoms) {
    DiscreteLaw law;
    law.atoms = std::move(atoms);
    law.validate();
    fam.emplace_back(std::move(name), std::move(law));
  };
  add("constant_2", {{2, 1.0}});
  add("constant_just_above_2", {{2.001, 1.0}});
  add("pair_4_1", {{4, 0.5}, {1, 0.5}});
  add("pair_8_2", {{8, 0.25}, {2, 0.75}});
  {
    std::vector<std::pair<double, double>> a;
    for (int k = 1; k <= 8; ++k) a.emplace_back(k, 1.0 / 8.0);
    add("uniform_1_8", std::move(a));
  }
  {
    std::vector<std::pair<double, double>> a;
    double total = 0.0;
    for (int k = 1; k <= 10; ++k) total += std::pow(2.0, -k);
    for (int k = 1; k <= 10; ++k)
      a.emplace_back(std::pow(2.0, k), std::pow(2.0, -k) / total);
    add("dyadic_tail", std::move(a));
  }
  add("extreme_tail", {{1, 0.999}, {1000, 0.001}});
  add("exp_mix", {{std::exp(2.0), 0.3}, {0.5, 0.7}});
  add("powers_of_3", {{3, 1.0 / 3}, {9, 1.0 / 3}, {27, 1.0 / 3}});
  {
    std::vector<std::pair<double, double>> a;
    double total = 0.0;
    for (int k = 1; k <= 12; ++k) total += 1.0 / (k * k * k);
    for (int k = 1; k <= 12; ++k) a.emplace_back(k, (1.0 / (k * k * k)) / total);
    add("cubic_tail", std::move(a));
  }
  return fam;
}

}  // namespace lilab
