#pragma once

// Config-driven experiment harness: deterministic Monte Carlo runners around
// the window statistics, deviation-inequality and weak-type checkers, strict
// JSON config parsing, and CSV/JSON reports whose numeric fields are
// byte-reproducible for a fixed config and seed regardless of thread count.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lilab/field_model.hpp"
#include "lilab/laws.hpp"

namespace lilab {

inline constexpr char library_version[] = "1.0.0";

enum class ExperimentKind {
  maximal_estimate,
  verify_decomposition,
  check_deviation,
  check_orlicz_lemmas,
  series,
  dyadic_ratio,
};

std::string experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name);

// Field-model description as written in config files.
struct ModelSpec {
  std::string field = "atom";           // "atom" | "causal-linear"
  std::string innovations = "iid";      // "iid" | "product"
  std::string marginal = "rademacher";  // iid marginal name
  std::vector<std::string> axis_marginals;             // product marginals
  std::vector<std::pair<Index, double>> coefficients;  // causal taps a_j

  // Materializes and validates the model in dimension d.
  FieldModel build(std::size_t d) const;
};

// Grid for the deviation experiment: each replication draws n martingale
// differences; the event at a grid point is {|sum| > x and the sum of
// squares plus conditional variances <= y}.
struct DeviationGrid {
  std::size_t n = 32;
  std::vector<double> x_grid = {1, 2, 3, 4, 5, 6};
  std::vector<double> y_grid = {8, 16, 32, 64};
};

struct ExperimentConfig {
  long long schema_version = 1;
  ExperimentKind experiment = ExperimentKind::maximal_estimate;
  std::size_t d = 1;
  Index window;                 // dyadic exponents per axis
  ModelSpec model;
  double p = 2.0;
  double r = 0.0;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  std::size_t threads = 0;      // 0: LILAB_THREADS env variable, else 1
  std::string out;              // report path ("" = none)
  std::string format = "csv";   // "csv" | "json"
  std::vector<Index> schedule;  // window-exponent schedule (norms / ratios)
  DeviationGrid deviation;
  std::optional<double> cap;    // verdict threshold override

  // Structural invariants plus per-experiment requirements; throws
  // std::invalid_argument naming the offending field.
  void validate() const;
};

// Strict parser: the schema version must match, unknown fields are rejected
// with their dotted path, and type mismatches name the field.  The returned
// config has been validated.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

struct ReportRow {
  long long replication = -1;  // -1 for aggregate rows
  std::string statistic;
  std::string window;  // row window or grid annotation; "" = config window
  double value = 0.0;
  double ci_lo = std::numeric_limits<double>::quiet_NaN();
  double ci_hi = std::numeric_limits<double>::quiet_NaN();
  std::string verdict;  // "pass" | "fail" | "" (informational)
};

struct Report {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  bool pass = true;            // conjunction of all verdict-carrying rows
  double wall_clock_ms = 0.0;  // the one field exempt from reproducibility
  std::string version = library_version;

  std::string to_csv() const;   // fixed column set, %.17g numerics
  std::string to_json() const;  // ordered keys; the config echo round-trips
};

Report report_from_json(const std::string& json_text);

// Writes in the requested format ("csv" | "json"); throws on I/O failure.
void write_report(const Report& report, const std::string& path,
                  const std::string& format);

// One-sided upper confidence bound for a binomial proportion (Wilson score);
// z defaults to the 99% normal quantile.
inline constexpr double wilson_z_99 = 2.3263478740408408;
double wilson_upper(std::size_t hits, std::size_t trials,
                    double z = wilson_z_99);

// next/prev with the degenerate conventions 0/0 -> 1 (a vanishing field
// keeps a neutral profile) and positive/0 -> +infinity.
double growth_ratio(double prev, double next);

// Joint finite law of a nonnegative pair (X, Y); atom probabilities are
// strictly positive and sum to 1.
struct WeakTypeAtom {
  double x = 0.0;
  double y = 0.0;
  double prob = 0.0;
};

struct WeakTypePoint {
  double t = 0.0;
  double lhs = 0.0;  // P{X > 2t}
  double rhs = 0.0;  // integral over s >= 1 of P{Y > st}, evaluated exactly
  bool pass = false;
};

// Verifies the domination hypothesis x P{X >= x} <= E[Y 1{X >= x}] exactly
// at every positive support point of X (a violation is a configuration
// error and throws std::invalid_argument), then evaluates the tail-transfer
// conclusion P{X > 2t} <= E[(Y - t)^+] / t exactly at each grid t.
std::vector<WeakTypePoint> check_weak_type_transfer(
    const std::vector<WeakTypeAtom>& pair_law,
    const std::vector<double>& t_grid);

// Per grid point: empirical probability of the joint deviation event over
// the given number of replications, each drawing n iid differences from the
// centered unit-variance marginal, with the Wilson upper bound and the
// sub-Gaussian reference bound 2 exp(-x^2 / (2y)).
struct DeviationPoint {
  double x = 0.0;
  double y = 0.0;
  std::size_t hits = 0;
  double p_hat = 0.0;
  double upper = 0.0;
  double bound = 0.0;
  bool pass = false;  // upper <= bound
};

std::vector<DeviationPoint> check_deviation_inequality(
    std::size_t n, MarginalLaw law, const std::vector<double>& x_grid,
    const std::vector<double>& y_grid, std::size_t replications,
    std::uint64_t seed, std::size_t threads = 1);

// Dispatches on config.experiment, stamps the wall clock and the overall
// verdict.  Numeric report fields depend only on the config and seed, never
// on the thread count.
Report run_experiment(const ExperimentConfig& config);

}  // namespace lilab
