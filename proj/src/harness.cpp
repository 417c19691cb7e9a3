#include "lilab/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lilab/calibration.hpp"
#include "lilab/decomposition.hpp"
#include "lilab/law_family.hpp"
#include "lilab/maximal_stats.hpp"
#include "lilab/norms.hpp"
#include "lilab/rng.hpp"

namespace lilab {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& message) {
  throw std::invalid_argument("config: " + message);
}

std::string dotted(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// ---------------------------------------------------------------------------
// Formatting.

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest decimal that round-trips; keeps grid annotations readable.
std::string format_short(double v) {
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return format_double(v);
}

std::string window_sizes_string(const Index& exponents) {
  std::string s;
  for (std::size_t q = 0; q < exponents.size(); ++q) {
    if (q) s += 'x';
    s += std::to_string(pow2ll(exponents[q]));
  }
  return s;
}

Index window_sizes(const Index& exponents) {
  Index sizes(exponents.size());
  for (std::size_t q = 0; q < exponents.size(); ++q)
    sizes[q] = pow2ll(exponents[q]);
  return sizes;
}

// ---------------------------------------------------------------------------
// Threads.

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LILAB_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1 && parsed <= 1024)
      return static_cast<std::size_t>(parsed);
  }
  return 1;
}

// Runs body(0..count-1) on `threads` workers.  Each replication writes only
// its own preallocated slots, so results are identical for every thread
// count; the first failing replication (in index order) is rethrown.
void for_each_replication(std::size_t count, std::size_t threads,
                          const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t r = 0; r < count; ++r) body(r);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t r = t; r < count; r += threads) {
        try {
          body(r);
        } catch (...) {
          errors[r] = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  for (std::size_t r = 0; r < count; ++r)
    if (errors[r]) std::rethrow_exception(errors[r]);
}

// ---------------------------------------------------------------------------
// Window scans over a shared rendered table.

// Maximum of |S_n| / lil_normalizer(n) over the dyadic family of a
// sub-window of the table (restriction as in maximal_function).
double sub_window_maximal(const PrefixTable<double>& table,
                          const Index& sub_sizes, std::size_t restriction) {
  const Index ones(sub_sizes.size(), 1);
  double best = 0.0;
  for (const Index& n : dyadic_indices(sub_sizes, restriction)) {
    const double value =
        std::abs(table.rect_sum(ones, n)) / lil_normalizer(n);
    best = std::max(best, value);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Config schema.

void check_known_fields(const ojson& object, const std::string& path,
                        std::initializer_list<const char*> allowed) {
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* name : allowed)
      if (it.key() == name) {
        known = true;
        break;
      }
    if (!known) config_error("unknown field " + dotted(path, it.key()));
  }
}

const ojson& require_field(const ojson& object, const std::string& path,
                           const std::string& key) {
  auto it = object.find(key);
  if (it == object.end()) config_error("missing field " + dotted(path, key));
  return *it;
}

std::string as_string(const ojson& j, const std::string& path) {
  if (!j.is_string()) config_error("field " + path + " must be a string");
  return j.get<std::string>();
}

std::uint64_t as_uint(const ojson& j, const std::string& path) {
  if (!(j.is_number_unsigned() ||
        (j.is_number_integer() && j.get<long long>() >= 0)))
    config_error("field " + path + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

long long as_int(const ojson& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    config_error("field " + path + " must be an integer");
  return j.get<long long>();
}

double as_number(const ojson& j, const std::string& path) {
  if (!j.is_number()) config_error("field " + path + " must be a number");
  return j.get<double>();
}

Index as_index(const ojson& j, const std::string& path) {
  if (!j.is_array()) config_error("field " + path + " must be an array");
  Index result;
  for (std::size_t q = 0; q < j.size(); ++q)
    result.push_back(as_int(j[q], path + "[" + std::to_string(q) + "]"));
  return result;
}

std::vector<double> as_number_array(const ojson& j, const std::string& path) {
  if (!j.is_array()) config_error("field " + path + " must be an array");
  std::vector<double> result;
  for (std::size_t q = 0; q < j.size(); ++q)
    result.push_back(as_number(j[q], path + "[" + std::to_string(q) + "]"));
  return result;
}

ModelSpec parse_model(const ojson& j) {
  if (!j.is_object()) config_error("field model must be an object");
  check_known_fields(j, "model",
                     {"field", "innovations", "marginal", "axis_marginals",
                      "coefficients"});
  ModelSpec spec;
  if (j.contains("field")) spec.field = as_string(j["field"], "model.field");
  if (j.contains("innovations"))
    spec.innovations = as_string(j["innovations"], "model.innovations");
  if (j.contains("marginal"))
    spec.marginal = as_string(j["marginal"], "model.marginal");
  if (j.contains("axis_marginals")) {
    const ojson& arr = j["axis_marginals"];
    if (!arr.is_array())
      config_error("field model.axis_marginals must be an array");
    for (std::size_t q = 0; q < arr.size(); ++q)
      spec.axis_marginals.push_back(as_string(
          arr[q], "model.axis_marginals[" + std::to_string(q) + "]"));
  }
  if (j.contains("coefficients")) {
    const ojson& arr = j["coefficients"];
    if (!arr.is_array())
      config_error("field model.coefficients must be an array");
    for (std::size_t q = 0; q < arr.size(); ++q) {
      const std::string path =
          "model.coefficients[" + std::to_string(q) + "]";
      const ojson& entry = arr[q];
      if (!entry.is_object()) config_error("field " + path + " must be an object");
      check_known_fields(entry, path, {"offset", "value"});
      const Index offset =
          as_index(require_field(entry, path, "offset"), path + ".offset");
      const double value =
          as_number(require_field(entry, path, "value"), path + ".value");
      spec.coefficients.emplace_back(offset, value);
    }
  }
  return spec;
}

DeviationGrid parse_deviation(const ojson& j) {
  if (!j.is_object()) config_error("field deviation must be an object");
  check_known_fields(j, "deviation", {"n", "x_grid", "y_grid"});
  DeviationGrid grid;
  if (j.contains("n"))
    grid.n = static_cast<std::size_t>(as_uint(j["n"], "deviation.n"));
  if (j.contains("x_grid"))
    grid.x_grid = as_number_array(j["x_grid"], "deviation.x_grid");
  if (j.contains("y_grid"))
    grid.y_grid = as_number_array(j["y_grid"], "deviation.y_grid");
  return grid;
}

ojson model_to_json(const ModelSpec& spec) {
  ojson j;
  j["field"] = spec.field;
  j["innovations"] = spec.innovations;
  j["marginal"] = spec.marginal;
  if (!spec.axis_marginals.empty()) j["axis_marginals"] = spec.axis_marginals;
  if (!spec.coefficients.empty()) {
    ojson arr = ojson::array();
    for (const auto& [offset, value] : spec.coefficients) {
      ojson entry;
      entry["offset"] = offset;
      entry["value"] = value;
      arr.push_back(std::move(entry));
    }
    j["coefficients"] = std::move(arr);
  }
  return j;
}

ojson config_to_json(const ExperimentConfig& cfg) {
  ojson j;
  j["schema_version"] = cfg.schema_version;
  j["experiment"] = experiment_name(cfg.experiment);
  j["d"] = cfg.d;
  if (!cfg.window.empty()) j["window"] = cfg.window;
  j["model"] = model_to_json(cfg.model);
  j["p"] = cfg.p;
  j["r"] = cfg.r;
  j["replications"] = cfg.replications;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  if (!cfg.out.empty()) j["out"] = cfg.out;
  j["format"] = cfg.format;
  if (!cfg.schedule.empty()) {
    ojson arr = ojson::array();
    for (const Index& w : cfg.schedule) arr.push_back(w);
    j["schedule"] = std::move(arr);
  }
  if (cfg.experiment == ExperimentKind::check_deviation) {
    ojson dev;
    dev["n"] = cfg.deviation.n;
    dev["x_grid"] = cfg.deviation.x_grid;
    dev["y_grid"] = cfg.deviation.y_grid;
    j["deviation"] = std::move(dev);
  }
  if (cfg.cap) j["cap"] = *cfg.cap;
  return j;
}

// Effective window schedule: the explicit schedule, else the single config
// window.
std::vector<Index> effective_schedule(const ExperimentConfig& cfg) {
  if (!cfg.schedule.empty()) return cfg.schedule;
  return {cfg.window};
}

std::optional<double> resolved_cap(const ExperimentConfig& cfg) {
  if (cfg.cap) return cfg.cap;
  if (cfg.experiment == ExperimentKind::dyadic_ratio)
    return calibration::dyadic_ratio_cap(cfg.d);
  if (cfg.experiment == ExperimentKind::maximal_estimate)
    return calibration::growth_threshold(cfg.d);
  return std::nullopt;
}

double marginal_second_moment(MarginalLaw law) {
  if (law == MarginalLaw::gaussian) return 1.0;
  const DiscreteLaw discrete = marginal_discrete_law(law);
  double m2 = 0.0;
  for (const auto& [v, prob] : discrete.atoms) m2 += prob * v * v;
  return m2;
}

}  // namespace

// ---------------------------------------------------------------------------
// Names.

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::maximal_estimate: return "maximal-estimate";
    case ExperimentKind::verify_decomposition: return "verify-decomposition";
    case ExperimentKind::check_deviation: return "check-deviation";
    case ExperimentKind::check_orlicz_lemmas: return "check-orlicz-lemmas";
    case ExperimentKind::series: return "series";
    case ExperimentKind::dyadic_ratio: return "dyadic-ratio";
  }
  throw std::logic_error("experiment_name: unhandled kind");
}

ExperimentKind experiment_from_name(const std::string& name) {
  for (ExperimentKind kind :
       {ExperimentKind::maximal_estimate, ExperimentKind::verify_decomposition,
        ExperimentKind::check_deviation, ExperimentKind::check_orlicz_lemmas,
        ExperimentKind::series, ExperimentKind::dyadic_ratio})
    if (experiment_name(kind) == name) return kind;
  config_error("unknown experiment \"" + name + "\"");
}

// ---------------------------------------------------------------------------
// Model building.

FieldModel ModelSpec::build(std::size_t d) const {
  InnovationModel innov;
  if (innovations == "iid") {
    innov = InnovationModel::make_iid(d, marginal_from_name(marginal));
  } else if (innovations == "product") {
    std::vector<MarginalLaw> laws;
    if (axis_marginals.empty()) {
      laws.assign(d, marginal_from_name(marginal));
    } else {
      if (axis_marginals.size() != d)
        config_error("model.axis_marginals must list " + std::to_string(d) +
                     " entries");
      for (const std::string& name : axis_marginals)
        laws.push_back(marginal_from_name(name));
    }
    innov = InnovationModel::make_product(std::move(laws));
  } else {
    config_error("model.innovations must be \"iid\" or \"product\"");
  }
  if (field == "atom") {
    if (!coefficients.empty())
      config_error("model.coefficients only applies to causal-linear fields");
    return FieldModel::atom_field(std::move(innov));
  }
  if (field == "causal-linear") {
    if (coefficients.empty())
      config_error("model.coefficients required for causal-linear fields");
    std::map<Index, double> taps;
    for (const auto& [offset, value] : coefficients) {
      if (offset.size() != d)
        config_error("model.coefficients offset " + index_to_string(offset) +
                     " does not have dimension " + std::to_string(d));
      if (!taps.emplace(offset, value).second)
        config_error("model.coefficients repeats offset " +
                     index_to_string(offset));
    }
    return FieldModel::causal_linear(std::move(innov), std::move(taps));
  }
  config_error("model.field must be \"atom\" or \"causal-linear\"");
}

// ---------------------------------------------------------------------------
// Config validation and parsing.

void ExperimentConfig::validate() const {
  if (schema_version != 1)
    config_error("unsupported schema_version " +
                 std::to_string(schema_version));
  if (d < 1 || d > 6) config_error("field d must be between 1 and 6");
  if (replications < 1) config_error("field replications must be >= 1");
  if (format != "csv" && format != "json")
    config_error("field format must be \"csv\" or \"json\"");
  if (cap && !(*cap > 0.0)) config_error("field cap must be positive");

  const auto check_exponents = [&](const Index& w, const std::string& name) {
    if (w.size() != d)
      config_error("field " + name + " must list " + std::to_string(d) +
                   " per-axis exponents");
    long long total = 0;
    for (long long e : w) {
      if (e < 0) config_error("field " + name + " has a negative exponent");
      total += e;
    }
    if (total > 24)
      config_error("field " + name + " exceeds the 2^24-site window cap");
  };

  const bool uses_schedule = experiment == ExperimentKind::maximal_estimate ||
                             experiment == ExperimentKind::dyadic_ratio;
  const bool uses_window = uses_schedule ||
                           experiment == ExperimentKind::verify_decomposition ||
                           experiment == ExperimentKind::series;
  if (uses_window) {
    if (window.empty() && (!uses_schedule || schedule.empty()))
      config_error("missing field window");
    if (!window.empty()) check_exponents(window, "window");
  }
  for (std::size_t s = 0; s < schedule.size(); ++s)
    check_exponents(schedule[s], "schedule[" + std::to_string(s) + "]");

  if (experiment == ExperimentKind::maximal_estimate) {
    if (!(p > 1.0 && p <= 2.0))
      config_error("field p must lie in (1, 2] for maximal-estimate");
  }
  if (!(r >= 0.0)) config_error("field r must be >= 0");

  if (experiment == ExperimentKind::check_deviation) {
    if (deviation.n < 1) config_error("field deviation.n must be >= 1");
    if (deviation.x_grid.empty() || deviation.y_grid.empty())
      config_error("field deviation grids must be nonempty");
    for (double x : deviation.x_grid)
      if (!(x > 0.0)) config_error("field deviation.x_grid must be positive");
    for (double y : deviation.y_grid)
      if (!(y > 0.0)) config_error("field deviation.y_grid must be positive");
    if (deviation.x_grid.size() * deviation.y_grid.size() > 64)
      config_error("field deviation grid exceeds 64 points");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("top level must be an object");
  check_known_fields(j, "",
                     {"schema_version", "experiment", "d", "window", "model",
                      "p", "r", "replications", "seed", "threads", "out",
                      "format", "schedule", "deviation", "cap"});

  ExperimentConfig cfg;
  cfg.schema_version =
      as_int(require_field(j, "", "schema_version"), "schema_version");
  cfg.experiment = experiment_from_name(
      as_string(require_field(j, "", "experiment"), "experiment"));
  cfg.d = static_cast<std::size_t>(as_uint(require_field(j, "", "d"), "d"));
  if (j.contains("window")) cfg.window = as_index(j["window"], "window");
  if (j.contains("model")) cfg.model = parse_model(j["model"]);
  if (j.contains("p")) cfg.p = as_number(j["p"], "p");
  if (j.contains("r")) cfg.r = as_number(j["r"], "r");
  cfg.replications = static_cast<std::size_t>(
      as_uint(require_field(j, "", "replications"), "replications"));
  cfg.seed = as_uint(require_field(j, "", "seed"), "seed");
  if (j.contains("threads"))
    cfg.threads = static_cast<std::size_t>(as_uint(j["threads"], "threads"));
  if (j.contains("out")) cfg.out = as_string(j["out"], "out");
  if (j.contains("format")) cfg.format = as_string(j["format"], "format");
  if (j.contains("schedule")) {
    const ojson& arr = j["schedule"];
    if (!arr.is_array()) config_error("field schedule must be an array");
    for (std::size_t s = 0; s < arr.size(); ++s)
      cfg.schedule.push_back(
          as_index(arr[s], "schedule[" + std::to_string(s) + "]"));
  }
  if (j.contains("deviation")) cfg.deviation = parse_deviation(j["deviation"]);
  if (j.contains("cap")) cfg.cap = as_number(j["cap"], "cap");

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

// ---------------------------------------------------------------------------
// Reports.

std::string Report::to_csv() const {
  const std::string experiment = experiment_name(config.experiment);
  const std::string default_window =
      config.window.empty() ? std::string() : window_sizes_string(config.window);
  std::string out =
      "experiment,d,window,p,r,replication,statistic,value,ci_lo,ci_hi,"
      "verdict,seed\n";
  for (const ReportRow& row : rows) {
    out += experiment;
    out += ',';
    out += std::to_string(config.d);
    out += ',';
    out += row.window.empty() ? default_window : row.window;
    out += ',';
    out += format_double(config.p);
    out += ',';
    out += format_double(config.r);
    out += ',';
    out += std::to_string(row.replication);
    out += ',';
    out += row.statistic;
    out += ',';
    out += format_double(row.value);
    out += ',';
    if (!std::isnan(row.ci_lo)) out += format_double(row.ci_lo);
    out += ',';
    if (!std::isnan(row.ci_hi)) out += format_double(row.ci_hi);
    out += ',';
    out += row.verdict;
    out += ',';
    out += std::to_string(config.seed);
    out += '\n';
  }
  return out;
}

std::string Report::to_json() const {
  ojson j;
  j["library_version"] = version;
  j["config"] = config_to_json(config);
  j["pass"] = pass;
  j["wall_clock_ms"] = wall_clock_ms;
  ojson arr = ojson::array();
  for (const ReportRow& row : rows) {
    ojson r;
    r["replication"] = row.replication;
    r["statistic"] = row.statistic;
    r["window"] = row.window;
    r["value"] = row.value;
    r["ci_lo"] = std::isnan(row.ci_lo) ? ojson() : ojson(row.ci_lo);
    r["ci_hi"] = std::isnan(row.ci_hi) ? ojson() : ojson(row.ci_hi);
    r["verdict"] = row.verdict;
    arr.push_back(std::move(r));
  }
  j["rows"] = std::move(arr);
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& json_text) {
  ojson j;
  try {
    j = ojson::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("invalid report JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("config") || !j.contains("rows"))
    config_error("report JSON must carry config and rows");
  Report report;
  report.config = parse_config(j["config"].dump());
  if (j.contains("library_version"))
    report.version = j["library_version"].get<std::string>();
  if (j.contains("pass")) report.pass = j["pass"].get<bool>();
  if (j.contains("wall_clock_ms"))
    report.wall_clock_ms = j["wall_clock_ms"].get<double>();
  for (const ojson& r : j["rows"]) {
    ReportRow row;
    row.replication = r.value("replication", -1);
    row.statistic = r.value("statistic", std::string());
    row.window = r.value("window", std::string());
    row.value = r.value("value", 0.0);
    row.ci_lo = r.contains("ci_lo") && !r["ci_lo"].is_null()
                    ? r["ci_lo"].get<double>()
                    : std::numeric_limits<double>::quiet_NaN();
    row.ci_hi = r.contains("ci_hi") && !r["ci_hi"].is_null()
                    ? r["ci_hi"].get<double>()
                    : std::numeric_limits<double>::quiet_NaN();
    row.verdict = r.value("verdict", std::string());
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_report(const Report& report, const std::string& path,
                  const std::string& format) {
  if (format != "csv" && format != "json")
    config_error("field format must be \"csv\" or \"json\"");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to " + path);
  out << (format == "csv" ? report.to_csv() : report.to_json());
  if (!out) throw std::runtime_error("write failed for " + path);
}

// ---------------------------------------------------------------------------
// Elementary statistics.

double wilson_upper(std::size_t hits, std::size_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_upper: no trials");
  if (hits > trials)
    throw std::invalid_argument("wilson_upper: hits exceed trials");
  const double n = static_cast<double>(trials);
  const double p_hat = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p_hat + z2 / (2.0 * n)) / denom;
  const double half =
      (z / denom) *
      std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n));
  return std::min(1.0, center + half);
}

double growth_ratio(double prev, double next) {
  if (prev > 0.0) return next / prev;
  if (next == 0.0) return 1.0;
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Weak-type transfer.

std::vector<WeakTypePoint> check_weak_type_transfer(
    const std::vector<WeakTypeAtom>& pair_law,
    const std::vector<double>& t_grid) {
  if (pair_law.empty())
    throw std::invalid_argument("check_weak_type_transfer: empty law");
  double total = 0.0;
  for (const WeakTypeAtom& atom : pair_law) {
    if (!(atom.prob > 0.0))
      throw std::invalid_argument(
          "check_weak_type_transfer: probabilities must be > 0");
    if (atom.x < 0.0 || atom.y < 0.0)
      throw std::invalid_argument(
          "check_weak_type_transfer: the pair must be nonnegative");
    total += atom.prob;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument(
        "check_weak_type_transfer: probabilities sum to " +
        std::to_string(total));

  // Domination hypothesis, exactly, at every positive support point a of X:
  // the running supremum of x P{X > x} over x < a equals a P{X >= a}.
  std::set<double> support;
  for (const WeakTypeAtom& atom : pair_law)
    if (atom.x > 0.0) support.insert(atom.x);
  for (double a : support) {
    double tail = 0.0;
    double dominated = 0.0;
    for (const WeakTypeAtom& atom : pair_law)
      if (atom.x >= a) {
        tail += atom.prob;
        dominated += atom.prob * atom.y;
      }
    const double lhs = a * tail;
    if (lhs > dominated + 1e-12 * (1.0 + std::abs(dominated)))
      throw std::invalid_argument(
          "check_weak_type_transfer: domination hypothesis fails at x = " +
          format_short(a) + " (" + format_short(lhs) + " > " +
          format_short(dominated) + ")");
  }

  std::vector<WeakTypePoint> points;
  for (double t : t_grid) {
    if (!(t > 0.0))
      throw std::invalid_argument(
          "check_weak_type_transfer: grid t must be positive");
    WeakTypePoint point;
    point.t = t;
    for (const WeakTypeAtom& atom : pair_law) {
      if (atom.x > 2.0 * t) point.lhs += atom.prob;
      point.rhs += atom.prob * std::max(0.0, atom.y - t) / t;
    }
    point.pass = point.lhs <= point.rhs + 1e-12 * (1.0 + point.rhs);
    points.push_back(point);
  }
  return points;
}

// ---------------------------------------------------------------------------
// Deviation inequality.

std::vector<DeviationPoint> check_deviation_inequality(
    std::size_t n, MarginalLaw law, const std::vector<double>& x_grid,
    const std::vector<double>& y_grid, std::size_t replications,
    std::uint64_t seed, std::size_t threads) {
  if (n < 1)
    throw std::invalid_argument("check_deviation_inequality: n must be >= 1");
  if (x_grid.empty() || y_grid.empty())
    throw std::invalid_argument(
        "check_deviation_inequality: empty grid");
  if (replications < 1)
    throw std::invalid_argument(
        "check_deviation_inequality: replications must be >= 1");
  const std::size_t point_count = x_grid.size() * y_grid.size();
  if (point_count > 64)
    throw std::invalid_argument(
        "check_deviation_inequality: grid exceeds 64 points");

  const double conditional_second = marginal_second_moment(law);
  std::vector<std::uint64_t> event_masks(replications, 0);
  for_each_replication(
      replications, resolve_threads(threads), [&](std::size_t rep) {
        const std::uint64_t rep_seed = child_seed(seed, rep);
        double sum = 0.0;
        double bracket = 0.0;
        Index site(1);
        for (std::size_t j = 0; j < n; ++j) {
          site[0] = static_cast<long long>(j);
          const double diff = sample_marginal(law, hash_site(rep_seed, 0, site));
          sum += diff;
          bracket += diff * diff + conditional_second;
        }
        std::uint64_t mask = 0;
        std::size_t bit = 0;
        for (double x : x_grid)
          for (double y : y_grid) {
            if (std::abs(sum) > x && bracket <= y)
              mask |= std::uint64_t{1} << bit;
            ++bit;
          }
        event_masks[rep] = mask;
      });

  std::vector<std::size_t> hits(point_count, 0);
  for (std::uint64_t mask : event_masks)
    for (std::size_t bit = 0; bit < point_count; ++bit)
      if (mask & (std::uint64_t{1} << bit)) ++hits[bit];

  std::vector<DeviationPoint> points;
  std::size_t bit = 0;
  for (double x : x_grid)
    for (double y : y_grid) {
      DeviationPoint point;
      point.x = x;
      point.y = y;
      point.hits = hits[bit++];
      point.p_hat =
          static_cast<double>(point.hits) / static_cast<double>(replications);
      point.upper = wilson_upper(point.hits, replications);
      point.bound = 2.0 * std::exp(-x * x / (2.0 * y));
      point.pass = point.upper <= point.bound;
      points.push_back(point);
    }
  return points;
}

// ---------------------------------------------------------------------------
// Experiment runners.

namespace {

void append_verdict(Report& report, ReportRow row) {
  if (row.verdict == "fail") report.pass = false;
  report.rows.push_back(std::move(row));
}

ReportRow info_row(std::string statistic, double value,
                   std::string window = {}) {
  ReportRow row;
  row.statistic = std::move(statistic);
  row.value = value;
  row.window = std::move(window);
  return row;
}

Report run_check_deviation(const ExperimentConfig& cfg) {
  Report report;
  report.config = cfg;
  const MarginalLaw law = marginal_from_name(cfg.model.marginal);
  const std::vector<DeviationPoint> points = check_deviation_inequality(
      cfg.deviation.n, law, cfg.deviation.x_grid, cfg.deviation.y_grid,
      cfg.replications, cfg.seed, cfg.threads);
  const std::string window = std::to_string(cfg.deviation.n);
  for (const DeviationPoint& point : points) {
    const std::string tag =
        "[x=" + format_short(point.x) + ";y=" + format_short(point.y) + "]";
    ReportRow probability;
    probability.statistic = "deviation_probability" + tag;
    probability.window = window;
    probability.value = point.p_hat;
    probability.ci_lo = 0.0;
    probability.ci_hi = point.upper;
    probability.verdict = point.pass ? "pass" : "fail";
    append_verdict(report, std::move(probability));
    report.rows.push_back(
        info_row("deviation_hits" + tag, static_cast<double>(point.hits),
                 window));
    report.rows.push_back(info_row("deviation_bound" + tag, point.bound,
                                   window));
  }
  return report;
}

Report run_verify_decomposition(const ExperimentConfig& cfg) {
  Report report;
  report.config = cfg;
  const FieldModel model = cfg.model.build(cfg.d);
  const DecompositionVariant accepted = default_variant(cfg.d);
  const std::vector<DecompositionVariant> variants =
      variants_for_dimension(cfg.d);

  std::vector<DecompositionPlan> plans;
  plans.reserve(variants.size());
  Index lo, hi;
  for (DecompositionVariant variant : variants) {
    plans.push_back(build_decomposition(model, cfg.window, variant));
    const DecompositionPlan& plan = plans.back();
    if (lo.empty()) {
      lo = plan.box_lo;
      hi = plan.box_hi;
    } else {
      lo = index_min(lo, plan.box_lo);
      for (std::size_t q = 0; q < hi.size(); ++q)
        hi[q] = std::max(hi[q], plan.box_hi[q]);
    }
  }

  const std::size_t variant_count = variants.size();
  std::vector<PointwiseCheck> checks(cfg.replications * variant_count);
  for_each_replication(
      cfg.replications, resolve_threads(cfg.threads), [&](std::size_t rep) {
        const Realization realization = sample_realization(
            model.innovations, child_seed(cfg.seed, rep), lo, hi);
        for (std::size_t v = 0; v < variant_count; ++v)
          checks[rep * variant_count + v] =
              evaluate_pointwise(plans[v], realization);
      });

  for (std::size_t v = 0; v < variant_count; ++v) {
    const std::string name = variant_name(variants[v]);
    const bool is_accepted = variants[v] == accepted;
    std::size_t failures = 0;
    double max_violation = -std::numeric_limits<double>::infinity();
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
      const PointwiseCheck& check = checks[rep * variant_count + v];
      if (!check.pass) ++failures;
      max_violation = std::max(max_violation, check.lhs - check.rhs);
      min_slack = std::min(min_slack, check.rhs - check.lhs);
      ReportRow row;
      row.replication = static_cast<long long>(rep);
      row.statistic = "pointwise_slack[" + name + "]";
      row.value = check.rhs - check.lhs;
      if (is_accepted) row.verdict = check.pass ? "pass" : "fail";
      append_verdict(report, std::move(row));
    }
    ReportRow aggregate;
    aggregate.statistic = "pointwise_failures[" + name + "]";
    aggregate.value = static_cast<double>(failures);
    if (is_accepted) aggregate.verdict = failures == 0 ? "pass" : "fail";
    append_verdict(report, std::move(aggregate));
    report.rows.push_back(
        info_row("max_violation[" + name + "]", max_violation));
    report.rows.push_back(info_row("min_slack[" + name + "]", min_slack));
  }
  return report;
}

Report run_dyadic_ratio(const ExperimentConfig& cfg) {
  Report report;
  report.config = cfg;
  const FieldModel model = cfg.model.build(cfg.d);
  const std::vector<Index> schedule = effective_schedule(cfg);

  Index max_exponents = schedule.front();
  for (const Index& w : schedule)
    for (std::size_t q = 0; q < w.size(); ++q)
      max_exponents[q] = std::max(max_exponents[q], w[q]);
  const Index render_window = window_sizes(max_exponents);

  const std::size_t window_count = schedule.size();
  std::vector<double> ratios(cfg.replications * window_count);
  std::vector<std::uint8_t> order_ok(cfg.replications * window_count);
  for_each_replication(
      cfg.replications, resolve_threads(cfg.threads), [&](std::size_t rep) {
        const FieldSample sample =
            render_sample(model, render_window, child_seed(cfg.seed, rep));
        for (std::size_t w = 0; w < window_count; ++w) {
          const Index sizes = window_sizes(schedule[w]);
          const double full = sub_window_maximal(sample.table, sizes, cfg.d);
          const double dyadic = sub_window_maximal(sample.table, sizes, 0);
          ratios[rep * window_count + w] = growth_ratio(dyadic, full);
          order_ok[rep * window_count + w] = dyadic <= full ? 1 : 0;
        }
      });

  const std::optional<double> cap = resolved_cap(cfg);
  std::size_t order_failures = 0;
  double overall_max = 0.0;
  for (std::size_t w = 0; w < window_count; ++w) {
    const std::string window = window_sizes_string(schedule[w]);
    double window_max = 0.0;
    double window_sum = 0.0;
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
      const double ratio = ratios[rep * window_count + w];
      if (!order_ok[rep * window_count + w]) ++order_failures;
      window_max = std::max(window_max, ratio);
      window_sum += ratio;
      ReportRow row;
      row.replication = static_cast<long long>(rep);
      row.statistic = "dyadic_ratio";
      row.window = window;
      row.value = ratio;
      report.rows.push_back(std::move(row));
    }
    overall_max = std::max(overall_max, window_max);
    report.rows.push_back(info_row("max_ratio", window_max, window));
    report.rows.push_back(info_row(
        "mean_ratio", window_sum / static_cast<double>(cfg.replications),
        window));
  }

  ReportRow order_row;
  order_row.statistic = "dyadic_le_full_failures";
  order_row.value = static_cast<double>(order_failures);
  order_row.verdict = order_failures == 0 ? "pass" : "fail";
  append_verdict(report, std::move(order_row));

  ReportRow max_row;
  max_row.statistic = "max_ratio";
  max_row.value = overall_max;
  if (cap) {
    max_row.ci_hi = *cap;
    max_row.verdict = overall_max <= *cap ? "pass" : "fail";
  }
  append_verdict(report, std::move(max_row));
  return report;
}

Report run_maximal_estimate(const ExperimentConfig& cfg) {
  Report report;
  report.config = cfg;
  const FieldModel model = cfg.model.build(cfg.d);
  const std::vector<Index> schedule = effective_schedule(cfg);

  Index max_exponents = schedule.front();
  for (const Index& w : schedule)
    for (std::size_t q = 0; q < w.size(); ++q)
      max_exponents[q] = std::max(max_exponents[q], w[q]);
  const Index render_window = window_sizes(max_exponents);

  const std::size_t window_count = schedule.size();
  std::vector<std::vector<double>> values(
      window_count, std::vector<double>(cfg.replications));
  for_each_replication(
      cfg.replications, resolve_threads(cfg.threads), [&](std::size_t rep) {
        const FieldSample sample =
            render_sample(model, render_window, child_seed(cfg.seed, rep));
        for (std::size_t w = 0; w < window_count; ++w)
          values[w][rep] = sub_window_maximal(
              sample.table, window_sizes(schedule[w]), cfg.d);
      });

  const double reference_norm =
      innovation_norm(model.innovations, 1 << 16, cfg.seed);
  report.rows.push_back(info_row("innovation_norm", reference_norm));

  std::vector<double> norms(window_count);
  for (std::size_t w = 0; w < window_count; ++w) {
    const std::string window = window_sizes_string(schedule[w]);
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
      ReportRow row;
      row.replication = static_cast<long long>(rep);
      row.statistic = "maximal";
      row.window = window;
      row.value = values[w][rep];
      report.rows.push_back(std::move(row));
    }
    const EmpiricalNorm norm = empirical_lp_norm(values[w], cfg.p);
    norms[w] = norm.value;
    ReportRow norm_row;
    norm_row.statistic = "p_norm";
    norm_row.window = window;
    norm_row.value = norm.value;
    norm_row.ci_lo = norm.ci_lo;
    norm_row.ci_hi = norm.ci_hi;
    report.rows.push_back(std::move(norm_row));
    if (cfg.r > 0.0)
      report.rows.push_back(info_row(
          "orlicz_norm", orlicz_norm_empirical(values[w], 2.0, cfg.r),
          window));
    if (reference_norm > 0.0)
      report.rows.push_back(
          info_row("norm_to_innovation_ratio", norm.value / reference_norm,
                   window));
  }

  // Growth rows between consecutive schedule entries that double every axis;
  // the last such pair carries the calibrated verdict.
  const std::optional<double> cap = resolved_cap(cfg);
  std::vector<std::size_t> doubling_pairs;
  for (std::size_t w = 0; w + 1 < window_count; ++w) {
    bool doubles = true;
    for (std::size_t q = 0; q < cfg.d; ++q)
      if (schedule[w + 1][q] != schedule[w][q] + 1) doubles = false;
    if (doubles) doubling_pairs.push_back(w);
  }
  for (std::size_t pair_index = 0; pair_index < doubling_pairs.size();
       ++pair_index) {
    const std::size_t w = doubling_pairs[pair_index];
    const bool last = pair_index + 1 == doubling_pairs.size();
    const double ratio = growth_ratio(norms[w], norms[w + 1]);

    // Percentile bootstrap over jointly resampled replications.
    const int resamples = 200;
    std::vector<double> boot(resamples);
    for (int b = 0; b < resamples; ++b) {
      double prev_moment = 0.0;
      double next_moment = 0.0;
      Index draw(1);
      for (std::size_t i = 0; i < cfg.replications; ++i) {
        draw[0] = static_cast<long long>(i);
        const std::size_t pick = static_cast<std::size_t>(
            hash_site(cfg.seed ^ 0xB00757A9ULL, b + 1, draw) %
            cfg.replications);
        prev_moment += std::pow(std::abs(values[w][pick]), cfg.p);
        next_moment += std::pow(std::abs(values[w + 1][pick]), cfg.p);
      }
      const double n = static_cast<double>(cfg.replications);
      boot[b] = growth_ratio(std::pow(prev_moment / n, 1.0 / cfg.p),
                             std::pow(next_moment / n, 1.0 / cfg.p));
    }
    std::sort(boot.begin(), boot.end());
    const auto at = [&](double q) {
      return boot[static_cast<std::size_t>(q * (resamples - 1))];
    };

    ReportRow row;
    row.statistic = "growth";
    row.window = window_sizes_string(schedule[w]) + "->" +
                 window_sizes_string(schedule[w + 1]);
    row.value = ratio;
    row.ci_lo = at(0.025);
    row.ci_hi = at(0.975);
    if (last && cap) row.verdict = ratio <= *cap ? "pass" : "fail";
    append_verdict(report, std::move(row));
  }
  return report;
}

Report run_series(const ExperimentConfig& cfg) {
  Report report;
  report.config = cfg;
  const FieldModel model = cfg.model.build(cfg.d);
  const Index n_max = window_sizes(cfg.window);
  const MwSeriesResult mw =
      mw_series(model, n_max, 1 << 20, true, cfg.seed, 4096);

  ReportRow full;
  full.statistic = "mw_series_full";
  full.value = mw.series_full;
  full.ci_lo = mw.series_full - mw.ci_halfwidth;
  full.ci_hi = mw.series_full + mw.ci_halfwidth;
  report.rows.push_back(std::move(full));
  report.rows.push_back(info_row("mw_series_adapted", mw.series_adapted));
  for (std::size_t q = 0; q < mw.stabilization_index.size(); ++q)
    report.rows.push_back(info_row(
        "stabilization_axis" + std::to_string(q),
        static_cast<double>(mw.stabilization_index[q])));
  ReportRow stabilized;
  stabilized.statistic = "stabilized";
  stabilized.value = mw.stabilized ? 1.0 : 0.0;
  stabilized.verdict = mw.stabilized ? "pass" : "fail";
  append_verdict(report, std::move(stabilized));
  report.rows.push_back(
      info_row("exact_cells", static_cast<double>(mw.exact_cells)));
  report.rows.push_back(
      info_row("sampled_cells", static_cast<double>(mw.sampled_cells)));
  report.rows.push_back(
      info_row("hannan_series", hannan_series(model, 1 << 16, cfg.seed)));
  return report;
}

Report run_check_orlicz_lemmas(const ExperimentConfig& cfg) {
  Report report;
  report.config = cfg;

  for (const auto& [name, law] : stress_law_family()) {
    for (double p : {1.25, 1.5, 2.0}) {
      const WeakLpNorms weak = weak_lp_norms(law, p);
      const double lp = lp_norm(law, p);
      const double excess = std::max(weak.tail_sup - weak.dual_norm,
                                     weak.dual_norm - lp);
      ReportRow row;
      row.statistic = "weak_lp_chain[" + name + ";p=" + format_short(p) + "]";
      row.value = excess;
      row.verdict = excess <= 1e-9 * (1.0 + lp) ? "pass" : "fail";
      append_verdict(report, std::move(row));
    }
    for (double r : {0.0, 2.0}) {
      const PowerComparison power = check_orlicz_power_lemma(law, r);
      const std::string tag = "[" + name + ";r=" + format_short(r) + "]";
      ReportRow square;
      square.statistic = "orlicz_square_ratio" + tag;
      square.value = power.square_ratio;
      square.verdict = std::isfinite(power.square_ratio) ? "pass" : "fail";
      append_verdict(report, std::move(square));
      ReportRow sqrt_row;
      sqrt_row.statistic = "orlicz_sqrt_ratio" + tag;
      sqrt_row.value = power.sqrt_ratio;
      sqrt_row.verdict = std::isfinite(power.sqrt_ratio) ? "pass" : "fail";
      append_verdict(report, std::move(sqrt_row));
    }
  }

  for (const auto& [name, law] : series_law_family()) {
    for (const auto& [p, q] :
         std::vector<std::pair<double, double>>{{2, 0}, {2, 2}, {1, 1}}) {
      const SeriesLemmaResult lemma = check_series_lemma(law, p, q, 40);
      const std::string tag = "[" + name + ";p=" + format_short(p) +
                              ";q=" + format_short(q) + "]";
      ReportRow main_row;
      main_row.statistic = "series_lemma" + tag;
      main_row.value = lemma.lhs_nonstrict;
      main_row.ci_hi = lemma.rhs;
      main_row.verdict = lemma.pass ? "pass" : "fail";
      append_verdict(report, std::move(main_row));
      ReportRow companion;
      companion.statistic = "series_companion" + tag;
      companion.value = lemma.companion_lhs;
      companion.ci_hi = lemma.companion_rhs;
      companion.verdict = lemma.companion_pass ? "pass" : "fail";
      append_verdict(report, std::move(companion));
    }
  }

  // Tail transfer with the identity dominator on the absolute law.
  const std::vector<double> t_grid = {0.25, 0.5, 1.0, 2.0};
  std::size_t pairs = 0;
  for (const auto& [name, law] : stress_law_family()) {
    if (pairs == 10) break;
    ++pairs;
    std::vector<WeakTypeAtom> pair_law;
    for (const auto& [v, prob] : law.atoms)
      pair_law.push_back({std::abs(v), std::abs(v), prob});
    for (const WeakTypePoint& point :
         check_weak_type_transfer(pair_law, t_grid)) {
      ReportRow row;
      row.statistic =
          "weak_type[" + name + ";t=" + format_short(point.t) + "]";
      row.value = point.lhs;
      row.ci_hi = point.rhs;
      row.verdict = point.pass ? "pass" : "fail";
      append_verdict(report, std::move(row));
    }
  }
  return report;
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  Report report;
  switch (config.experiment) {
    case ExperimentKind::maximal_estimate:
      report = run_maximal_estimate(config);
      break;
    case ExperimentKind::verify_decomposition:
      report = run_verify_decomposition(config);
      break;
    case ExperimentKind::check_deviation:
      report = run_check_deviation(config);
      break;
    case ExperimentKind::check_orlicz_lemmas:
      report = run_check_orlicz_lemmas(config);
      break;
    case ExperimentKind::series:
      report = run_series(config);
      break;
    case ExperimentKind::dyadic_ratio:
      report = run_dyadic_ratio(config);
      break;
  }
  report.pass = true;
  for (const ReportRow& row : report.rows)
    if (row.verdict == "fail") report.pass = false;
  report.wall_clock_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace lilab
