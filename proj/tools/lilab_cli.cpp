// Command-line front end: each experiment is a subcommand with a built-in
// default configuration; --config loads a JSON file and the remaining flags
// override it.  Exit codes: 0 all verdicts pass, 1 a verdict failed, 2
// usage or configuration error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lilab/harness.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out;
  std::string format;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool config_required) {
  auto* config =
      cmd->add_option("--config", flags.config_path, "JSON config file");
  if (config_required) config->required();
  cmd->add_option("--seed", flags.seed, "Override the master seed");
  cmd->add_option("--threads", flags.threads,
                  "Override the worker thread count");
  cmd->add_option("--out", flags.out, "Write the report to this path");
  cmd->add_option("--format", flags.format, "Report format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

lilab::ExperimentConfig default_config(lilab::ExperimentKind kind) {
  lilab::ExperimentConfig cfg;
  cfg.experiment = kind;
  cfg.seed = 1;
  switch (kind) {
    case lilab::ExperimentKind::maximal_estimate:
      cfg.d = 1;
      cfg.schedule = {{3}, {4}, {5}};
      cfg.window = {5};
      cfg.p = 1.5;
      cfg.replications = 50;
      break;
    case lilab::ExperimentKind::verify_decomposition:
      cfg.d = 1;
      cfg.window = {4};
      cfg.model.field = "causal-linear";
      cfg.model.coefficients = {{{0}, 1.0}, {{1}, 0.5}};
      cfg.replications = 50;
      break;
    case lilab::ExperimentKind::check_deviation:
      cfg.replications = 20000;
      break;
    case lilab::ExperimentKind::check_orlicz_lemmas:
      cfg.replications = 1;
      break;
    case lilab::ExperimentKind::series:
      cfg.d = 1;
      cfg.window = {4};
      cfg.model.field = "causal-linear";
      cfg.model.coefficients = {{{0}, 1.0}, {{1}, 1.0}, {{2}, -0.5}};
      cfg.replications = 1;
      break;
    case lilab::ExperimentKind::dyadic_ratio:
      cfg.d = 1;
      cfg.schedule = {{3}, {4}, {5}};
      cfg.window = {5};
      cfg.replications = 50;
      break;
  }
  return cfg;
}

int run_and_emit(lilab::ExperimentConfig cfg, const CommonFlags& flags) {
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.threads) cfg.threads = *flags.threads;
  if (!flags.out.empty()) cfg.out = flags.out;
  if (!flags.format.empty()) cfg.format = flags.format;

  const lilab::Report report = lilab::run_experiment(cfg);
  const std::string rendered =
      cfg.format == "json" ? report.to_json() : report.to_csv();
  if (!cfg.out.empty()) {
    lilab::write_report(report, cfg.out, cfg.format);
    std::cerr << "report written to " << cfg.out << "\n";
  } else {
    std::cout << rendered;
  }
  std::cerr << lilab::experiment_name(cfg.experiment)
            << (report.pass ? ": PASS" : ": FAIL") << "\n";
  return report.pass ? 0 : 1;
}

int run_subcommand(lilab::ExperimentKind kind, const CommonFlags& flags) {
  lilab::ExperimentConfig cfg = flags.config_path.empty()
                                    ? default_config(kind)
                                    : lilab::load_config_file(flags.config_path);
  if (!flags.config_path.empty() && cfg.experiment != kind)
    throw std::invalid_argument(
        "config: experiment \"" + lilab::experiment_name(cfg.experiment) +
        "\" does not match the \"" + lilab::experiment_name(kind) +
        "\" subcommand");
  return run_and_emit(std::move(cfg), flags);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Window-maxima laboratory for stationary lattice fields"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run_cmd =
      app.add_subcommand("run", "Run the experiment named in a config file");
  add_common_flags(run_cmd, run_flags, /*config_required=*/true);

  struct SubEntry {
    const char* name;
    const char* help;
    lilab::ExperimentKind kind;
    CommonFlags flags;
    CLI::App* cmd = nullptr;
  };
  SubEntry entries[] = {
      {"maximal", "Monte Carlo window-maximum norms and growth profile",
       lilab::ExperimentKind::maximal_estimate, {}, nullptr},
      {"verify-decomposition",
       "Pointwise dyadic-decomposition bound on sampled realizations",
       lilab::ExperimentKind::verify_decomposition, {}, nullptr},
      {"check-deviation",
       "Joint deviation event probabilities against the exponential bound",
       lilab::ExperimentKind::check_deviation, {}, nullptr},
      {"check-lemmas", "Exact norm-functional checks over the law families",
       lilab::ExperimentKind::check_orlicz_lemmas, {}, nullptr},
      {"series", "Conditioned-sum and single-site summability series",
       lilab::ExperimentKind::series, {}, nullptr},
      {"dyadic-ratio", "Full versus power-of-two window maxima",
       lilab::ExperimentKind::dyadic_ratio, {}, nullptr},
  };
  for (SubEntry& entry : entries) {
    entry.cmd = app.add_subcommand(entry.name, entry.help);
    add_common_flags(entry.cmd, entry.flags, /*config_required=*/false);
  }

  std::string report_in;
  std::string report_format = "csv";
  std::string report_out;
  auto* report_cmd =
      app.add_subcommand("report", "Re-render a stored JSON report");
  report_cmd->add_option("--in", report_in, "Stored JSON report")->required();
  report_cmd->add_option("--format", report_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  report_cmd->add_option("--out", report_out, "Write instead of printing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      lilab::ExperimentConfig cfg =
          lilab::load_config_file(run_flags.config_path);
      return run_and_emit(std::move(cfg), run_flags);
    }
    for (SubEntry& entry : entries)
      if (entry.cmd->parsed()) return run_subcommand(entry.kind, entry.flags);
    if (report_cmd->parsed()) {
      std::ifstream in(report_in);
      if (!in) throw std::invalid_argument("config: cannot open " + report_in);
      std::ostringstream buffer;
      buffer << in.rdbuf();
      const lilab::Report report = lilab::report_from_json(buffer.str());
      const std::string rendered =
          report_format == "json" ? report.to_json() : report.to_csv();
      if (!report_out.empty()) {
        lilab::write_report(report, report_out, report_format);
        std::cerr << "report written to " << report_out << "\n";
      } else {
        std::cout << rendered;
      }
      return report.pass ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
