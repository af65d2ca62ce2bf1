#include "sfde_cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "sfde/analysis.hpp"
#include "sfde/error.hpp"
#include "sfde/export.hpp"
#include "sfde/picard.hpp"
#include "sfde/special_functions.hpp"
#include "sfde/stochastic.hpp"
#include "sfde/weights.hpp"

namespace sfde::cli {
namespace {

using Json = nlohmann::ordered_json;

Json summary_header(const RunConfig& cfg) {
  Json j;
  for (const auto& [key, value] : cfg.metadata()) j[key] = value;
  return j;
}

void write_summary(const RunConfig& cfg, const Json& summary, std::ostream& out) {
  if (cfg.format == OutputFormat::json) out << summary.dump(2) << '\n';
  if (cfg.summary) {
    std::ofstream file(*cfg.summary, std::ios::binary);
    if (!file) throw ConfigError("summary: cannot open '" + *cfg.summary + "' for writing");
    file << summary.dump(2) << '\n';
  }
}

std::string component_key(const char* prefix, std::size_t c) { return prefix + std::to_string(c + 1); }

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const SystemModel model = cfg.model();
  const SolverConfig scfg = cfg.solver_config();
  std::optional<WienerPath> path;
  if (scfg.stochastic) path = generate_path(cfg.seed, cfg.path_index, scfg.grid, model.noise_dimension());
  const Trajectory traj = path ? solve(model, scfg, *path) : solve(model, scfg);

  if (cfg.format == OutputFormat::csv) write_trajectory_csv(out, traj, cfg.metadata());

  Json summary = summary_header(cfg);
  const auto terminal = traj.terminal();
  for (std::size_t c = 0; c < terminal.size(); ++c) summary[component_key("terminal_y", c)] = terminal[c];
  const AttractorCheck check = bounded_attractor_check(traj, cfg.radius.value_or(cfg.blowup));
  summary["max_norm"] = check.max_norm;
  if (cfg.radius) summary["bounded_pass"] = check.passed;
  write_summary(cfg, summary, out);
  return kExitOk;
}

int cmd_ensemble(const RunConfig& cfg, std::ostream& out) {
  const SystemModel model = cfg.model();
  const SolverConfig scfg = cfg.solver_config();
  EnsembleOptions options;
  options.threads = cfg.threads;
  const EnsembleResult result = ensemble_run(model, scfg, cfg.seed, cfg.paths, options);
  const EnsembleStats& stats = result.stats;

  if (cfg.format == OutputFormat::csv) write_stats_csv(out, stats, cfg.metadata());

  Json summary = summary_header(cfg);
  const std::size_t last = stats.grid.node_count() - 1;
  for (std::size_t c = 0; c < stats.dimension; ++c) {
    summary[component_key("terminal_mean_", c)] = stats.mean_at(last, c);
    summary[component_key("terminal_var_", c)] = stats.variance_at(last, c);
  }
  summary["terminal_l2sq"] = stats.l2sq[last];
  summary["terminal_l2"] = std::sqrt(stats.l2sq[last]);
  if (cfg.system == "linear" && cfg.lambda == 0.0 && cfg.stochastic()) {
    const double expected = pure_diffusion_variance(cfg.alpha, cfg.mu, cfg.T);
    const double observed = stats.variance_at(last, 0);
    const double rel = std::abs(observed - expected) / expected;
    summary["variance_law_expected"] = expected;
    summary["variance_law_observed"] = observed;
    summary["variance_law_relative_error"] = rel;
    summary["variance_law_pass"] = rel <= 0.1;
  }
  write_summary(cfg, summary, out);
  return kExitOk;
}

int cmd_picard(const RunConfig& cfg, std::ostream& out) {
  CauchyOptions options;
  options.master_seed = cfg.seed;
  options.paths = cfg.paths;
  options.iterations = cfg.iterations;
  options.norm = cfg.norm;
  options.stochastic = cfg.stochastic();
  options.threads = cfg.threads;
  options.blowup_bound = cfg.blowup;
  const CauchyReport report = cauchy_diagnostic(cfg.model(), cfg.alpha, cfg.grid(), options);

  if (cfg.format == OutputFormat::csv) write_distance_csv(out, report.distances, cfg.metadata());

  Json summary = summary_header(cfg);
  for (std::size_t k = 0; k < report.distances.size(); ++k) {
    summary["d_" + std::to_string(k + 1)] = report.distances[k];
  }
  summary["max_second_moment"] = report.max_second_moment;
  summary["strictly_decreasing"] = report.strictly_decreasing;
  summary["contracted"] = report.contracted;
  write_summary(cfg, summary, out);
  return report.contracted ? kExitOk : kExitDiagnostic;
}

int cmd_converge(const RunConfig& cfg, std::ostream& out) {
  const SystemModel model = cfg.model();
  std::vector<double> steps;
  for (std::size_t l = 0; l < cfg.levels; ++l) steps.push_back(cfg.h / std::ldexp(1.0, static_cast<int>(l)));

  ConvergenceOptions options;
  options.stochastic = cfg.stochastic();
  options.seed = cfg.seed;
  options.noise_history = cfg.noise_history;
  options.weight_mode = cfg.weight_mode;
  bool oracle = false;
  if (cfg.system == "linear" && !cfg.stochastic()) {
    // y0 E_a(lambda t^a) solves the scalar linear test problem.
    const double y0 = model.initial_state()[0];
    const double alpha = cfg.alpha;
    const double lambda = cfg.lambda;
    try {
      (void)mittag_leffler(alpha, lambda * std::pow(cfg.T, alpha));
      options.exact = [=](double t) { return State{y0 * mittag_leffler(alpha, lambda * std::pow(t, alpha))}; };
      oracle = true;
    } catch (const Error&) {
      // Outside the series range; fall back to the finest-grid reference.
    }
  }
  const ConvergenceReport report = convergence_order(model, cfg.alpha, cfg.T, steps, options);

  if (cfg.format == OutputFormat::csv) {
    write_metadata(out, cfg.metadata());
    out << "h,error\n";
    for (std::size_t i = 0; i < report.steps.size(); ++i) {
      out << format_real(report.steps[i]) << ',' << format_real(report.errors[i]) << '\n';
    }
  }

  const bool gate_failed = cfg.min_order && (report.degenerate || !(report.order >= *cfg.min_order));
  Json summary = summary_header(cfg);
  summary["reference"] = oracle ? "exact" : "finest_grid";
  for (std::size_t i = 0; i < report.steps.size(); ++i) {
    summary["h_" + std::to_string(i + 1)] = report.steps[i];
    summary["error_" + std::to_string(i + 1)] = report.errors[i];
  }
  if (report.degenerate) {
    summary["order"] = nullptr;
  } else {
    summary["order"] = report.order;
  }
  summary["degenerate"] = report.degenerate;
  if (cfg.min_order) summary["min_order_pass"] = !gate_failed;
  write_summary(cfg, summary, out);
  return gate_failed ? kExitDiagnostic : kExitOk;
}

int cmd_weights(const RunConfig& cfg, std::ostream& out) {
  const auto a = corrector_weights(cfg.n, cfg.alpha, cfg.weight_mode);
  const auto b = predictor_weights(cfg.n, cfg.alpha, cfg.h);
  if (cfg.format == OutputFormat::csv) write_weights_csv(out, a, b, cfg.metadata());
  Json summary = summary_header(cfg);
  double sum_a = 0.0;
  for (double w : a) sum_a += w;
  double sum_b = 0.0;
  for (double w : b) sum_b += w;
  summary["corrector_sum"] = sum_a;
  summary["predictor_sum"] = sum_b;
  write_summary(cfg, summary, out);
  return kExitOk;
}

int cmd_path(const RunConfig& cfg, std::ostream& out) {
  const WienerPath path = generate_path(cfg.seed, cfg.path_index, cfg.grid(), cfg.model().noise_dimension());
  write_metadata(out, cfg.metadata());
  write_path_csv(out, path);
  return kExitOk;
}

struct Subcommand {
  Command command;
  const char* description;
};

constexpr Subcommand kSubcommands[] = {
    {Command::simulate, "Solve one path and write the trajectory"},
    {Command::ensemble, "Monte Carlo ensemble statistics"},
    {Command::picard, "Picard-iteration Cauchy diagnostic"},
    {Command::converge, "Empirical convergence order over a dyadic grid chain"},
    {Command::weights, "Dump predictor/corrector weight tables"},
    {Command::path, "Dump one Wiener path"},
};

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::simulate: return cmd_simulate(cfg, out);
    case Command::ensemble: return cmd_ensemble(cfg, out);
    case Command::picard: return cmd_picard(cfg, out);
    case Command::converge: return cmd_converge(cfg, out);
    case Command::weights: return cmd_weights(cfg, out);
    case Command::path: return cmd_path(cfg, out);
  }
  return kExitFailure;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic fractional differential equation solver", "sfde"};
  app.set_version_flag("--version", std::string("sfde ") + SFDE_VERSION_STRING);
  app.require_subcommand(1);
  // "-h" would collide with the step-size option.
  app.set_help_flag("--help", "Print this help message and exit");

  std::string config_path;
  std::vector<std::string> assignments;
  std::map<std::string, std::string> flags;
  std::optional<Command> chosen;

  for (const auto& sub : kSubcommands) {
    CLI::App* cmd = app.add_subcommand(std::string(to_string(sub.command)), sub.description);
    cmd->add_option("--config", config_path, "key = value settings file");
    cmd->add_option("--set", assignments, "Override a setting: key=value (repeatable)");
    for (const auto& key : known_keys()) {
      std::string name = key == "output" ? "-o,--output" : "--" + key;
      if (key.find('_') != std::string::npos) {
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        name += ",--" + dashed;
      }
      cmd->add_option(name, flags[key], "Override '" + key + "'");
    }
    cmd->callback([&chosen, c = sub.command] { chosen = c; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "sfde " << SFDE_VERSION_STRING << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "sfde: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!chosen) return kExitConfig;

  try {
    Settings settings;
    if (!config_path.empty()) settings = read_settings_file(config_path);
    // Command-line values take precedence over the file; --set is applied last.
    for (const auto& [key, value] : flags) {
      if (!value.empty()) settings[key] = value;
    }
    for (const auto& item : assignments) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set: expected key=value, got '" + item + "'");
      settings[item.substr(0, eq)] = item.substr(eq + 1);
    }
    const RunConfig cfg = resolve(*chosen, settings);
    for (const auto& w : cfg.warnings) err << "sfde: warning: " << w << '\n';

    if (cfg.output == "-") return run_command(cfg, out);
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw ConfigError("output: cannot open '" + cfg.output + "' for writing");
    const int code = run_command(cfg, file);
    file.flush();
    if (!file) throw Error("output: write to '" + cfg.output + "' failed");
    if (code == kExitDiagnostic) err << "sfde: convergence diagnostic failed; see output\n";
    return code;
  } catch (const ConfigError& e) {
    err << "sfde: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    err << "sfde: divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const DomainError& e) {
    err << "sfde: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "sfde: error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace sfde::cli
