#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfde/export.hpp"
#include "sfde/picard.hpp"
#include "sfde/solver.hpp"
#include "sfde/system.hpp"

namespace sfde::cli {

enum class Command { simulate, ensemble, picard, converge, weights, path };
enum class OutputFormat { csv, json };

std::string_view to_string(Command command) noexcept;

/// Raw key/value settings in the order they were given.
using Settings = std::map<std::string, std::string>;

/// Parses a flat "key = value" file. Blank lines and lines starting with '#' are ignored.
/// Throws ConfigError on malformed lines (with line numbers).
Settings parse_settings(const std::string& text);
Settings read_settings_file(const std::string& path);

/// Reals accept decimal/scientific notation and simple ratios such as "8/3" or "1/200".
double parse_real(const std::string& key, const std::string& text);

/// Every setting after defaults are applied and constraints checked.
struct RunConfig {
  Command command = Command::simulate;
  std::string system = "newton_leipnik";
  double alpha = 0.0;
  double h = 0.0;
  double T = 0.0;
  double mu = 0.1;
  double beta = 0.4;
  double rho = 0.175;
  double a = 10.0;
  double b = 8.0 / 3.0;
  double c = 28.0;
  double lambda = -1.0;
  std::optional<State> y0;
  std::uint64_t seed = 0;
  std::size_t paths = 200;
  std::size_t path_index = 0;
  NoiseHistory noise_history = NoiseHistory::per_step_increments;
  WeightMode weight_mode = WeightMode::standard;
  std::size_t threads = 0;
  double blowup = kDefaultBlowupBound;
  std::optional<double> radius;
  std::size_t iterations = 6;
  DistanceNorm norm = DistanceNorm::terminal;
  std::size_t levels = 4;
  std::optional<double> min_order;
  std::size_t n = 10;
  std::string output = "-";
  std::optional<std::string> summary;
  OutputFormat format = OutputFormat::csv;
  std::vector<std::string> warnings;

  bool stochastic() const noexcept { return mu != 0.0; }
  TimeGrid grid() const { return TimeGrid::make(T, h); }
  SystemModel model() const;
  SolverConfig solver_config() const;

  /// Resolved settings echoed into every output. Parallelism is excluded: it never changes results.
  Metadata metadata() const;
};

/// Keys recognised in settings files and --set overrides.
const std::vector<std::string>& known_keys();

/// Applies defaults and validates for `command`. Throws ConfigError listing every violated
/// constraint, one per line.
RunConfig resolve(Command command, const Settings& settings);

}  // namespace sfde::cli
