#include "sfde_cli/run_config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sfde/error.hpp"
#include "sfde/systems.hpp"

namespace sfde::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_plain_real(const std::string& text, double& value) {
  if (text.empty()) return false;
  errno = 0;
  char* end = nullptr;
  value = std::strtod(text.c_str(), &end);
  return errno == 0 && end == text.c_str() + text.size() && std::isfinite(value);
}

// Collects every violation instead of stopping at the first.
class Resolver {
 public:
  explicit Resolver(const Settings& settings) : settings_(settings) {}

  bool has(const std::string& key) const { return settings_.contains(key); }

  void real(const std::string& key, double& target) {
    if (!has(key)) return;
    try {
      target = parse_real(key, settings_.at(key));
    } catch (const ConfigError& e) {
      errors.emplace_back(e.what());
    }
  }

  void optional_real(const std::string& key, std::optional<double>& target) {
    if (!has(key)) return;
    double value = 0.0;
    const auto before = errors.size();
    real(key, value);
    if (errors.size() == before) target = value;
  }

  template <typename Int>
  void integer(const std::string& key, Int& target) {
    if (!has(key)) return;
    const std::string& text = settings_.at(key);
    errno = 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || text.front() == '-' || errno != 0 || end != text.c_str() + text.size()) {
      errors.push_back(key + ": expected a non-negative integer, got '" + text + "'");
      return;
    }
    target = static_cast<Int>(value);
  }

  template <typename Parse, typename T>
  void choice(const std::string& key, T& target, Parse parse) {
    if (!has(key)) return;
    try {
      target = parse(settings_.at(key));
    } catch (const Error&) {
      errors.push_back(key + ": unknown value '" + settings_.at(key) + "'");
    }
  }

  void text(const std::string& key, std::string& target) {
    if (has(key)) target = settings_.at(key);
  }

  void require(const std::string& key) {
    if (!has(key)) errors.push_back(key + ": required for this command");
  }

  void check(bool ok, std::string message) {
    if (!ok) errors.push_back(std::move(message));
  }

  std::vector<std::string> errors;

 private:
  const Settings& settings_;
};

std::string join_reals(const State& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_real(v[i]);
  }
  return out;
}

std::size_t system_dimension(const std::string& system) { return system == "linear" ? 1 : 3; }

}  // namespace

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::simulate: return "simulate";
    case Command::ensemble: return "ensemble";
    case Command::picard: return "picard";
    case Command::converge: return "converge";
    case Command::weights: return "weights";
    case Command::path: return "path";
  }
  return "simulate";
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "system", "alpha",      "h",          "T",      "mu",     "beta",     "rho",    "a",
      "b",      "c",          "lambda",     "y0",     "seed",   "paths",    "path_index",
      "noise_history",        "weight_mode", "threads", "blowup", "radius", "K",      "norm",
      "levels", "min_order",  "n",          "output", "summary", "format"};
  return keys;
}

Settings parse_settings(const std::string& text) {
  Settings settings;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> errors;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(number) + ": expected key = value");
      continue;
    }
    std::string key = trim(std::string_view(stripped).substr(0, eq));
    std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) {
      errors.push_back("line " + std::to_string(number) + ": empty key");
      continue;
    }
    settings[std::move(key)] = std::move(value);
  }
  if (!errors.empty()) {
    std::string message = "invalid config:";
    for (const auto& e : errors) message += "\n  " + e;
    throw ConfigError(message);
  }
  return settings;
}

Settings read_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_settings(buffer.str());
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  if (parse_plain_real(text, value)) return value;
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    double num = 0.0;
    double den = 0.0;
    if (parse_plain_real(trim(std::string_view(text).substr(0, slash)), num) &&
        parse_plain_real(trim(std::string_view(text).substr(slash + 1)), den) && den != 0.0) {
      return num / den;
    }
  }
  throw ConfigError(key + ": expected a real number, got '" + text + "'");
}

RunConfig resolve(Command command, const Settings& settings) {
  RunConfig cfg;
  cfg.command = command;
  Resolver r(settings);

  for (const auto& [key, value] : settings) {
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      r.errors.push_back(key + ": unknown key");
    }
  }

  r.text("system", cfg.system);
  r.check(cfg.system == "newton_leipnik" || cfg.system == "lorenz" || cfg.system == "linear",
          "system: must be newton_leipnik, lorenz or linear, got '" + cfg.system + "'");
  r.real("alpha", cfg.alpha);
  r.real("h", cfg.h);
  r.real("T", cfg.T);
  r.real("mu", cfg.mu);
  r.real("beta", cfg.beta);
  r.real("rho", cfg.rho);
  r.real("a", cfg.a);
  r.real("b", cfg.b);
  r.real("c", cfg.c);
  r.real("lambda", cfg.lambda);
  if (r.has("y0")) {
    State y0;
    std::istringstream items(settings.at("y0"));
    std::string item;
    bool ok = true;
    while (std::getline(items, item, ',')) {
      try {
        y0.push_back(parse_real("y0", trim(item)));
      } catch (const ConfigError& e) {
        r.errors.emplace_back(e.what());
        ok = false;
      }
    }
    if (ok) {
      r.check(y0.size() == system_dimension(cfg.system),
              "y0: expected " + std::to_string(system_dimension(cfg.system)) + " comma-separated values for " +
                  cfg.system);
      cfg.y0 = std::move(y0);
    }
  }
  r.integer("seed", cfg.seed);
  r.integer("paths", cfg.paths);
  r.integer("path_index", cfg.path_index);
  r.choice("noise_history", cfg.noise_history, [](const std::string& s) { return parse_noise_history(s); });
  r.choice("weight_mode", cfg.weight_mode, [](const std::string& s) { return parse_weight_mode(s); });
  r.integer("threads", cfg.threads);
  r.real("blowup", cfg.blowup);
  r.optional_real("radius", cfg.radius);
  r.integer("K", cfg.iterations);
  r.choice("norm", cfg.norm, [](const std::string& s) {
    if (s == "terminal") return DistanceNorm::terminal;
    if (s == "sup_over_grid") return DistanceNorm::sup_over_grid;
    throw ConfigError("norm");
  });
  r.integer("levels", cfg.levels);
  r.optional_real("min_order", cfg.min_order);
  r.integer("n", cfg.n);
  r.text("output", cfg.output);
  if (r.has("summary")) cfg.summary = settings.at("summary");
  r.choice("format", cfg.format, [](const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ConfigError("format");
  });

  r.require("alpha");
  r.require("h");
  if (command != Command::weights) r.require("T");

  const bool solver_command = command != Command::weights && command != Command::path;
  if (r.has("alpha")) {
    r.check(cfg.alpha > 0.0 && cfg.alpha <= 1.0, "alpha: must lie in (0, 1], got " + format_real(cfg.alpha));
    if (solver_command && cfg.stochastic() && cfg.alpha > 0.0 && cfg.alpha <= 0.5) {
      r.check(false, "alpha: stochastic runs (mu != 0) require alpha > 1/2, got " + format_real(cfg.alpha) +
                         "; set mu = 0 for a deterministic run");
    }
  }
  if (r.has("h")) r.check(cfg.h > 0.0, "h: must be positive");
  if (r.has("T") && command != Command::weights) {
    r.check(cfg.T > 0.0, "T: must be positive");
    if (cfg.T > 0.0 && cfg.h > 0.0) {
      try {
        (void)TimeGrid::make(cfg.T, cfg.h);
      } catch (const Error& e) {
        r.errors.push_back(std::string("T/h: ") + e.what());
      }
    }
  }
  r.check(cfg.mu >= 0.0, "mu: must be non-negative");
  r.check(cfg.blowup > 0.0, "blowup: must be positive");
  if (cfg.radius) r.check(*cfg.radius > 0.0, "radius: must be positive");
  if (cfg.system == "newton_leipnik") {
    r.check(cfg.beta > 0.0, "beta: must be positive");
    r.check(cfg.rho >= 0.0, "rho: must be non-negative");
    if (cfg.rho > 8.0) cfg.warnings.push_back("rho > 8 is outside the usual range [0, 8]");
  }
  if (command == Command::ensemble) r.check(cfg.paths >= 1, "paths: must be at least 1");
  if (command == Command::picard) {
    r.check(cfg.paths >= 100, "paths: the Cauchy diagnostic needs at least 100 paths");
    r.check(cfg.iterations >= 3, "K: the Cauchy diagnostic needs at least 3 iterations");
  }
  if (command == Command::converge) {
    r.check(cfg.levels >= 3, "levels: at least 3 grid levels are needed");
    if (cfg.T > 0.0 && cfg.h > 0.0 && cfg.levels >= 3 && cfg.levels < 30) {
      const double finest = cfg.h / std::ldexp(1.0, static_cast<int>(cfg.levels) - 1);
      try {
        (void)TimeGrid::make(cfg.T, finest);
      } catch (const Error& e) {
        r.errors.push_back(std::string("levels: finest grid invalid: ") + e.what());
      }
    }
  }
  if (command == Command::weights) r.check(cfg.n >= 1, "n: must be at least 1");

  if (!r.errors.empty()) {
    std::string message = "invalid config (" + std::to_string(r.errors.size()) + " problem" +
                          (r.errors.size() == 1 ? "" : "s") + "):";
    for (const auto& e : r.errors) message += "\n  " + e;
    throw ConfigError(message);
  }
  return cfg;
}

SystemModel RunConfig::model() const {
  if (system == "newton_leipnik") {
    NewtonLeipnikParams p;
    p.beta = beta;
    p.rho = rho;
    p.mu = mu;
    if (y0) p.y0 = *y0;
    return newton_leipnik(p);
  }
  if (system == "lorenz") {
    LorenzParams p;
    p.a = a;
    p.b = b;
    p.c = c;
    p.mu = mu;
    if (y0) p.y0 = *y0;
    return lorenz(p);
  }
  return linear_test(lambda, mu, y0 ? (*y0)[0] : 1.0);
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.alpha = alpha;
  s.grid = grid();
  s.noise_history = noise_history;
  s.weight_mode = weight_mode;
  s.stochastic = stochastic();
  s.blowup_bound = blowup;
  return s;
}

Metadata RunConfig::metadata() const {
  Metadata m;
  m.emplace_back("tool", "sfde");
  m.emplace_back("version", SFDE_VERSION_STRING);
  m.emplace_back("command", std::string(to_string(command)));
  m.emplace_back("seed", std::to_string(seed));
  m.emplace_back("stochastic", stochastic() ? "true" : "false");
  m.emplace_back("noise_history", std::string(to_string(noise_history)));
  m.emplace_back("weight_mode", std::string(to_string(weight_mode)));
  m.emplace_back("alpha", format_real(alpha));
  m.emplace_back("h", format_real(h));
  if (command == Command::weights) {
    m.emplace_back("n", std::to_string(n));
    return m;
  }
  m.emplace_back("T", format_real(T));
  m.emplace_back("system", system);
  m.emplace_back("mu", format_real(mu));
  if (system == "newton_leipnik") {
    m.emplace_back("beta", format_real(beta));
    m.emplace_back("rho", format_real(rho));
  } else if (system == "lorenz") {
    m.emplace_back("a", format_real(a));
    m.emplace_back("b", format_real(b));
    m.emplace_back("c", format_real(c));
  } else {
    m.emplace_back("lambda", format_real(lambda));
  }
  m.emplace_back("y0", join_reals(model().initial_state()));
  m.emplace_back("blowup", format_real(blowup));
  switch (command) {
    case Command::simulate:
    case Command::path:
      m.emplace_back("path_index", std::to_string(path_index));
      if (command == Command::simulate && radius) m.emplace_back("radius", format_real(*radius));
      break;
    case Command::ensemble:
      m.emplace_back("paths", std::to_string(paths));
      break;
    case Command::picard:
      m.emplace_back("paths", std::to_string(paths));
      m.emplace_back("K", std::to_string(iterations));
      m.emplace_back("norm", norm == DistanceNorm::terminal ? "terminal" : "sup_over_grid");
      break;
    case Command::converge:
      m.emplace_back("levels", std::to_string(levels));
      if (min_order) m.emplace_back("min_order", format_real(*min_order));
      break;
    case Command::weights:
      break;
  }
  return m;
}

}  // namespace sfde::cli
