#include "sfde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sfde/error.hpp"
#include "sfde/parallel.hpp"
#include "sfde/special_functions.hpp"

namespace sfde {

EnsembleAccumulator::EnsembleAccumulator(TimeGrid grid, std::size_t dimension)
    : grid_(grid),
      dimension_(dimension),
      mean_(grid.node_count() * dimension, 0.0),
      m2_(grid.node_count() * dimension, 0.0),
      l2sq_(grid.node_count(), 0.0) {}

void EnsembleAccumulator::add(const Trajectory& trajectory) {
  if (!(trajectory.grid() == grid_) || trajectory.dimension() != dimension_) {
    throw ConfigError("ensemble: trajectory does not match accumulator grid/dimension");
  }
  ++count_;
  const double n = static_cast<double>(count_);
  const auto& data = trajectory.data();
  for (std::size_t k = 0; k < data.size(); ++k) {
    const double delta = data[k] - mean_[k];
    mean_[k] += delta / n;
    m2_[k] += delta * (data[k] - mean_[k]);
  }
  for (std::size_t node = 0; node < grid_.node_count(); ++node) {
    double sq = 0.0;
    for (double v : trajectory.at(node)) sq += v * v;
    l2sq_[node] += (sq - l2sq_[node]) / n;
  }
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
  if (!(other.grid_ == grid_) || other.dimension_ != dimension_) {
    throw ConfigError("ensemble: cannot merge accumulators on different grids");
  }
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  for (std::size_t k = 0; k < mean_.size(); ++k) {
    const double delta = other.mean_[k] - mean_[k];
    mean_[k] += delta * nb / n;
    m2_[k] += other.m2_[k] + delta * delta * na * nb / n;
  }
  for (std::size_t node = 0; node < l2sq_.size(); ++node) {
    l2sq_[node] += (other.l2sq_[node] - l2sq_[node]) * nb / n;
  }
  count_ += other.count_;
}

EnsembleStats EnsembleAccumulator::finish() const {
  EnsembleStats stats;
  stats.grid = grid_;
  stats.dimension = dimension_;
  stats.paths = count_;
  stats.mean = mean_;
  stats.variance.assign(m2_.size(), 0.0);
  if (count_ > 1) {
    const double denom = static_cast<double>(count_ - 1);
    for (std::size_t k = 0; k < m2_.size(); ++k) stats.variance[k] = std::max(0.0, m2_[k] / denom);
  }
  stats.l2sq = l2sq_;
  return stats;
}

namespace {

constexpr std::size_t kReductionBlock = 32;

}  // namespace

EnsembleResult ensemble_run(const SystemModel& model, const SolverConfig& cfg, std::uint64_t master_seed,
                            std::size_t paths, const EnsembleOptions& options) {
  if (paths < 1) throw ConfigError("ensemble: at least one path required");
  cfg.validate();
  const std::size_t d = model.dimension();
  EnsembleResult result;
  if (options.retain_trajectories) result.trajectories.reserve(paths);

  auto run_one = [&](std::size_t i) {
    const std::size_t index = options.first_path + i;
    try {
      if (!cfg.stochastic) return solve(model, cfg);
      const WienerPath path = generate_path(master_seed, index, cfg.grid, model.noise_dimension());
      return solve(model, cfg, path);
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string(e.what()) + " (path " + std::to_string(index) + ")", e.node(), index);
    }
  };

  if (!cfg.stochastic) {
    const Trajectory single = run_one(0);
    EnsembleAccumulator acc(cfg.grid, d);
    for (std::size_t i = 0; i < paths; ++i) acc.add(single);
    result.stats = acc.finish();
    if (options.retain_trajectories) result.trajectories.assign(paths, single);
    return result;
  }

  const std::size_t blocks = (paths + kReductionBlock - 1) / kReductionBlock;
  std::vector<EnsembleAccumulator> partial(blocks, EnsembleAccumulator(cfg.grid, d));
  std::vector<std::optional<Trajectory>> kept(options.retain_trajectories ? paths : 0);
  parallel_for(blocks, options.threads, [&](std::size_t b) {
    const std::size_t begin = b * kReductionBlock;
    const std::size_t end = std::min(paths, begin + kReductionBlock);
    for (std::size_t i = begin; i < end; ++i) {
      Trajectory y = run_one(i);
      partial[b].add(y);
      if (options.retain_trajectories) kept[i] = std::move(y);
    }
  });
  EnsembleAccumulator total(cfg.grid, d);
  for (const auto& acc : partial) total.merge(acc);
  result.stats = total.finish();
  for (auto& y : kept) result.trajectories.push_back(std::move(*y));
  return result;
}

EnsembleStats merge(const EnsembleStats& a, const EnsembleStats& b) {
  if (!(a.grid == b.grid) || a.dimension != b.dimension) {
    throw ConfigError("ensemble: cannot merge statistics on different grids");
  }
  if (a.paths == 0) return b;
  if (b.paths == 0) return a;
  EnsembleStats out = a;
  const double na = static_cast<double>(a.paths);
  const double nb = static_cast<double>(b.paths);
  const double n = na + nb;
  out.paths = a.paths + b.paths;
  for (std::size_t k = 0; k < a.mean.size(); ++k) {
    const double delta = b.mean[k] - a.mean[k];
    const double m2 = a.variance[k] * (na - 1.0) + b.variance[k] * (nb - 1.0) + delta * delta * na * nb / n;
    out.mean[k] = a.mean[k] + delta * nb / n;
    out.variance[k] = std::max(0.0, m2 / (n - 1.0));
  }
  for (std::size_t node = 0; node < a.l2sq.size(); ++node) {
    out.l2sq[node] = a.l2sq[node] + (b.l2sq[node] - a.l2sq[node]) * nb / n;
  }
  return out;
}

double pure_diffusion_variance(double alpha, double sigma, double horizon) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw ConfigError("pure diffusion variance requires alpha in (1/2, 1]");
  const double g = gamma(alpha);
  return sigma * sigma * std::pow(horizon, 2.0 * alpha - 1.0) / ((2.0 * alpha - 1.0) * g * g);
}

IsometryReport ito_isometry_check(double alpha, const TimeGrid& grid, std::size_t paths, std::uint64_t seed,
                                  std::size_t threads) {
  if (!(alpha > 0.5 && alpha <= 1.0)) throw ConfigError("isometry check requires alpha in (1/2, 1]");
  if (paths < 1000) throw ConfigError("isometry check requires at least 1000 paths");
  const std::size_t steps = grid.steps();
  const double h = grid.step();
  std::vector<double> kernel(steps);
  for (std::size_t j = 0; j < steps; ++j) {
    const double k = static_cast<double>(steps - 1 - j);
    kernel[j] = std::pow(h, alpha - 1.0) * (std::pow(k + 1.0, alpha) - std::pow(k, alpha)) / alpha;
  }
  std::vector<double> squares(paths);
  parallel_for(paths, threads, [&](std::size_t p) {
    const WienerPath path = generate_path(seed, p, grid, 1);
    const auto dw = path.increments(0);
    double x = 0.0;
    for (std::size_t j = 0; j < steps; ++j) x += kernel[j] * dw[j];
    squares[p] = x * x;
  });
  IsometryReport report;
  double sum = 0.0;
  for (double s : squares) sum += s;
  report.monte_carlo = sum / static_cast<double>(paths);
  report.exact = std::pow(grid.horizon(), 2.0 * alpha - 1.0) / (2.0 * alpha - 1.0);
  report.relative_error = std::abs(report.monte_carlo - report.exact) / report.exact;
  return report;
}

ConvergenceReport convergence_order(const SystemModel& model, double alpha, double horizon,
                                    const std::vector<double>& steps, const ConvergenceOptions& options) {
  if (steps.size() < 3) throw ConfigError("convergence order: at least 3 grid levels required");
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (std::abs(steps[i] * 2.0 - steps[i - 1]) > 1e-12 * steps[i - 1]) {
      throw ConfigError("convergence order: step list must be a dyadic refinement chain h, h/2, h/4, ...");
    }
  }
  const std::size_t levels = steps.size();
  const TimeGrid fine = TimeGrid::make(horizon, steps.back());
  std::optional<WienerPath> fine_path;
  if (options.stochastic) fine_path = generate_path(options.seed, 0, fine, model.noise_dimension());

  std::vector<Trajectory> solutions;
  std::vector<std::size_t> factors;
  for (std::size_t i = 0; i < levels; ++i) {
    const std::size_t factor = std::size_t{1} << (levels - 1 - i);
    SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.grid = fine.coarsen(factor);
    cfg.noise_history = options.noise_history;
    cfg.weight_mode = options.weight_mode;
    cfg.stochastic = options.stochastic;
    if (options.stochastic) {
      const WienerPath path = factor == 1 ? *fine_path : fine_path->restrict_to(factor);
      solutions.push_back(solve(model, cfg, path));
    } else {
      solutions.push_back(solve(model, cfg));
    }
    factors.push_back(factor);
  }

  ConvergenceReport report;
  const std::size_t measured = options.exact ? levels : levels - 1;
  const Trajectory& reference = solutions.back();
  for (std::size_t i = 0; i < measured; ++i) {
    const Trajectory& y = solutions[i];
    double err = 0.0;
    for (std::size_t m = 0; m < y.node_count(); ++m) {
      const auto value = y.at(m);
      State ref;
      if (options.exact) {
        ref = options.exact(y.grid().time(m));
      } else {
        const auto r = reference.at(m * factors[i]);
        ref.assign(r.begin(), r.end());
      }
      for (std::size_t c = 0; c < value.size(); ++c) err = std::max(err, std::abs(value[c] - ref[c]));
    }
    report.steps.push_back(y.grid().step());
    report.errors.push_back(err);
  }

  const bool usable =
      std::all_of(report.errors.begin(), report.errors.end(), [](double e) { return e > 0.0 && std::isfinite(e); });
  if (!usable || report.errors.size() < 2) {
    report.degenerate = true;
    report.order = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(report.errors.size());
  for (std::size_t i = 0; i < report.errors.size(); ++i) {
    const double x = std::log(report.steps[i]);
    const double yv = std::log(report.errors[i]);
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
  }
  report.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return report;
}

AttractorCheck bounded_attractor_check(const Trajectory& trajectory, double radius) {
  AttractorCheck check;
  bool finite = true;
  for (double v : trajectory.data()) {
    if (!std::isfinite(v)) finite = false;
    check.max_norm = std::max(check.max_norm, std::abs(v));
  }
  check.passed = finite && check.max_norm <= radius;
  return check;
}

}  // namespace sfde
