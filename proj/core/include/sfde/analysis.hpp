#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sfde/solver.hpp"

namespace sfde {

/// Per-node ensemble moments over M trajectories sharing one grid.
struct EnsembleStats {
  TimeGrid grid = TimeGrid::make(1.0, 0.5);
  std::size_t dimension = 0;
  std::size_t paths = 0;
  std::vector<double> mean;      // node x dimension
  std::vector<double> variance;  // node x dimension, unbiased (M - 1); zero when M == 1
  std::vector<double> l2sq;      // node, (1/M) sum |y(t)|^2

  double mean_at(std::size_t node, std::size_t c) const { return mean[node * dimension + c]; }
  double variance_at(std::size_t node, std::size_t c) const { return variance[node * dimension + c]; }
};

/// Streaming accumulator (Welford per node, Chan's rule for merge).
class EnsembleAccumulator {
 public:
  EnsembleAccumulator(TimeGrid grid, std::size_t dimension);

  void add(const Trajectory& trajectory);
  void merge(const EnsembleAccumulator& other);
  EnsembleStats finish() const;
  std::size_t count() const noexcept { return count_; }

 private:
  TimeGrid grid_;
  std::size_t dimension_;
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
  std::vector<double> l2sq_;
};

struct EnsembleOptions {
  std::size_t first_path = 0;  // paths first_path .. first_path + paths - 1 are simulated
  std::size_t threads = 0;
  bool retain_trajectories = false;
};

struct EnsembleResult {
  EnsembleStats stats;
  std::vector<Trajectory> trajectories;  // filled when retain_trajectories
};

/// Path i is driven by generate_path(master_seed, first_path + i, ...). Work is reduced in fixed
/// blocks of path indices in index order, so the result does not depend on `threads`.
/// Deterministic configs (cfg.stochastic false) simulate one trajectory and replicate it.
/// Solver divergence is rethrown as DivergenceError carrying the path index.
EnsembleResult ensemble_run(const SystemModel& model, const SolverConfig& cfg, std::uint64_t master_seed,
                            std::size_t paths, const EnsembleOptions& options = {});

/// Combines statistics of disjoint path sets on the same grid.
EnsembleStats merge(const EnsembleStats& a, const EnsembleStats& b);

/// Variance of the pure-diffusion solution y(T) = (sigma/Gamma(a)) int_0^T (T-s)^{a-1} dW(s):
/// sigma^2 T^{2a-1} / ((2a-1) Gamma(a)^2).
double pure_diffusion_variance(double alpha, double sigma, double horizon);

struct IsometryReport {
  double monte_carlo = 0.0;  // (1/M) sum (int v dW)^2
  double exact = 0.0;        // int_0^T v(s)^2 ds = T^{2a-1}/(2a-1)
  double relative_error = 0.0;
};

/// Empirical Ito isometry for the kernel v(s) = (T-s)^{a-1}. Each sample is
/// sum_j vbar_j dW_j where vbar_j is the exact cell average of v, so the a = 1 case reduces to
/// W(T). Requires alpha in (1/2, 1] and paths >= 1000.
IsometryReport ito_isometry_check(double alpha, const TimeGrid& grid, std::size_t paths, std::uint64_t seed = 0,
                                  std::size_t threads = 0);

struct ConvergenceReport {
  std::vector<double> steps;   // h of each measured level
  std::vector<double> errors;  // max over coarse nodes of |y_h - y_ref|_inf
  double order = 0.0;          // least-squares slope of log(error) vs log(h)
  bool degenerate = false;     // some error was zero; no slope is fitted
};

/// Exact solution oracle; when given, every level is compared against it. Otherwise the
/// finest level serves as the reference and is not itself measured.
using ExactSolution = std::function<State(double t)>;

struct ConvergenceOptions {
  bool stochastic = false;
  std::uint64_t seed = 0;
  NoiseHistory noise_history = NoiseHistory::per_step_increments;
  WeightMode weight_mode = WeightMode::standard;
  ExactSolution exact;
};

/// Empirical order over a dyadic chain h_0 > h_0/2 > ... (at least 3 levels). The stochastic case
/// generates one path on the finest grid and restricts it to the coarser ones.
ConvergenceReport convergence_order(const SystemModel& model, double alpha, double horizon,
                                    const std::vector<double>& steps, const ConvergenceOptions& options = {});

struct AttractorCheck {
  bool passed = false;
  double max_norm = 0.0;  // max over nodes of |y(t)|_inf
};

AttractorCheck bounded_attractor_check(const Trajectory& trajectory, double radius);

}  // namespace sfde
