#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sfde/stochastic.hpp"
#include "sfde/system.hpp"
#include "sfde/weights.hpp"

namespace sfde {

/// Which Wiener increment multiplies the history term at node j.
///   per_step_increments:          dW_j  (discretizes the stochastic Volterra integral)
///   paper_literal_last_increment: dW_n  for every j (the formula as printed)
enum class NoiseHistory { per_step_increments, paper_literal_last_increment };

std::string_view to_string(NoiseHistory mode) noexcept;
NoiseHistory parse_noise_history(std::string_view name);

inline constexpr double kDefaultBlowupBound = 1e6;

struct SolverConfig {
  double alpha = 1.0;
  TimeGrid grid = TimeGrid::make(1.0, 0.5);
  NoiseHistory noise_history = NoiseHistory::per_step_increments;
  WeightMode weight_mode = WeightMode::standard;
  bool stochastic = false;
  double blowup_bound = kDefaultBlowupBound;

  /// Throws ConfigError: alpha must lie in (0,1], and in (1/2,1] when stochastic.
  void validate() const;
};

/// Node values y_h(t_0), ..., y_h(t_S), stored row-major (node x dimension).
class Trajectory {
 public:
  Trajectory(TimeGrid grid, std::size_t dimension);
  Trajectory(TimeGrid grid, std::size_t dimension, std::vector<double> states);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t node_count() const noexcept { return grid_.node_count(); }

  std::span<const double> at(std::size_t node) const noexcept {
    return {states_.data() + node * dimension_, dimension_};
  }
  std::span<double> at(std::size_t node) noexcept { return {states_.data() + node * dimension_, dimension_}; }
  std::span<const double> terminal() const noexcept { return at(node_count() - 1); }
  const std::vector<double>& data() const noexcept { return states_; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  TimeGrid grid_;
  std::size_t dimension_;
  std::vector<double> states_;
};

/// Fractional Adams predictor-corrector (one PECE pass per step) on
///   y(t) = y0 + I^a f(., y)(t) + (1/Gamma(a)) int_0^t (t-s)^{a-1} sigma(s, y(s)) dW(s).
///
/// The stepper owns the history of drift values and diffusion-times-increment terms so that
/// each step costs O(n d d_w). Use solve() unless step-level access is required.
class PredictorCorrector {
 public:
  /// `path` must be non-null iff cfg.stochastic, share cfg.grid and carry model.noise_dimension()
  /// channels. The model and path must outlive the stepper.
  PredictorCorrector(const SystemModel& model, const SolverConfig& cfg, const WienerPath* path);

  /// Number of nodes already computed (starts at 1: the initial state).
  std::size_t computed() const noexcept { return computed_; }

  /// Predictor y^p(t_{n+1}) for n + 1 == computed().
  State predict() const;
  /// Corrector y(t_{n+1}) from a predicted value, for n + 1 == computed().
  State correct(std::span<const double> predicted) const;
  /// predict + correct + blow-up check + append to history.
  void advance();

  const Trajectory& trajectory() const noexcept { return trajectory_; }
  Trajectory release() && { return std::move(trajectory_); }

 private:
  void record_node(std::size_t node);
  // sum_j w(n,j) * (noise term of node j), for the selected noise-history mode
  void accumulate_noise(std::size_t n, bool corrector, std::span<double> out) const;

  const SystemModel& model_;
  SolverConfig cfg_;
  const WienerPath* path_;
  WeightTable weights_;
  std::size_t d_;
  std::size_t dw_;
  double gamma_alpha_;
  double gamma_alpha2_;
  double h_alpha_;
  double h_alpha_minus1_;
  Trajectory trajectory_;
  std::vector<double> drift_history_;      // node x d
  std::vector<double> diffusion_history_;  // node x d x d_w
  std::vector<double> noise_history_;      // node x d, sigma_j dW_j
  std::size_t computed_ = 0;
};

/// Deterministic solve (cfg.stochastic must be false).
Trajectory solve(const SystemModel& model, const SolverConfig& cfg);
/// Stochastic solve driven by `path`.
Trajectory solve(const SystemModel& model, const SolverConfig& cfg, const WienerPath& path);

/// Throws DivergenceError if any entry of `y` is non-finite or exceeds `bound` in magnitude.
void check_divergence(std::span<const double> y, double bound, std::size_t node);

}  // namespace sfde
