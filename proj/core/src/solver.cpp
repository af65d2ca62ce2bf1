#include "sfde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "sfde/error.hpp"
#include "sfde/special_functions.hpp"

namespace sfde {

std::string_view to_string(NoiseHistory mode) noexcept {
  return mode == NoiseHistory::per_step_increments ? "per_step_increments" : "paper_literal_last_increment";
}

NoiseHistory parse_noise_history(std::string_view name) {
  if (name == "per_step_increments") return NoiseHistory::per_step_increments;
  if (name == "paper_literal_last_increment") return NoiseHistory::paper_literal_last_increment;
  throw ConfigError("unknown noise history mode '" + std::string(name) +
                    "' (expected per_step_increments or paper_literal_last_increment)");
}

void SolverConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("solver: alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
  if (stochastic && !(alpha > 0.5)) {
    throw ConfigError("solver: stochastic runs require alpha > 1/2, got " + std::to_string(alpha));
  }
  if (!(blowup_bound > 0.0)) throw ConfigError("solver: blow-up bound must be positive");
}

Trajectory::Trajectory(TimeGrid grid, std::size_t dimension)
    : grid_(grid), dimension_(dimension), states_(grid.node_count() * dimension, 0.0) {}

Trajectory::Trajectory(TimeGrid grid, std::size_t dimension, std::vector<double> states)
    : grid_(grid), dimension_(dimension), states_(std::move(states)) {
  if (states_.size() != grid_.node_count() * dimension_) {
    throw ConfigError("trajectory: state array does not match grid and dimension");
  }
}

void check_divergence(std::span<const double> y, double bound, std::size_t node) {
  for (std::size_t c = 0; c < y.size(); ++c) {
    if (!std::isfinite(y[c]) || std::abs(y[c]) > bound) {
      std::ostringstream msg;
      msg << "divergence at node " << node << ": component " << c + 1 << " = " << y[c] << " exceeds bound "
          << bound;
      throw DivergenceError(msg.str(), node);
    }
  }
}

namespace {

void check_finite_evaluation(std::span<const double> values, const char* what, std::size_t node) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw DivergenceError(std::string("non-finite ") + what + " evaluation at node " + std::to_string(node), node);
    }
  }
}

}  // namespace

PredictorCorrector::PredictorCorrector(const SystemModel& model, const SolverConfig& cfg, const WienerPath* path)
    : model_(model),
      cfg_(cfg),
      path_(path),
      weights_(cfg.alpha, cfg.grid.step(), cfg.grid.steps(), cfg.weight_mode),
      d_(model.dimension()),
      dw_(model.noise_dimension()),
      gamma_alpha_(gamma(cfg.alpha)),
      gamma_alpha2_(gamma(cfg.alpha + 2.0)),
      h_alpha_(std::pow(cfg.grid.step(), cfg.alpha)),
      h_alpha_minus1_(std::pow(cfg.grid.step(), cfg.alpha - 1.0)),
      trajectory_(cfg.grid, model.dimension()) {
  cfg_.validate();
  if (cfg_.stochastic) {
    if (path_ == nullptr) throw ConfigError("solver: stochastic run requires a Wiener path");
    if (!(path_->grid() == cfg_.grid)) throw ConfigError("solver: Wiener path grid differs from solver grid");
    if (path_->channels() != dw_) {
      throw ConfigError("solver: Wiener path has " + std::to_string(path_->channels()) + " channels, model needs " +
                        std::to_string(dw_));
    }
  } else if (path_ != nullptr) {
    throw ConfigError("solver: deterministic run must not be given a Wiener path");
  }

  const std::size_t nodes = cfg_.grid.node_count();
  drift_history_.assign(nodes * d_, 0.0);
  if (cfg_.stochastic) {
    diffusion_history_.assign(nodes * d_ * dw_, 0.0);
    noise_history_.assign(nodes * d_, 0.0);
  }
  const State& y0 = model_.initial_state();
  std::copy(y0.begin(), y0.end(), trajectory_.at(0).begin());
  record_node(0);
  computed_ = 1;
}

void PredictorCorrector::record_node(std::size_t node) {
  const double t = cfg_.grid.time(node);
  const auto y = std::as_const(trajectory_).at(node);
  std::span<double> f(drift_history_.data() + node * d_, d_);
  model_.drift(t, y, f);
  check_finite_evaluation(f, "drift", node);
  if (!cfg_.stochastic) return;

  std::span<double> sigma(diffusion_history_.data() + node * d_ * dw_, d_ * dw_);
  model_.diffusion(t, y, sigma);
  check_finite_evaluation(sigma, "diffusion", node);
  if (node < cfg_.grid.steps()) {
    double* g = noise_history_.data() + node * d_;
    for (std::size_t i = 0; i < d_; ++i) {
      double acc = 0.0;
      for (std::size_t c = 0; c < dw_; ++c) acc += sigma[i * dw_ + c] * path_->increment(c, node);
      g[i] = acc;
    }
  }
}

void PredictorCorrector::accumulate_noise(std::size_t n, bool corrector, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  if (cfg_.noise_history == NoiseHistory::per_step_increments) {
    for (std::size_t j = 0; j <= n; ++j) {
      const double w = corrector ? weights_.corrector(n, j) : weights_.predictor(n, j);
      const double* g = noise_history_.data() + j * d_;
      for (std::size_t i = 0; i < d_; ++i) out[i] += w * g[i];
    }
    return;
  }
  // Literal form: every history term is multiplied by the current increment dW_n.
  std::vector<double> weighted(d_ * dw_, 0.0);
  for (std::size_t j = 0; j <= n; ++j) {
    const double w = corrector ? weights_.corrector(n, j) : weights_.predictor(n, j);
    const double* s = diffusion_history_.data() + j * d_ * dw_;
    for (std::size_t k = 0; k < d_ * dw_; ++k) weighted[k] += w * s[k];
  }
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t c = 0; c < dw_; ++c) out[i] += weighted[i * dw_ + c] * path_->increment(c, n);
  }
}

State PredictorCorrector::predict() const {
  const std::size_t n = computed_ - 1;
  State drift_sum(d_, 0.0);
  for (std::size_t j = 0; j <= n; ++j) {
    const double w = weights_.predictor(n, j);
    const double* f = drift_history_.data() + j * d_;
    for (std::size_t i = 0; i < d_; ++i) drift_sum[i] += w * f[i];
  }
  const State& y0 = model_.initial_state();
  State yp(d_);
  for (std::size_t i = 0; i < d_; ++i) yp[i] = y0[i] + drift_sum[i] / gamma_alpha_;
  if (cfg_.stochastic) {
    State noise_sum(d_);
    accumulate_noise(n, false, noise_sum);
    const double scale = 1.0 / (gamma_alpha_ * cfg_.grid.step());
    for (std::size_t i = 0; i < d_; ++i) yp[i] += scale * noise_sum[i];
  }
  return yp;
}

State PredictorCorrector::correct(std::span<const double> predicted) const {
  const std::size_t n = computed_ - 1;
  const double t_next = cfg_.grid.time(n + 1);

  State drift_sum = model_.drift(t_next, predicted);
  check_finite_evaluation(drift_sum, "drift", n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    const double w = weights_.corrector(n, j);
    const double* f = drift_history_.data() + j * d_;
    for (std::size_t i = 0; i < d_; ++i) drift_sum[i] += w * f[i];
  }
  const State& y0 = model_.initial_state();
  State y(d_);
  for (std::size_t i = 0; i < d_; ++i) y[i] = y0[i] + h_alpha_ / gamma_alpha2_ * drift_sum[i];

  if (cfg_.stochastic) {
    const std::vector<double> sigma_p = model_.diffusion(t_next, predicted);
    check_finite_evaluation(sigma_p, "diffusion", n + 1);
    State noise_sum(d_);
    accumulate_noise(n, true, noise_sum);
    for (std::size_t i = 0; i < d_; ++i) {
      double current = 0.0;
      for (std::size_t c = 0; c < dw_; ++c) current += sigma_p[i * dw_ + c] * path_->increment(c, n);
      y[i] += h_alpha_minus1_ / gamma_alpha2_ * (current + noise_sum[i]);
    }
  }
  return y;
}

void PredictorCorrector::advance() {
  if (computed_ >= cfg_.grid.node_count()) throw ConfigError("solver: trajectory already complete");
  const State yp = predict();
  const State y = correct(yp);
  check_divergence(y, cfg_.blowup_bound, computed_);
  std::copy(y.begin(), y.end(), trajectory_.at(computed_).begin());
  record_node(computed_);
  ++computed_;
}

Trajectory solve(const SystemModel& model, const SolverConfig& cfg) {
  if (cfg.stochastic) throw ConfigError("solver: stochastic configuration requires a Wiener path");
  PredictorCorrector stepper(model, cfg, nullptr);
  while (stepper.computed() < cfg.grid.node_count()) stepper.advance();
  return std::move(stepper).release();
}

Trajectory solve(const SystemModel& model, const SolverConfig& cfg, const WienerPath& path) {
  if (!cfg.stochastic) throw ConfigError("solver: deterministic configuration must not be given a Wiener path");
  PredictorCorrector stepper(model, cfg, &path);
  while (stepper.computed() < cfg.grid.node_count()) stepper.advance();
  return std::move(stepper).release();
}

}  // namespace sfde
