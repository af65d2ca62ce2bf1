#include "sfde/picard.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfde/error.hpp"
#include "sfde/parallel.hpp"
#include "sfde/special_functions.hpp"

namespace sfde {

namespace {

void check_alpha(double alpha, bool stochastic) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("picard: alpha must lie in (0, 1]");
  if (stochastic && !(alpha > 0.5)) throw ConfigError("picard: stochastic convolution requires alpha > 1/2");
}

// Exact integral of the kernel over cell [t_j, t_{j+1}] seen from t_n, divided by Gamma(alpha) and
// with the h^alpha factor pulled out: [(k+1)^a - k^a] / Gamma(a+1), k = n - 1 - j.
double rectangle_weight(std::size_t k, double alpha, double gamma_alpha1) {
  const double kk = static_cast<double>(k);
  return (std::pow(kk + 1.0, alpha) - std::pow(kk, alpha)) / gamma_alpha1;
}

// Left-point Ito kernel ((n - j) h)^{a-1} / Gamma(a) with m = n - j >= 1.
double ito_weight(std::size_t m, double alpha, double h, double gamma_alpha) {
  return std::pow(static_cast<double>(m) * h, alpha - 1.0) / gamma_alpha;
}

// Drift and sigma*dW of one iterate at every node, reused by all target nodes.
struct IterateTerms {
  std::vector<double> drift;  // node x d
  std::vector<double> noise;  // step x d
};

IterateTerms evaluate_terms(const Trajectory& y, const SystemModel& model, const WienerPath* path) {
  const auto& grid = y.grid();
  const std::size_t d = model.dimension();
  const std::size_t dw = model.noise_dimension();
  IterateTerms terms;
  terms.drift.resize(grid.node_count() * d);
  for (std::size_t j = 0; j < grid.node_count(); ++j) {
    model.drift(grid.time(j), y.at(j), std::span<double>(terms.drift.data() + j * d, d));
  }
  if (path != nullptr) {
    terms.noise.assign(grid.steps() * d, 0.0);
    std::vector<double> sigma(d * dw);
    for (std::size_t j = 0; j < grid.steps(); ++j) {
      model.diffusion(grid.time(j), y.at(j), sigma);
      for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dw; ++c) acc += sigma[i * dw + c] * path->increment(c, j);
        terms.noise[j * d + i] = acc;
      }
    }
  }
  return terms;
}

}  // namespace

State g1_quadrature(const Trajectory& y, const SystemModel& model, double alpha, std::size_t node) {
  check_alpha(alpha, false);
  const auto& grid = y.grid();
  const std::size_t d = model.dimension();
  const double gamma_alpha1 = gamma(alpha + 1.0);
  const double h_alpha = std::pow(grid.step(), alpha);
  State out(d, 0.0);
  State f(d);
  for (std::size_t j = 0; j < node; ++j) {
    model.drift(grid.time(j), y.at(j), f);
    const double w = h_alpha * rectangle_weight(node - 1 - j, alpha, gamma_alpha1);
    for (std::size_t i = 0; i < d; ++i) out[i] += w * f[i];
  }
  return out;
}

State g2_stochastic_convolution(const Trajectory& y, const SystemModel& model, double alpha, const WienerPath& path,
                                std::size_t node) {
  check_alpha(alpha, true);
  const auto& grid = y.grid();
  if (!(path.grid() == grid)) throw ConfigError("picard: Wiener path grid differs from trajectory grid");
  const std::size_t d = model.dimension();
  const std::size_t dw = model.noise_dimension();
  const double gamma_alpha = gamma(alpha);
  State out(d, 0.0);
  std::vector<double> sigma(d * dw);
  for (std::size_t j = 0; j < node; ++j) {
    model.diffusion(grid.time(j), y.at(j), sigma);
    const double w = ito_weight(node - j, alpha, grid.step(), gamma_alpha);
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (std::size_t c = 0; c < dw; ++c) acc += sigma[i * dw + c] * path.increment(c, j);
      out[i] += w * acc;
    }
  }
  return out;
}

PicardSequence picard_iterate(const SystemModel& model, double alpha, const TimeGrid& grid, const WienerPath* path,
                              std::size_t iterations, double blowup_bound) {
  check_alpha(alpha, path != nullptr);
  if (iterations < 1) throw ConfigError("picard: at least one iteration required");
  if (path != nullptr) {
    if (!(path->grid() == grid)) throw ConfigError("picard: Wiener path grid differs from iteration grid");
    if (path->channels() != model.noise_dimension()) throw ConfigError("picard: Wiener path channel mismatch");
  }
  const std::size_t d = model.dimension();
  const std::size_t nodes = grid.node_count();
  const State& y0 = model.initial_state();
  const double gamma_alpha = gamma(alpha);
  const double gamma_alpha1 = gamma(alpha + 1.0);
  const double h_alpha = std::pow(grid.step(), alpha);

  std::vector<double> drift_w(nodes), ito_w(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    drift_w[k] = h_alpha * rectangle_weight(k, alpha, gamma_alpha1);
    ito_w[k] = k == 0 ? 0.0 : ito_weight(k, alpha, grid.step(), gamma_alpha);
  }

  PicardSequence seq;
  seq.iterates.reserve(iterations + 1);
  {
    std::vector<double> constant(nodes * d);
    for (std::size_t n = 0; n < nodes; ++n) std::copy(y0.begin(), y0.end(), constant.begin() + n * d);
    seq.iterates.emplace_back(grid, d, std::move(constant));
  }
  for (std::size_t it = 0; it < iterations; ++it) {
    const IterateTerms terms = evaluate_terms(seq.iterates.back(), model, path);
    Trajectory next(grid, d);
    for (std::size_t n = 0; n < nodes; ++n) {
      auto y = next.at(n);
      std::copy(y0.begin(), y0.end(), y.begin());
      for (std::size_t j = 0; j < n; ++j) {
        const double wf = drift_w[n - 1 - j];
        const double* f = terms.drift.data() + j * d;
        for (std::size_t i = 0; i < d; ++i) y[i] += wf * f[i];
      }
      if (path != nullptr) {
        for (std::size_t j = 0; j < n; ++j) {
          const double wg = ito_w[n - j];
          const double* g = terms.noise.data() + j * d;
          for (std::size_t i = 0; i < d; ++i) y[i] += wg * g[i];
        }
      }
      check_divergence(y, blowup_bound, n);
    }
    seq.iterates.push_back(std::move(next));
  }
  return seq;
}

std::vector<double> iterate_distances(const PicardSequence& seq, DistanceNorm norm) {
  std::vector<double> out;
  if (seq.iterates.size() < 2) return out;
  out.reserve(seq.iterates.size() - 1);
  for (std::size_t k = 0; k + 1 < seq.iterates.size(); ++k) {
    const Trajectory& a = seq.iterates[k];
    const Trajectory& b = seq.iterates[k + 1];
    auto sq_dist = [&](std::size_t node) {
      double s = 0.0;
      const auto ya = a.at(node);
      const auto yb = b.at(node);
      for (std::size_t i = 0; i < ya.size(); ++i) s += (yb[i] - ya[i]) * (yb[i] - ya[i]);
      return s;
    };
    if (norm == DistanceNorm::terminal) {
      out.push_back(sq_dist(a.node_count() - 1));
    } else {
      double m = 0.0;
      for (std::size_t n = 0; n < a.node_count(); ++n) m = std::max(m, sq_dist(n));
      out.push_back(m);
    }
  }
  return out;
}

CauchyReport cauchy_diagnostic(const SystemModel& model, double alpha, const TimeGrid& grid,
                               const CauchyOptions& options) {
  if (options.paths < 100) throw ConfigError("cauchy diagnostic: at least 100 paths required");
  if (options.iterations < 3) throw ConfigError("cauchy diagnostic: at least 3 iterations required");
  check_alpha(alpha, options.stochastic);
  const std::size_t M = options.paths;
  const std::size_t K = options.iterations;

  // Per-path results, reduced afterwards in path order.
  std::vector<std::vector<double>> distances(M);
  std::vector<std::vector<double>> second_moments(M);
  auto run_path = [&](std::size_t p) {
    try {
      PicardSequence seq;
      if (options.stochastic) {
        const WienerPath path = generate_path(options.master_seed, p, grid, model.noise_dimension());
        seq = picard_iterate(model, alpha, grid, &path, K, options.blowup_bound);
      } else {
        seq = picard_iterate(model, alpha, grid, nullptr, K, options.blowup_bound);
      }
      distances[p] = iterate_distances(seq, options.norm);
      auto& sm = second_moments[p];
      for (const auto& y : seq.iterates) {
        double s = 0.0;
        for (double v : y.terminal()) s += v * v;
        sm.push_back(s);
      }
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string(e.what()) + " (path " + std::to_string(p) + ")", e.node(), p);
    }
  };
  if (options.stochastic) {
    parallel_for(M, options.threads, run_path);
  } else {
    run_path(0);
    for (std::size_t p = 1; p < M; ++p) {
      distances[p] = distances[0];
      second_moments[p] = second_moments[0];
    }
  }

  CauchyReport report;
  std::vector<double> mean_dist(K, 0.0);
  std::vector<double> mean_sm(K + 1, 0.0);
  for (std::size_t p = 0; p < M; ++p) {
    for (std::size_t k = 0; k < K; ++k) mean_dist[k] += distances[p][k];
    for (std::size_t k = 0; k <= K; ++k) mean_sm[k] += second_moments[p][k];
  }
  for (double& v : mean_dist) v /= static_cast<double>(M);
  for (double& v : mean_sm) v /= static_cast<double>(M);
  report.distances.assign(mean_dist.begin() + 1, mean_dist.end());
  report.max_second_moment = *std::max_element(mean_sm.begin(), mean_sm.end());

  report.strictly_decreasing = true;
  for (std::size_t k = 1; k < report.distances.size(); ++k) {
    if (!(report.distances[k] < report.distances[k - 1])) report.strictly_decreasing = false;
  }
  const bool all_zero = std::all_of(report.distances.begin(), report.distances.end(), [](double v) { return v == 0.0; });
  report.contracted = all_zero || report.distances.back() < 0.01 * report.distances.front();
  return report;
}

}  // namespace sfde
