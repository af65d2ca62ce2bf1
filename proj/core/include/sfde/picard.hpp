#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sfde/solver.hpp"

namespace sfde {

/// Product-rectangle approximation of (1/Gamma(a)) int_0^{t_n} (t_n - s)^{a-1} f(s, y(s)) ds:
/// f is frozen at the left node of each cell and the kernel is integrated exactly.
State g1_quadrature(const Trajectory& y, const SystemModel& model, double alpha, std::size_t node);

/// Left-point Ito sum (1/Gamma(a)) sum_{j<n} (t_n - t_j)^{a-1} sigma(t_j, y_j) dW_j.
State g2_stochastic_convolution(const Trajectory& y, const SystemModel& model, double alpha, const WienerPath& path,
                                std::size_t node);

struct PicardSequence {
  std::vector<Trajectory> iterates;  // y_0 (constant y0), y_1, ..., y_K on one grid and path
};

/// Picard iteration y_{k+1} = y0 + G1(y_k) + G2(y_k). `path` may be null for a
/// deterministic run. Requires K >= 1 and alpha in (1/2, 1] (alpha in (0,1] without noise).
PicardSequence picard_iterate(const SystemModel& model, double alpha, const TimeGrid& grid, const WienerPath* path,
                              std::size_t iterations, double blowup_bound = kDefaultBlowupBound);

enum class DistanceNorm { terminal, sup_over_grid };

/// Squared Euclidean distance between consecutive iterates, len = iterates - 1.
std::vector<double> iterate_distances(const PicardSequence& seq, DistanceNorm norm);

struct CauchyOptions {
  std::uint64_t master_seed = 0;
  std::size_t paths = 200;
  std::size_t iterations = 6;
  DistanceNorm norm = DistanceNorm::terminal;
  bool stochastic = true;
  std::size_t threads = 0;
  double blowup_bound = kDefaultBlowupBound;
};

struct CauchyReport {
  /// distances[k-1] = d_k = (1/M) sum_paths |y_{k+1} - y_k|^2, k = 1..K-1.
  std::vector<double> distances;
  /// max_k (1/M) sum_paths |y_k(T)|^2 over all iterates.
  double max_second_moment = 0.0;
  bool strictly_decreasing = false;
  /// d_{K-1} < 0.01 d_1, or every distance is zero.
  bool contracted = false;
};

/// Monte Carlo Cauchy diagnostic over `paths` independent Wiener paths. Requires paths >= 100
/// and iterations >= 3.
CauchyReport cauchy_diagnostic(const SystemModel& model, double alpha, const TimeGrid& grid,
                               const CauchyOptions& options);

}  // namespace sfde
