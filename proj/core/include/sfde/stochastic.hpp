#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

namespace sfde {

/// Equidistant grid 0 = t_0 < t_1 < ... < t_S = T with t_{j+1} - t_j = h.
/// S = steps() = T/h, so there are S + 1 nodes.
class TimeGrid {
 public:
  /// Throws ConfigError unless T > 0, h > 0 and T/h is within 1e-9 of an integer >= 2.
  static TimeGrid make(double horizon, double step);

  double step() const noexcept { return step_; }
  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t node_count() const noexcept { return steps_ + 1; }

  /// Node time; the last node is exactly the horizon.
  double time(std::size_t node) const noexcept {
    return node == steps_ ? horizon_ : static_cast<double>(node) * step_;
  }

  /// Grid with the same horizon and a step `factor` times larger.
  TimeGrid coarsen(std::size_t factor) const;

  /// Same horizon and step count (h is derived from those two).
  friend bool operator==(const TimeGrid& a, const TimeGrid& b) noexcept {
    return a.horizon_ == b.horizon_ && a.steps_ == b.steps_;
  }

 private:
  TimeGrid(double horizon, double step, std::size_t steps) : horizon_(horizon), step_(step), steps_(steps) {}

  double horizon_;
  double step_;
  std::size_t steps_;
};

/// Identifies one independent random stream.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
  std::uint64_t channel_index = 0;
};

/// Stable 64-bit mix of a SeedSpec triple (splitmix64 finalizer chained over the fields).
std::uint64_t derive_stream_seed(const SeedSpec& seed) noexcept;

/// Standard normal sampler: std::mt19937_64 seeded with derive_stream_seed(), 53-bit
/// uniforms in (0,1), Box-Muller (cosine and sine branches used in turn).
class NormalStream {
 public:
  explicit NormalStream(const SeedSpec& seed) : engine_(derive_stream_seed(seed)) {}
  double next();

 private:
  double uniform_open();

  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Multi-channel Brownian path on a TimeGrid. increments(c)[n] = W_c(t_{n+1}) - W_c(t_n)
/// and cumulative(c)[n] = W_c(t_n) with W_c(0) = 0. Immutable after construction.
class WienerPath {
 public:
  /// Builds the running sums from the given increments (channel-major, channels x steps).
  WienerPath(TimeGrid grid, std::size_t channels, std::vector<double> increments);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t channels() const noexcept { return channels_; }

  std::span<const double> increments(std::size_t channel) const noexcept {
    return {increments_.data() + channel * grid_.steps(), grid_.steps()};
  }
  std::span<const double> cumulative(std::size_t channel) const noexcept {
    return {cumulative_.data() + channel * grid_.node_count(), grid_.node_count()};
  }
  double increment(std::size_t channel, std::size_t step) const noexcept {
    return increments_[channel * grid_.steps() + step];
  }

  /// Restriction to the grid with step factor*h. Coarse increments are the block sums of the
  /// fine increments; the coarse cumulative values are the fine cumulative values sampled at
  /// the coarse nodes, so W(T) is preserved bit for bit.
  WienerPath restrict_to(std::size_t factor) const;

 private:
  WienerPath(TimeGrid grid, std::size_t channels, std::vector<double> increments, std::vector<double> cumulative);

  TimeGrid grid_;
  std::size_t channels_;
  std::vector<double> increments_;
  std::vector<double> cumulative_;
};

/// Draws every increment i.i.d. Normal(0, h); channel c uses SeedSpec{master, path, c}.
WienerPath generate_path(std::uint64_t master_seed, std::uint64_t path_index, const TimeGrid& grid,
                         std::size_t channels);

/// Debug dump: columns n, t_n, dW_1..dW_c, W_1..W_c (increments empty on the last node).
void write_path_csv(std::ostream& out, const WienerPath& path);

}  // namespace sfde
