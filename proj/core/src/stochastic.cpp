#include "sfde/stochastic.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sfde/error.hpp"
#include "sfde/export.hpp"

namespace sfde {

namespace {

constexpr double kCommensurateTolerance = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

TimeGrid TimeGrid::make(double horizon, double step) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("time grid: horizon T must be positive and finite");
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ConfigError("time grid: step h must be positive and finite");
  }
  const double ratio = horizon / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > kCommensurateTolerance * std::max(1.0, rounded) || rounded < 2.0) {
    std::ostringstream msg;
    msg << "time grid: T/h = " << ratio << " must be an integer >= 2 (T=" << horizon << ", h=" << step << ")";
    throw ConfigError(msg.str());
  }
  return TimeGrid(horizon, step, static_cast<std::size_t>(rounded));
}

TimeGrid TimeGrid::coarsen(std::size_t factor) const {
  if (factor == 0 || steps_ % factor != 0) {
    throw ConfigError("time grid: coarsening factor must divide the step count");
  }
  return make(horizon_, step_ * static_cast<double>(factor));
}

std::uint64_t derive_stream_seed(const SeedSpec& seed) noexcept {
  std::uint64_t h = splitmix64(seed.master_seed);
  h = splitmix64(h ^ seed.path_index);
  h = splitmix64(h ^ (seed.channel_index + 0x632BE59BD9B4E019ULL));
  return h;
}

double NormalStream::uniform_open() {
  // 53 random bits, shifted by half an ulp so the result is never 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

WienerPath::WienerPath(TimeGrid grid, std::size_t channels, std::vector<double> increments)
    : grid_(grid), channels_(channels), increments_(std::move(increments)) {
  if (channels_ == 0) throw ConfigError("wiener path: at least one channel required");
  if (increments_.size() != channels_ * grid_.steps()) {
    throw ConfigError("wiener path: increment count does not match channels x steps");
  }
  cumulative_.assign(channels_ * grid_.node_count(), 0.0);
  for (std::size_t c = 0; c < channels_; ++c) {
    double* w = cumulative_.data() + c * grid_.node_count();
    const double* dw = increments_.data() + c * grid_.steps();
    for (std::size_t n = 0; n < grid_.steps(); ++n) w[n + 1] = w[n] + dw[n];
  }
}

WienerPath::WienerPath(TimeGrid grid, std::size_t channels, std::vector<double> increments,
                       std::vector<double> cumulative)
    : grid_(grid), channels_(channels), increments_(std::move(increments)), cumulative_(std::move(cumulative)) {}

WienerPath WienerPath::restrict_to(std::size_t factor) const {
  const TimeGrid coarse = grid_.coarsen(factor);
  std::vector<double> inc(channels_ * coarse.steps(), 0.0);
  std::vector<double> cum(channels_ * coarse.node_count(), 0.0);
  for (std::size_t c = 0; c < channels_; ++c) {
    const auto fine_inc = increments(c);
    const auto fine_cum = cumulative(c);
    for (std::size_t m = 0; m < coarse.steps(); ++m) {
      double block = 0.0;
      for (std::size_t i = m * factor; i < (m + 1) * factor; ++i) block += fine_inc[i];
      inc[c * coarse.steps() + m] = block;
    }
    for (std::size_t m = 0; m < coarse.node_count(); ++m) cum[c * coarse.node_count() + m] = fine_cum[m * factor];
  }
  return WienerPath(coarse, channels_, std::move(inc), std::move(cum));
}

WienerPath generate_path(std::uint64_t master_seed, std::uint64_t path_index, const TimeGrid& grid,
                         std::size_t channels) {
  const double scale = std::sqrt(grid.step());
  std::vector<double> inc(channels * grid.steps());
  for (std::size_t c = 0; c < channels; ++c) {
    NormalStream stream(SeedSpec{master_seed, path_index, c});
    for (std::size_t n = 0; n < grid.steps(); ++n) inc[c * grid.steps() + n] = scale * stream.next();
  }
  return WienerPath(grid, channels, std::move(inc));
}

void write_path_csv(std::ostream& out, const WienerPath& path) {
  const std::size_t channels = path.channels();
  out << "n,t";
  for (std::size_t c = 0; c < channels; ++c) out << ",dW_" << c + 1;
  for (std::size_t c = 0; c < channels; ++c) out << ",W_" << c + 1;
  out << '\n';
  const auto& grid = path.grid();
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    out << n << ',' << format_real(grid.time(n));
    for (std::size_t c = 0; c < channels; ++c) {
      out << ',';
      if (n < grid.steps()) out << format_real(path.increment(c, n));
    }
    for (std::size_t c = 0; c < channels; ++c) out << ',' << format_real(path.cumulative(c)[n]);
    out << '\n';
  }
}

}  // namespace sfde
