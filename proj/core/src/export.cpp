#include "sfde/export.hpp"

#include <cstdio>
#include <ostream>

namespace sfde {

std::string format_real(double value) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << '=' << value << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, const Metadata& meta) {
  write_metadata(out, meta);
  out << 't';
  for (std::size_t c = 0; c < trajectory.dimension(); ++c) out << ",y" << c + 1;
  out << '\n';
  const auto& grid = trajectory.grid();
  for (std::size_t n = 0; n < trajectory.node_count(); ++n) {
    out << format_real(grid.time(n));
    for (double v : trajectory.at(n)) out << ',' << format_real(v);
    out << '\n';
  }
}

void write_stats_csv(std::ostream& out, const EnsembleStats& stats, const Metadata& meta) {
  write_metadata(out, meta);
  const std::size_t d = stats.dimension;
  out << 't';
  for (std::size_t c = 0; c < d; ++c) out << ",mean_" << c + 1;
  for (std::size_t c = 0; c < d; ++c) out << ",var_" << c + 1;
  out << ",l2sq\n";
  for (std::size_t n = 0; n < stats.grid.node_count(); ++n) {
    out << format_real(stats.grid.time(n));
    for (std::size_t c = 0; c < d; ++c) out << ',' << format_real(stats.mean_at(n, c));
    for (std::size_t c = 0; c < d; ++c) out << ',' << format_real(stats.variance_at(n, c));
    out << ',' << format_real(stats.l2sq[n]) << '\n';
  }
}

void write_distance_csv(std::ostream& out, const std::vector<double>& distances, const Metadata& meta) {
  write_metadata(out, meta);
  out << "k,d_k\n";
  for (std::size_t k = 0; k < distances.size(); ++k) out << k + 1 << ',' << format_real(distances[k]) << '\n';
}

void write_weights_csv(std::ostream& out, const std::vector<double>& corrector, const std::vector<double>& predictor,
                       const Metadata& meta) {
  write_metadata(out, meta);
  out << "j,a_j,b_j\n";
  for (std::size_t j = 0; j < corrector.size(); ++j) {
    out << j << ',' << format_real(corrector[j]) << ',';
    if (j < predictor.size()) out << format_real(predictor[j]);
    out << '\n';
  }
}

}  // namespace sfde
