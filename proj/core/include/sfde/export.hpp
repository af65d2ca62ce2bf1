#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sfde/analysis.hpp"
#include "sfde/picard.hpp"
#include "sfde/solver.hpp"

namespace sfde {

/// Ordered key/value pairs echoed as leading "# key=value" lines of every CSV.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double value);

void write_metadata(std::ostream& out, const Metadata& meta);

/// Columns t, y1..yd.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, const Metadata& meta = {});

/// Columns t, mean_1..d, var_1..d, l2sq.
void write_stats_csv(std::ostream& out, const EnsembleStats& stats, const Metadata& meta = {});

/// Columns k, d_k for k = 1..K-1.
void write_distance_csv(std::ostream& out, const std::vector<double>& distances, const Metadata& meta = {});

/// Columns j, a_j, b_j for j = 0..n+1 (b is blank on the last row).
void write_weights_csv(std::ostream& out, const std::vector<double>& corrector, const std::vector<double>& predictor,
                       const Metadata& meta = {});

}  // namespace sfde
