#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace sfde {

/// Interior corrector weight variant.
///   standard:      (k+2)^{a+1} + k^{a+1} - 2(k+1)^{a+1}
///   paper_literal: (k+2)^{a+1} - k^{a+1} - 2(k+1)^{a+1}
/// with k = n - j. Only `standard` reduces to the trapezoid rule at a = 1.
enum class WeightMode { standard, paper_literal };

std::string_view to_string(WeightMode mode) noexcept;
/// Throws ConfigError for unknown names.
WeightMode parse_weight_mode(std::string_view name);

/// Corrector weights a_{j,n+1}, j = 0..n+1 (the last entry is 1).
std::vector<double> corrector_weights(std::size_t n, double alpha, WeightMode mode);

/// Predictor weights b_{j,n+1} = (h^a/a)[(n+1-j)^a - (n-j)^a], j = 0..n.
std::vector<double> predictor_weights(std::size_t n, double alpha, double h);

/// Weight lookup for every step of a run up to `max_n`. Interior weights depend on n - j
/// only, so the table stores one O(max_n) sequence per family; every value is bitwise
/// identical to the corresponding corrector_weights()/predictor_weights() entry.
class WeightTable {
 public:
  WeightTable(double alpha, double h, std::size_t max_n, WeightMode mode);

  double predictor(std::size_t n, std::size_t j) const noexcept { return predictor_[n - j]; }

  double corrector(std::size_t n, std::size_t j) const noexcept {
    if (j == 0) return corrector_first_[n];
    if (j == n + 1) return 1.0;
    return corrector_interior_[n - j];
  }

  double alpha() const noexcept { return alpha_; }
  std::size_t max_n() const noexcept { return corrector_first_.size() - 1; }

 private:
  double alpha_;
  std::vector<double> predictor_;           // indexed by k = n - j
  std::vector<double> corrector_interior_;  // indexed by k = n - j, 1 <= j <= n
  std::vector<double> corrector_first_;     // indexed by n
};

}  // namespace sfde
