#include "sfde/weights.hpp"

#include <cmath>
#include <string>

#include "sfde/error.hpp"

namespace sfde {

namespace {

double predictor_kernel(std::size_t k, double alpha) {
  const double kk = static_cast<double>(k);
  return std::pow(kk + 1.0, alpha) - std::pow(kk, alpha);
}

double corrector_first(std::size_t n, double alpha) {
  const double nn = static_cast<double>(n);
  return std::pow(nn, alpha + 1.0) - (nn - alpha) * std::pow(nn + 1.0, alpha);
}

double corrector_interior(std::size_t k, double alpha, WeightMode mode) {
  const double kk = static_cast<double>(k);
  const double p = alpha + 1.0;
  const double outer = std::pow(kk + 2.0, p);
  const double inner = std::pow(kk, p);
  const double middle = 2.0 * std::pow(kk + 1.0, p);
  return mode == WeightMode::standard ? outer + inner - middle : outer - inner - middle;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("weights: alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

}  // namespace

std::string_view to_string(WeightMode mode) noexcept {
  return mode == WeightMode::standard ? "standard" : "paper_literal";
}

WeightMode parse_weight_mode(std::string_view name) {
  if (name == "standard") return WeightMode::standard;
  if (name == "paper_literal") return WeightMode::paper_literal;
  throw ConfigError("unknown weight mode '" + std::string(name) + "' (expected standard or paper_literal)");
}

std::vector<double> corrector_weights(std::size_t n, double alpha, WeightMode mode) {
  check_alpha(alpha);
  std::vector<double> a(n + 2);
  a[0] = corrector_first(n, alpha);
  for (std::size_t j = 1; j <= n; ++j) a[j] = corrector_interior(n - j, alpha, mode);
  a[n + 1] = 1.0;
  return a;
}

std::vector<double> predictor_weights(std::size_t n, double alpha, double h) {
  check_alpha(alpha);
  if (!(h > 0.0)) throw ConfigError("weights: step h must be positive");
  const double scale = std::pow(h, alpha) / alpha;
  std::vector<double> b(n + 1);
  for (std::size_t j = 0; j <= n; ++j) b[j] = scale * predictor_kernel(n - j, alpha);
  return b;
}

WeightTable::WeightTable(double alpha, double h, std::size_t max_n, WeightMode mode) : alpha_(alpha) {
  check_alpha(alpha);
  if (!(h > 0.0)) throw ConfigError("weights: step h must be positive");
  const double scale = std::pow(h, alpha) / alpha;
  predictor_.resize(max_n + 1);
  corrector_interior_.resize(max_n + 1);
  corrector_first_.resize(max_n + 1);
  for (std::size_t k = 0; k <= max_n; ++k) {
    predictor_[k] = scale * predictor_kernel(k, alpha);
    corrector_interior_[k] = corrector_interior(k, alpha, mode);
    corrector_first_[k] = corrector_first(k, alpha);
  }
}

}  // namespace sfde
