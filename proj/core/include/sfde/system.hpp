#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sfde {

using State = std::vector<double>;

/// Which closed-form family a model belongs to. Matrix decompositions and
/// Lipschitz-type bounds exist only for the built-in chaotic systems.
enum class SystemKind { custom, linear_test, newton_leipnik, lorenz };

/// Right-hand side of  D^a y = f(t, y) + sigma(t, y) dW/dt  in R^d with d_w noise channels.
///
/// Drift writes d values; diffusion writes a row-major d x d_w matrix. Both must be pure.
class SystemModel {
 public:
  using Drift = std::function<void(double t, std::span<const double> y, std::span<double> out)>;
  using Diffusion = std::function<void(double t, std::span<const double> y, std::span<double> out)>;

  SystemModel(std::string name, SystemKind kind, std::size_t dimension, std::size_t noise_dimension, Drift drift,
              Diffusion diffusion, State y0, std::map<std::string, double> params = {});

  const std::string& name() const noexcept { return name_; }
  SystemKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t noise_dimension() const noexcept { return noise_dimension_; }
  const State& initial_state() const noexcept { return y0_; }
  const std::map<std::string, double>& params() const noexcept { return params_; }
  /// Throws ConfigError if the parameter is absent.
  double param(const std::string& key) const;

  void drift(double t, std::span<const double> y, std::span<double> out) const { drift_(t, y, out); }
  void diffusion(double t, std::span<const double> y, std::span<double> out) const { diffusion_(t, y, out); }

  State drift(double t, std::span<const double> y) const;
  std::vector<double> diffusion(double t, std::span<const double> y) const;

  /// Same dynamics, different initial state.
  SystemModel with_initial_state(State y0) const;

 private:
  std::string name_;
  SystemKind kind_;
  std::size_t dimension_;
  std::size_t noise_dimension_;
  Drift drift_;
  Diffusion diffusion_;
  State y0_;
  std::map<std::string, double> params_;
};

}  // namespace sfde
