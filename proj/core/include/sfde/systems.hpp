#pragma once

#include <array>

#include "sfde/system.hpp"

namespace sfde {

struct NewtonLeipnikParams {
  double beta = 0.4;
  double rho = 0.175;
  double mu = 0.1;  // noise intensity, diffusion diag(mu x, mu y, mu z)
  State y0 = {0.19, 0.0, -0.18};
};

struct LorenzParams {
  double a = 10.0;        // Prandtl number
  double b = 8.0 / 3.0;   // region size
  double c = 28.0;        // Rayleigh number
  double mu = 0.1;        // noise intensity, diffusion diag(mu x^2, mu y^2, mu z^2)
  State y0 = {0.1, 0.1, 0.1};
};

/// D^a x = -beta x + y + 10 y z, D^a y = -x - 0.4 y + 5 x z, D^a z = rho z - 5 x y,
/// each with multiplicative noise mu*state on its own channel.
/// Throws ConfigError for beta <= 0 or rho < 0. rho > 8 is accepted; see rho_in_usual_range().
SystemModel newton_leipnik(const NewtonLeipnikParams& params = {});
bool rho_in_usual_range(double rho) noexcept;

/// D^a x = a(y - x), D^a y = c x - y - x z, D^a z = x y - b z, noise mu*state^2 per channel.
SystemModel lorenz(const LorenzParams& params = {});

/// Scalar D^a y = lambda y + sigma dW/dt with constant (additive) sigma.
/// lambda = 0 gives pure diffusion; lambda = sigma = 0 the zero system.
SystemModel linear_test(double lambda, double sigma, double y0);

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Drift decomposition F(x) = A x + x_i B x + x_j C x used by the bounds below.
/// Newton-Leipnik: i = 2, j = 3 (1-based); Lorenz: i = 1 and C = 0.
struct MatrixForm {
  Matrix3 A{};
  Matrix3 B{};
  Matrix3 C{};
  std::size_t b_coordinate = 0;  // 0-based index of the state entry multiplying B
  std::size_t c_coordinate = 0;  // 0-based index of the state entry multiplying C
};

/// Throws ConfigError for models other than newton_leipnik / lorenz.
MatrixForm matrix_form(const SystemModel& model);

/// Drift evaluated through the matrix decomposition.
State matrix_form_drift(const MatrixForm& form, std::span<const double> y);

/// max_i |f_i(y) - F_i(y)| between componentwise drift and matrix decomposition.
double matrix_form_check(const SystemModel& model, std::span<const double> y);

double frobenius_norm_squared(const Matrix3& m) noexcept;

/// Newton-Leipnik: K1 = |A|^2 + (|B|^2 + |C|^2)(2|x0|^2 + delta) + 3 mu
/// Lorenz:         K2 = |A|^2 + (|B|^2 + 3 mu)(2|x0|^2 + delta)
/// with Frobenius matrix norms and x0 the model's initial state.
double lipschitz_bound(const SystemModel& model, double delta);

}  // namespace sfde
