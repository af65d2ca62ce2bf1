#include "sfde/systems.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfde/error.hpp"

namespace sfde {

SystemModel::SystemModel(std::string name, SystemKind kind, std::size_t dimension, std::size_t noise_dimension,
                         Drift drift, Diffusion diffusion, State y0, std::map<std::string, double> params)
    : name_(std::move(name)),
      kind_(kind),
      dimension_(dimension),
      noise_dimension_(noise_dimension),
      drift_(std::move(drift)),
      diffusion_(std::move(diffusion)),
      y0_(std::move(y0)),
      params_(std::move(params)) {
  if (dimension_ == 0 || noise_dimension_ == 0) throw ConfigError("system: dimensions must be positive");
  if (y0_.size() != dimension_) throw ConfigError("system '" + name_ + "': initial state has wrong dimension");
  if (!drift_ || !diffusion_) throw ConfigError("system '" + name_ + "': drift and diffusion are required");
  for (double v : y0_) {
    if (!std::isfinite(v)) throw ConfigError("system '" + name_ + "': initial state must be finite");
  }
}

double SystemModel::param(const std::string& key) const {
  const auto it = params_.find(key);
  if (it == params_.end()) throw ConfigError("system '" + name_ + "' has no parameter '" + key + "'");
  return it->second;
}

State SystemModel::drift(double t, std::span<const double> y) const {
  State out(dimension_);
  drift_(t, y, out);
  return out;
}

std::vector<double> SystemModel::diffusion(double t, std::span<const double> y) const {
  std::vector<double> out(dimension_ * noise_dimension_);
  diffusion_(t, y, out);
  return out;
}

SystemModel SystemModel::with_initial_state(State y0) const {
  return SystemModel(name_, kind_, dimension_, noise_dimension_, drift_, diffusion_, std::move(y0), params_);
}

bool rho_in_usual_range(double rho) noexcept { return rho >= 0.0 && rho <= 8.0; }

SystemModel newton_leipnik(const NewtonLeipnikParams& p) {
  if (!(p.beta > 0.0)) throw ConfigError("newton_leipnik: beta must be positive");
  if (!(p.rho >= 0.0)) throw ConfigError("newton_leipnik: rho must be non-negative");
  if (!std::isfinite(p.mu)) throw ConfigError("newton_leipnik: mu must be finite");
  const double beta = p.beta;
  const double rho = p.rho;
  const double mu = p.mu;
  auto drift = [beta, rho](double, std::span<const double> s, std::span<double> out) {
    const double x = s[0], y = s[1], z = s[2];
    out[0] = -beta * x + y + 10.0 * y * z;
    out[1] = -x - 0.4 * y + 5.0 * x * z;
    out[2] = rho * z - 5.0 * x * y;
  };
  auto diffusion = [mu](double, std::span<const double> s, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = mu * s[0];
    out[4] = mu * s[1];
    out[8] = mu * s[2];
  };
  return SystemModel("newton_leipnik", SystemKind::newton_leipnik, 3, 3, drift, diffusion, p.y0,
                     {{"beta", beta}, {"rho", rho}, {"mu", mu}});
}

SystemModel lorenz(const LorenzParams& p) {
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c) || !std::isfinite(p.mu)) {
    throw ConfigError("lorenz: parameters must be finite");
  }
  const double a = p.a, b = p.b, c = p.c, mu = p.mu;
  auto drift = [a, b, c](double, std::span<const double> s, std::span<double> out) {
    const double x = s[0], y = s[1], z = s[2];
    out[0] = a * (y - x);
    out[1] = c * x - y - x * z;
    out[2] = x * y - b * z;
  };
  auto diffusion = [mu](double, std::span<const double> s, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = mu * s[0] * s[0];
    out[4] = mu * s[1] * s[1];
    out[8] = mu * s[2] * s[2];
  };
  return SystemModel("lorenz", SystemKind::lorenz, 3, 3, drift, diffusion, p.y0,
                     {{"a", a}, {"b", b}, {"c", c}, {"mu", mu}});
}

SystemModel linear_test(double lambda, double sigma, double y0) {
  if (!std::isfinite(lambda) || !std::isfinite(sigma)) throw ConfigError("linear_test: parameters must be finite");
  auto drift = [lambda](double, std::span<const double> s, std::span<double> out) { out[0] = lambda * s[0]; };
  auto diffusion = [sigma](double, std::span<const double>, std::span<double> out) { out[0] = sigma; };
  return SystemModel("linear_test", SystemKind::linear_test, 1, 1, drift, diffusion, {y0},
                     {{"lambda", lambda}, {"sigma", sigma}});
}

MatrixForm matrix_form(const SystemModel& model) {
  MatrixForm form;
  switch (model.kind()) {
    case SystemKind::newton_leipnik: {
      const double beta = model.param("beta");
      const double rho = model.param("rho");
      form.A = {{{-beta, 1.0, 0.0}, {-1.0, -0.4, 0.0}, {0.0, 0.0, rho}}};
      // -5 reproduces the -5xy term of the third equation.
      form.B = {{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {-5.0, 0.0, 0.0}}};
      form.C = {{{0.0, 10.0, 0.0}, {5.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
      form.b_coordinate = 1;
      form.c_coordinate = 2;
      return form;
    }
    case SystemKind::lorenz: {
      const double a = model.param("a");
      const double b = model.param("b");
      const double c = model.param("c");
      form.A = {{{-a, a, 0.0}, {c, -1.0, 0.0}, {0.0, 0.0, -b}}};
      form.B = {{{0.0, 0.0, 0.0}, {0.0, 0.0, -1.0}, {0.0, 1.0, 0.0}}};
      form.b_coordinate = 0;
      form.c_coordinate = 0;
      return form;
    }
    default:
      throw ConfigError("matrix form is only defined for newton_leipnik and lorenz, not '" + model.name() + "'");
  }
}

State matrix_form_drift(const MatrixForm& form, std::span<const double> y) {
  State out(3, 0.0);
  const double xb = y[form.b_coordinate];
  const double xc = y[form.c_coordinate];
  for (std::size_t i = 0; i < 3; ++i) {
    double ax = 0.0, bx = 0.0, cx = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      ax += form.A[i][j] * y[j];
      bx += form.B[i][j] * y[j];
      cx += form.C[i][j] * y[j];
    }
    out[i] = ax + xb * bx + xc * cx;
  }
  return out;
}

double matrix_form_check(const SystemModel& model, std::span<const double> y) {
  const MatrixForm form = matrix_form(model);
  if (y.size() != 3) throw ConfigError("matrix_form_check: state must be three-dimensional");
  const State direct = model.drift(0.0, y);
  const State split = matrix_form_drift(form, y);
  double residual = 0.0;
  for (std::size_t i = 0; i < 3; ++i) residual = std::max(residual, std::abs(direct[i] - split[i]));
  return residual;
}

double frobenius_norm_squared(const Matrix3& m) noexcept {
  double sum = 0.0;
  for (const auto& row : m)
    for (double v : row) sum += v * v;
  return sum;
}

double lipschitz_bound(const SystemModel& model, double delta) {
  if (!(delta >= 0.0)) throw ConfigError("lipschitz_bound: delta must be non-negative");
  const MatrixForm form = matrix_form(model);
  const double mu = model.param("mu");
  double x0_sq = 0.0;
  for (double v : model.initial_state()) x0_sq += v * v;
  const double radius_term = 2.0 * x0_sq + delta;
  const double a_sq = frobenius_norm_squared(form.A);
  const double b_sq = frobenius_norm_squared(form.B);
  if (model.kind() == SystemKind::newton_leipnik) {
    return a_sq + (b_sq + frobenius_norm_squared(form.C)) * radius_term + 3.0 * mu;
  }
  return a_sq + (b_sq + 3.0 * mu) * radius_term;
}

}  // namespace sfde
