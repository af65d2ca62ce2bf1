#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "sfde/error.hpp"
#include "sfde/export.hpp"
#include "sfde/solver.hpp"
#include "sfde/special_functions.hpp"
#include "sfde/systems.hpp"
#include "test_support.hpp"

namespace {

using namespace sfde;
using sfde::testing::scalar_model;

SolverConfig make_config(double alpha, double T, double h, bool stochastic = false) {
  SolverConfig cfg;
  cfg.alpha = alpha;
  cfg.grid = TimeGrid::make(T, h);
  cfg.stochastic = stochastic;
  return cfg;
}

TEST(Solver, ZeroSystemStaysAtInitialState) {
  const auto zero = linear_test(0.0, 0.0, 2.5);
  auto cfg = make_config(0.7, 1.0, 0.01, true);
  const auto path = generate_path(1, 0, cfg.grid, 1);
  for (const auto& y : {solve(zero, cfg, path), solve(zero, make_config(0.3, 1.0, 0.01))}) {
    for (std::size_t n = 0; n < y.node_count(); ++n) ASSERT_EQ(y.at(n)[0], 2.5);
  }
}

TEST(Solver, PredictorIsRectangleRuleAtAlphaOne) {
  const auto model = linear_test(-1.0, 0.0, 1.0);
  const auto cfg = make_config(1.0, 1.0, 0.05);
  PredictorCorrector stepper(model, cfg, nullptr);
  for (int step = 0; step < 12; ++step) stepper.advance();
  const auto& y = stepper.trajectory();
  double euler = 1.0;
  for (std::size_t j = 0; j < stepper.computed(); ++j) euler += cfg.grid.step() * (-y.at(j)[0]);
  EXPECT_NEAR(stepper.predict()[0], euler, 1e-14);
}

TEST(Solver, CorrectorIsTrapezoidRuleAtAlphaOne) {
  const auto model = linear_test(-1.0, 0.0, 1.0);
  const auto cfg = make_config(1.0, 1.0, 0.05);
  PredictorCorrector stepper(model, cfg, nullptr);
  for (int step = 0; step < 7; ++step) stepper.advance();
  const auto& y = stepper.trajectory();
  const std::size_t n = stepper.computed() - 1;
  const State yp = stepper.predict();
  const double h = cfg.grid.step();
  double trap = -yp[0] - y.at(0)[0];
  for (std::size_t j = 1; j <= n; ++j) trap += 2.0 * (-y.at(j)[0]);
  EXPECT_NEAR(stepper.correct(yp)[0], 1.0 + h / 2.0 * trap, 1e-14);
}

TEST(Solver, FirstPredictorWithConstantDiffusion) {
  const double sigma0 = 0.7, alpha = 0.8, y0 = 0.3;
  const auto model = linear_test(0.0, sigma0, y0);
  const auto cfg = make_config(alpha, 1.0, 0.01, true);
  const auto path = generate_path(9, 0, cfg.grid, 1);
  PredictorCorrector stepper(model, cfg, &path);
  const double h = cfg.grid.step();
  const double expected =
      y0 + 1.0 / (std::tgamma(alpha) * h) * (std::pow(h, alpha) / alpha) * sigma0 * path.increment(0, 0);
  EXPECT_NEAR(stepper.predict()[0], expected, 1e-14);
}

TEST(Solver, NewtonLeipnikFirstStepConsistent) {
  const auto model = newton_leipnik({.mu = 0.0});
  const auto cfg = make_config(0.93, 1.0, 0.005);
  PredictorCorrector stepper(model, cfg, nullptr);
  stepper.advance();
  const State f0 = model.drift(0.0, model.initial_state());
  const double fnorm = std::sqrt(f0[0] * f0[0] + f0[1] * f0[1] + f0[2] * f0[2]);
  const auto y1 = stepper.trajectory().at(1);
  double dist = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_TRUE(std::isfinite(y1[i]));
    dist += (y1[i] - model.initial_state()[i]) * (y1[i] - model.initial_state()[i]);
  }
  EXPECT_LE(std::sqrt(dist), 10.0 * cfg.grid.step() * fnorm);
}

TEST(Solver, MittagLefflerOracle) {
  const double alpha = 0.8;
  const auto y = solve(linear_test(-1.0, 0.0, 1.0), make_config(alpha, 1.0, 1.0 / 200));
  EXPECT_NEAR(y.terminal()[0], mittag_leffler(alpha, -1.0), 1e-3);
  double max_err = 0.0;
  for (std::size_t n = 0; n < y.node_count(); ++n) {
    const double t = y.grid().time(n);
    max_err = std::max(max_err, std::abs(y.at(n)[0] - mittag_leffler(alpha, -std::pow(t, alpha))));
  }
  EXPECT_LE(max_err, 1e-3);
}

TEST(Solver, ClassicalLimit) {
  const auto y = solve(linear_test(-1.0, 0.0, 1.0), make_config(1.0, 1.0, 0.01));
  EXPECT_NEAR(y.terminal()[0], std::exp(-1.0), 1e-4);
}

// Classical PECE with full-history rectangle predictor and trapezoid corrector, coded directly.
TEST(Solver, MatchesClassicalSchemeAtAlphaOne) {
  const auto f = [](double t, double y) { return -2.0 * y + 1.0 + 0.5 * t; };
  const auto model = scalar_model(f, [](double, double) { return 0.0; }, 0.4);
  const auto cfg = make_config(1.0, 2.0, 1.0 / 128);
  const auto y = solve(model, cfg);
  const double h = cfg.grid.step();
  std::vector<double> ref{0.4};
  std::vector<double> fh{f(0.0, 0.4)};
  for (std::size_t n = 0; n + 1 < cfg.grid.node_count(); ++n) {
    double rect = 0.0;
    for (double v : fh) rect += h * v;
    const double yp = 0.4 + rect;
    double trap = fh[0];
    for (std::size_t j = 1; j <= n; ++j) trap += 2.0 * fh[j];
    trap += f(cfg.grid.time(n + 1), yp);
    ref.push_back(0.4 + h / 2.0 * trap);
    fh.push_back(f(cfg.grid.time(n + 1), ref.back()));
  }
  for (std::size_t n = 0; n < ref.size(); ++n) ASSERT_NEAR(y.at(n)[0], ref[n], 1e-12) << n;
}

TEST(Solver, DeterministicOrderAtLeastOne) {
  const double alpha = 0.8;
  std::vector<double> err;
  for (int N : {50, 100, 200}) {
    const auto y = solve(linear_test(-1.0, 0.0, 1.0), make_config(alpha, 1.0, 1.0 / N));
    double e = 0.0;
    for (std::size_t n = 0; n < y.node_count(); ++n) {
      e = std::max(e, std::abs(y.at(n)[0] - mittag_leffler(alpha, -std::pow(y.grid().time(n), alpha))));
    }
    err.push_back(e);
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 1.0);
  EXPECT_GE(std::log2(err[1] / err[2]), 1.0);
}

TEST(Solver, NoiseOffIgnoresPath) {
  const auto model = newton_leipnik({.mu = 0.0});
  const auto cfg = make_config(0.93, 2.0, 0.01, true);
  const auto a = solve(model, cfg, generate_path(1, 0, cfg.grid, 3));
  const auto b = solve(model, cfg, generate_path(2, 5, cfg.grid, 3));
  EXPECT_EQ(a, b);
}

TEST(Solver, SeedDeterminism) {
  const auto model = lorenz({.mu = 0.01});
  const auto cfg = make_config(0.99, 2.0, 0.005, true);
  const auto a = solve(model, cfg, generate_path(77, 3, cfg.grid, 3));
  const auto b = solve(model, cfg, generate_path(77, 3, cfg.grid, 3));
  EXPECT_EQ(a, b);
  const auto c = solve(model, cfg, generate_path(77, 4, cfg.grid, 3));
  EXPECT_NE(a, c);
}

TEST(Solver, LiteralNoiseModeUsesCurrentIncrementOnly) {
  // With constant diffusion the literal history sum is (sum of weights) * dW_n.
  const double alpha = 0.9, sigma0 = 1.0;
  const auto model = linear_test(0.0, sigma0, 0.0);
  auto cfg = make_config(alpha, 1.0, 0.1, true);
  cfg.noise_history = NoiseHistory::paper_literal_last_increment;
  const auto path = generate_path(4, 0, cfg.grid, 1);
  PredictorCorrector stepper(model, cfg, &path);
  for (int i = 0; i < 4; ++i) stepper.advance();
  const std::size_t n = stepper.computed() - 1;
  const auto b = predictor_weights(n, alpha, cfg.grid.step());
  double bsum = 0.0;
  for (double w : b) bsum += w;
  const double expected = bsum * path.increment(0, n) / (std::tgamma(alpha) * cfg.grid.step());
  EXPECT_NEAR(stepper.predict()[0], expected, 1e-13);
}

TEST(Solver, DivergenceIsReported) {
  auto cfg = make_config(0.9, 5.0, 0.01);
  cfg.blowup_bound = 1e3;
  try {
    solve(linear_test(5.0, 0.0, 1.0), cfg);
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.node(), 0u);
  }
  const auto nan_model = scalar_model(
      [](double t, double) { return t > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 0.0; },
      [](double, double) { return 0.0; }, 1.0);
  EXPECT_THROW(solve(nan_model, make_config(0.9, 1.0, 0.01)), DivergenceError);
}

TEST(Solver, ConfigValidation) {
  const auto model = linear_test(-1.0, 1.0, 1.0);
  auto cfg = make_config(0.3, 1.0, 0.01, true);
  const auto path = generate_path(1, 0, cfg.grid, 1);
  EXPECT_THROW(solve(model, cfg, path), ConfigError);
  EXPECT_NO_THROW(solve(model, make_config(0.3, 1.0, 0.01)));
  EXPECT_THROW(solve(model, make_config(0.0, 1.0, 0.01)), ConfigError);
  EXPECT_THROW(solve(model, make_config(1.2, 1.0, 0.01)), ConfigError);
  EXPECT_THROW(solve(model, make_config(0.8, 1.0, 0.01, true)), ConfigError);
  EXPECT_THROW(solve(model, make_config(0.8, 1.0, 0.01), path), ConfigError);
  const auto other_grid = generate_path(1, 0, TimeGrid::make(1.0, 0.02), 1);
  EXPECT_THROW(solve(model, make_config(0.8, 1.0, 0.01, true), other_grid), ConfigError);
  const auto three = generate_path(1, 0, TimeGrid::make(1.0, 0.01), 3);
  EXPECT_THROW(solve(model, make_config(0.8, 1.0, 0.01, true), three), ConfigError);
}

TEST(Solver, TrajectoryCsv) {
  const auto y = solve(lorenz({.mu = 0.0}), make_config(0.88, 1.0, 0.5));
  std::ostringstream out;
  write_trajectory_csv(out, y, {{"system", "lorenz"}});
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("# system=lorenz\nt,y1,y2,y3\n0,0.10000000000000001,", 0), 0u);
  std::istringstream in(text);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) rows += line.starts_with('#') ? 0 : 1;
  EXPECT_EQ(rows, 4);
}

}  // namespace
