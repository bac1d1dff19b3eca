#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "barron_pde/experiments.hpp"
#include "barron_pde/oracles.hpp"
#include "barron_pde/parabolic.hpp"

using namespace barron_pde;

TEST(Tridiagonal, MatchesDenseSolve) {
  const std::size_t n = 12;
  std::vector<double> diag(n), rhs(n);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(3, 4);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = u(rng);
    rhs[i] = u(rng) - 3.5;
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    A(i, i) = diag[i];
    if (i > 0) A(i, i - 1) = -1.0;
    if (i + 1 < n) A(i, i + 1) = -0.5;
  }
  const Eigen::VectorXd ref = A.lu().solve(Eigen::Map<Eigen::VectorXd>(rhs.data(), n));
  const auto x = oracle::solve_tridiagonal(-1.0, diag, -0.5, rhs);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref(i), 1e-13);
}

TEST(FdScreened, SecondOrderWithRichardsonGain) {
  // source sin(s) with |w| = 1, lambda = 1: phi = sin(s)/2
  auto src = [](double s) { return std::sin(s); };
  auto err = [](const oracle::Grid1D& g) {
    double e = 0;
    for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(g.values[i] - std::sin(g.x(i)) / 2));
    return e;
  };
  const double lo = -std::numbers::pi * 4, hi = std::numbers::pi * 4;
  const double h = (hi - lo) / 400;
  const auto c = oracle::fd_screened_1d(src, 1.0, 1.0, lo, hi, h);
  const auto f = oracle::fd_screened_1d(src, 1.0, 1.0, lo, hi, h / 2);
  EXPECT_NEAR(err(c) / err(f), 4.0, 0.2);
  EXPECT_LT(err(oracle::richardson(c, f)), err(f) / 50);
  EXPECT_THROW(oracle::fd_screened_1d(src, 1.0, 1.0, 0.0, 1.0, 0.3), InvalidArgument);
}

TEST(FdHeat, GaussianModeDecays) {
  auto u0 = [](double x) { return std::sin(x); };
  auto bc = [](double t, double x) { return std::exp(-t) * std::sin(x); };
  const auto g = oracle::fd_heat_1d(u0, nullptr, bc, 1.0, -6.0, 6.0, 0.01, 0.005);
  for (std::size_t i = 0; i < g.size(); i += 50) EXPECT_NEAR(g.values[i], std::exp(-1.0) * std::sin(g.x(i)), 1e-5);
}

TEST(FdHeat, ReluDataAgainstClosedForm) {
  const Atom at{1.0, {1.0}, 0.0};
  auto u0 = [](double x) { return std::max(x, 0.0); };
  auto bc = [](double t, double x) { return x < 0 ? 0.0 : x; };
  const auto g = oracle::fd_heat_1d(u0, nullptr, bc, 0.5, -15, 15, 0.01, 0.001);
  for (double x = -2; x <= 2; x += 0.25)
    EXPECT_NEAR(g.at(x), relu_heat_closed_form(at, 0.5, std::span<const double>(&x, 1)), 2e-5);
}

TEST(FdColeHopf, AgreesWithDirectScheme) {
  auto u0 = [](double x) { return std::tanh(2 * x); };
  const auto ch = oracle::fd_cole_hopf_1d(u0, 0.3, -8, 8, 0.02, 0.001);
  const auto direct = oracle::fd_hj_direct_1d(u0, 0.3, -8, 8, 0.02);
  for (double x = -3; x <= 3; x += 0.1) EXPECT_NEAR(ch.at(x), direct.at(x), 1e-3);
}

TEST(MonteCarlo, StandardErrorShrinks) {
  const Atom at{1.0, {1.0}, 0.0};
  const double x = 0.1;
  const auto a = oracle::mc_heat_atom(Activation::relu, at, 1.0, std::span<const double>(&x, 1), 10000, 1);
  const auto b = oracle::mc_heat_atom(Activation::relu, at, 1.0, std::span<const double>(&x, 1), 160000, 1);
  EXPECT_NEAR(a.std_error / b.std_error, 4.0, 0.3);
}

TEST(ResidualCheck, ExactSolutionsPass) {
  oracle::GridSpec spec;
  spec.box = {{-1, 1}, {-1, 1}};
  spec.h = 0.05;
  spec.lambda = 2.0;
  // u = sin(x) cos(y): (-Delta + 4) u = 6 u
  auto u = [](std::span<const double> p) { return std::sin(p[0]) * std::cos(p[1]); };
  spec.source = [&](std::span<const double> p) { return 6.0 * u(p); };
  EXPECT_LE(oracle::residual_check(u, oracle::Operator::screened, spec).max_abs, 2e-3);
  spec.source = nullptr;
  EXPECT_GT(oracle::residual_check(u, oracle::Operator::screened, spec).max_abs, 1.0);

  // heat: e^{-t} sin x; hj: Cole-Hopf of e^{-t} sin x + 2
  oracle::GridSpec ts;
  ts.box = {{0.1, 1}, {-1, 1}};
  ts.h = 0.01;
  ts.dt = 0.01;
  auto heat = [](std::span<const double> p) { return std::exp(-p[0]) * std::sin(p[1]); };
  EXPECT_LE(oracle::residual_check(heat, oracle::Operator::heat, ts).max_abs, 1e-4);
  auto hj = [](std::span<const double> p) { return -std::log(2.0 + std::exp(-p[0]) * std::sin(p[1])); };
  EXPECT_LE(oracle::residual_check(hj, oracle::Operator::hj, ts).max_abs, 1e-4);
  ts.skip = [](std::span<const double> p) { return p[1] > 0; };
  const auto part = oracle::residual_check(heat, oracle::Operator::heat, ts);
  EXPECT_LT(part.points, 91u * 201u);
}

TEST(Experiments, LogLogFitRecoversPowerLaw) {
  const std::vector<double> x{1, 2, 4, 8, 16}, y{3, 3 / std::sqrt(2.0), 1.5, 3 / std::sqrt(8.0), 0.75};
  const auto f = fit_loglog(x, y);
  EXPECT_NEAR(f.slope, -0.5, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
  EXPECT_THROW(fit_loglog(std::vector<double>{1, 1}, std::vector<double>{1, 2}), InvalidArgument);
}

TEST(Experiments, Median) {
  EXPECT_EQ(median({3, 1, 2}), 2);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_THROW(median({}), InvalidArgument);
}

TEST(Experiments, RateExperimentBoundAndSlope) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n;
  std::vector<Atom> atoms;
  for (int i = 0; i < 300; ++i) atoms.push_back(Atom{n(rng), {n(rng), n(rng)}, n(rng)});
  ShallowRep rep(2, Activation::relu, atoms);
  RateConfig cfg;
  cfg.m_list = {16, 64, 256};
  cfg.n_seeds = 10;
  cfg.n_eval = 500;
  const auto r = rate_experiment(rep, cfg);
  EXPECT_TRUE(r.bound_holds);
  EXPECT_LT(r.fit.slope, -0.35);
  EXPECT_EQ(r.seeds.size(), 10u);
  const auto again = rate_experiment(rep, cfg);
  EXPECT_EQ(r.median_error, again.median_error);
}

TEST(Experiments, TwoLayerFitReducesError) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (int i = 0; i < 400; ++i) {
    x.push_back({u(rng), u(rng)});
    y.push_back(std::sin(2 * x.back()[0]) * x.back()[1]);
  }
  const auto small = fit_two_layer(x, y, 8, 1e-8, 1);
  const auto big = fit_two_layer(x, y, 128, 1e-8, 1);
  EXPECT_LT(big.l2_error, small.l2_error);
  EXPECT_LT(big.l2_error, 0.05);
  EXPECT_EQ(big.rep.size(), 128u);
  EXPECT_THROW(fit_two_layer(x, y, 8, 0.0, 1), InvalidArgument);
}
