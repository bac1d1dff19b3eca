#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "barron_pde/counterexamples.hpp"
#include "barron_pde/parabolic.hpp"

using namespace barron_pde;

namespace {

ShallowRep relu_y1(std::size_t d) {
  std::vector<double> w(d, 0.0);
  w[0] = 1.0;
  return ShallowRep(d, Activation::relu, {Atom{1.0, w, 0.0}});
}

}  // namespace

TEST(Ball, SphereArea) {
  EXPECT_NEAR(sphere_area(2), 2 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(sphere_area(4), 2 * std::numbers::pi * std::numbers::pi, 1e-13);
}

TEST(Ball, CenterValueIsSphereMean) {
  const double x3[3] = {0, 0, 0};
  EXPECT_NEAR(harmonic_ball_extension({3, relu_y1(3), {}}, x3), 0.25, 1e-3);
  // d = 2: mean of max(0, cos) over the circle is 1/pi
  const double x2[2] = {0, 0};
  EXPECT_NEAR(harmonic_ball_extension({2, relu_y1(2), {}}, x2), 1 / std::numbers::pi, 1e-6);
}

TEST(Ball, ReproducesHarmonicBoundaryData) {
  // g(y) = y1 + 0.5 extends to itself
  ShallowRep g(3, Activation::relu, {Atom{1, {1, 0, 0}, 0}, Atom{-1, {-1, 0, 0}, 0}, Atom{0.5, {0, 0, 0}, 1}});
  for (auto x : {std::array<double, 3>{0.3, 0.1, -0.2}, std::array<double, 3>{-0.5, 0.4, 0.3}})
    EXPECT_NEAR(harmonic_ball_extension({3, g, {}}, x), x[0] + 0.5, 1e-6);
  ShallowRep g2(2, Activation::relu, {Atom{1, {1, 0}, 0}, Atom{-1, {-1, 0}, 0}});
  const double p[2] = {0.2, 0.7};
  EXPECT_NEAR(harmonic_ball_extension({2, g2, {}}, p), 0.2, 1e-8);
}

TEST(Ball, HigherDimensionMonteCarlo) {
  BallProblem p{4, relu_y1(4), {}};
  p.quad.mc_samples = 1 << 18;
  const double x[4] = {0, 0, 0, 0};
  // E max(0, y1) = E|y1| / 2 = Gamma(d/2) / (sqrt(pi) Gamma((d+1)/2)) / 2
  const double exact = std::tgamma(2.0) / (std::sqrt(std::numbers::pi) * std::tgamma(2.5)) / 2.0;
  EXPECT_NEAR(harmonic_ball_extension(p, x), exact, 5e-3);
}

TEST(Ball, ReducedSolverAgreesWithPoissonKernel) {
  const ShallowRep G(1, Activation::relu, {Atom{1, {1}, 0}});
  const auto psi = reduced_axisymmetric_solve(G, 3, 200);
  const BallProblem p{3, relu_y1(3), {}};
  for (auto x : {std::array<double, 3>{0, 0, 0}, std::array<double, 3>{0.3, 0.2, 0.1},
                 std::array<double, 3>{-0.4, 0.0, 0.5}, std::array<double, 3>{0.6, -0.3, 0.2}})
    EXPECT_NEAR(reduced_reconstruct(G, psi, x), harmonic_ball_extension(p, x), 1e-3);
}

TEST(Ball, GradientJumpGrowsTowardSphere) {
  const ShallowRep G(1, Activation::relu, {Atom{1, {1}, 0}});
  const auto psi = reduced_axisymmetric_solve(G, 3, 200);
  const double rhos[] = {0.0, 0.5, 0.99};
  const auto j = gradient_jump_probe(G, psi, rhos, 0.01);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_LT(std::abs(j[0].jump), 0.05);
  EXPECT_GT(j[2].jump, 0.3);
}

TEST(Ball, HaltonPointsInsideBall) {
  const auto pts = ball_points(3, 500);
  EXPECT_EQ(pts.size(), 500u);
  for (const auto& p : pts) EXPECT_LT(p[0] * p[0] + p[1] * p[1] + p[2] * p[2], 1.0);
  EXPECT_EQ(ball_points(3, 500)[123], pts[123]);
}

TEST(Ball, RateExperimentSmall) {
  const ShallowRep G(1, Activation::relu, {Atom{1, {1}, 0}});
  HeatOptions ho;
  ho.n_cells = 256;
  const auto control = heat_homogeneous_at_time(relu_y1(3), 0.05, ho);
  BallRateConfig cfg;
  cfg.m_list = {16, 64, 256};
  cfg.n_seeds = 3;
  cfg.n_samples = 2000;
  cfg.grid_n = 100;
  const auto r = ball_rate_experiment(G, 3, cfg, control);
  EXPECT_EQ(r.ball.median_error.size(), 3u);
  EXPECT_LT(r.control.fit.slope, -0.4);
  EXPECT_EQ(r.jumps.size(), 4u);
  EXPECT_THROW(ball_rate_experiment(G, 3, cfg, relu_y1(2)), InvalidArgument);
}

TEST(Corner, HarmonicAndVanishingOnEdges) {
  const CornerSpec s{1, 1.5 * std::numbers::pi};
  EXPECT_NEAR(s.exponent(), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(corner_eval(s, 0.5, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(corner_eval(s, 0.5, s.theta), 0.0, 1e-15);
  EXPECT_LE(corner_harmonic_residual(s, 0.005, 0.25), 1e-3);
  EXPECT_THROW(corner_eval(CornerSpec{0, 1.0}, 0.5, 0.1), InvalidArgument);
}

TEST(Corner, GradientExponent) {
  const CornerSpec s{1, 1.5 * std::numbers::pi};
  std::vector<double> radii;
  for (int k = 1; k <= 8; ++k) radii.push_back(std::pow(2.0, -k));
  EXPECT_NEAR(corner_gradient_exponent(s, radii), -1.0 / 3.0, 1e-6);
  EXPECT_NEAR(corner_gradient_exponent(s, radii, 1e-4), -1.0 / 3.0, 0.05);
  // convex corner: gradient vanishes at the vertex
  EXPECT_GT(corner_gradient_exponent(CornerSpec{1, 0.5 * std::numbers::pi}, radii), 0.0);
  const auto g = corner_grad(s, 0.3, 1.0);
  const double e = 1e-6;
  const double x = 0.3 * std::cos(1.0), y = 0.3 * std::sin(1.0);
  const double gx = (corner_eval(s, std::hypot(x + e, y), polar_angle(x + e, y)) -
                     corner_eval(s, std::hypot(x - e, y), polar_angle(x - e, y))) / (2 * e);
  EXPECT_NEAR(g[0], gx, 1e-6);
}

TEST(Growth, CubicExponent) {
  std::vector<double> radii;
  for (int k = 0; k <= 7; ++k) radii.push_back(std::pow(2.0, k));
  EXPECT_NEAR(growth_diagnostic(radii), 3.0, 0.02);
  // a relu network grows linearly
  const auto lin = relu_y1(3);
  EXPECT_NEAR(growth_exponent([&](std::span<const double> x) { return lin(x); }, 3, radii), 1.0, 0.02);
}

TEST(UShape, LocalRepresentations) {
  const auto u1 = ushape_rep_u1();
  const auto u2 = ushape_rep_u2();
  for (double x1 = 0.05; x1 < 3; x1 += 0.1)
    for (double x2 = 0.05; x2 < 3; x2 += 0.1) {
      if (!in_ushape(x1, x2)) continue;
      const double x[2] = {x1, x2};
      if (x1 < 2) EXPECT_DOUBLE_EQ(u1(x), ushape_eval(x1, x2));
      if (x1 > 1) EXPECT_DOUBLE_EQ(u2(x), ushape_eval(x1, x2));
    }
  EXPECT_FALSE(in_ushape(1.5, 2.0));
  EXPECT_THROW(ushape_eval(1.5, 2.0), InvalidArgument);
}
