#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "barron_pde/oracles.hpp"
#include "barron_pde/parabolic.hpp"

using namespace barron_pde;

namespace {

// E sigma(mu + s Z) by adaptive quadrature against the normal density
double gaussian_expectation(Activation act, double mu, double s) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto f = [&](double z) { return sigma(act, mu + s * z) * normal_pdf(z); };
  const double kink = s > 0 ? -mu / s : 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  return GK::integrate(f, -inf, kink, 15, 1e-13) + GK::integrate(f, kink, inf, 15, 1e-13);
}

ShallowRep random_rep(std::size_t d, std::size_t m, Activation act, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < m; ++i) {
    Atom at{u(rng), std::vector<double>(d), u(rng)};
    for (double& v : at.w) v = n(rng);
    atoms.push_back(at);
  }
  return ShallowRep(d, act, atoms);
}

}  // namespace

TEST(Heat, ReluClosedFormMatchesQuadrature) {
  const Atom at{0.8, {1.0, -2.0}, 0.3};
  for (double t : {0.01, 0.5, 2.0}) {
    const double x[2] = {0.4, 0.1};
    const double mu = dot(at.w, x) + at.b, s = std::sqrt(2 * t) * euclidean_norm(at.w);
    EXPECT_NEAR(relu_heat_closed_form(at, t, x), at.a * gaussian_expectation(Activation::relu, mu, s), 1e-12);
  }
  const double x[2] = {1.0, 0.0};
  EXPECT_DOUBLE_EQ(relu_heat_closed_form(at, 0.0, x), 0.8 * (1.0 + 0.3));
}

TEST(Heat, ClosedFormWithinMonteCarloError) {
  const Atom at{-1.1, {0.5, 0.9, -0.3}, -0.2};
  const double x[3] = {0.3, 0.2, -0.7};
  const auto mc = oracle::mc_heat_atom(Activation::relu, at, 0.7, x, 200000, 5);
  EXPECT_LE(std::abs(mc.mean - relu_heat_closed_form(at, 0.7, x)), 4.0 * mc.std_error);
}

TEST(Heat, HermiteSpacetimeForSmoothActivation) {
  // Gauss-Hermite is accurate for tanh only while sqrt(2t)|w| stays near 1
  const auto raw = random_rep(2, 4, Activation::tanh, 8);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto at = raw.atom(i);
    const double nw = euclidean_norm(at.w);
    for (double& v : at.w) v *= 0.7 / nw;
    atoms.push_back(at);
  }
  const ShallowRep u0(2, Activation::tanh, atoms);
  const auto st = heat_homogeneous_spacetime(u0, 40);
  EXPECT_EQ(st.tau_index, 2u);
  for (double t : {0.1, 0.5, 1.0}) {
    const double x[2] = {0.2, -0.6};
    double ref = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i)
      ref += u0.a(i) * gaussian_expectation(Activation::tanh, dot(u0.w(i), x) + u0.b(i),
                                            std::sqrt(2 * t) * euclidean_norm(u0.w(i)));
    EXPECT_NEAR(st(t, x), ref, 1e-7);
  }
}

TEST(Heat, ReluSpacetimeAgainstClosedForm) {
  const auto u0 = random_rep(2, 3, Activation::relu, 9);
  const auto st = heat_homogeneous_spacetime(u0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1), tt(0, 1);
  for (int k = 0; k < 30; ++k) {
    const double t = tt(rng);
    const double x[2] = {u(rng), u(rng)};
    double ref = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i) ref += relu_heat_closed_form(u0.atom(i), t, x);
    EXPECT_NEAR(st(t, x), ref, heat_quadrature_tolerance(u0, t));
  }
}

TEST(Heat, CertificatesWithinBounds) {
  const auto u0 = random_rep(3, 6, Activation::relu, 10);
  const double n0 = u0.norm_cert();
  const auto st = heat_homogeneous_spacetime(u0);
  EXPECT_LE(st.rep.norm_cert(), heat_spacetime_bound(n0) * (1 + 1e-6));
  for (double t : {0.1, 1.0, 4.0}) {
    const auto ut = heat_homogeneous_at_time(u0, t);
    EXPECT_LE(ut.norm_cert(), heat_fixed_time_bound(n0, t) * (1 + 1e-6));
    EXPECT_LE(ut.norm_cert(), heat_fixed_time_sharp_bound(u0, t) * (1 + 1e-6));
  }
}

TEST(Heat, InhomogeneousCertificateWithinPolynomial) {
  const auto f = random_rep(2, 5, Activation::relu, 12);
  for (double t : {0.5, 1.0, 2.0}) {
    const auto u = heat_inhomogeneous_at_time(f, t);
    EXPECT_LE(u.norm_cert(), duhamel_polynomial(t) * f.norm_cert() * (1 + 1e-3)) << "t " << t;
  }
  EXPECT_DOUBLE_EQ(duhamel_polynomial(1.0), 1 + 2.0 / 3 + 0.5 + 0.4);
}

TEST(Heat, DuhamelMatchesCrankNicolson) {
  ShallowRep f(2, Activation::relu, {Atom{1.0, {0.7, 1.3}, -0.2}});
  const double t = 1.0;
  const auto u = heat_inhomogeneous_at_time(f, t);
  auto src = [&](double s, double x) {
    const double p[2] = {s, x};
    return f(p);
  };
  // far field: zero on the left, the ODE solution on the right
  auto bc = [](double s, double x) { return x < 0 ? 0.0 : (1.3 * x - 0.2) * s + 0.7 * s * s / 2; };
  auto zero = [](double) { return 0.0; };
  const auto ref = oracle::richardson(oracle::fd_heat_1d(zero, src, bc, t, -20, 20, 0.01, 0.001),
                                      oracle::fd_heat_1d(zero, src, bc, t, -20, 20, 0.005, 0.0005));
  double err = 0, scale = 0;
  for (double x = -3; x <= 3; x += 0.05) {
    err = std::max(err, std::abs(u(std::span<const double>(&x, 1)) - ref.at(x)));
    scale = std::max(scale, std::abs(ref.at(x)));
  }
  EXPECT_LE(err / scale, 1e-3);
}

TEST(Heat, SemigroupProperty) {
  const auto u0 = random_rep(2, 3, Activation::relu, 14);
  HeatOptions opt;
  opt.n_cells = 256;
  const auto a = heat_homogeneous_at_time(heat_homogeneous_at_time(u0, 0.3, opt), 0.5, opt);
  const auto b = heat_homogeneous_at_time(u0, 0.8, opt);
  const double tol = heat_quadrature_tolerance(u0, 0.3, opt) + heat_quadrature_tolerance(u0, 0.5, opt) +
                     heat_quadrature_tolerance(u0, 0.8, opt);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 50; ++k) {
    const double x[2] = {u(rng), u(rng)};
    EXPECT_LE(std::abs(a(x) - b(x)), 5 * tol);
  }
}

TEST(Heat, SourceSliceFreezesTime) {
  ShallowRep f(2, Activation::relu, {Atom{1.0, {2.0, 1.0}, -1.0}, Atom{1.0, {1.0, 0.0}, -5.0}});
  const auto s = source_slice(f, 0.25);
  EXPECT_EQ(s.input_dim(), 1u);
  for (double x : {-1.0, 0.0, 0.7}) {
    const double p[2] = {0.25, x};
    EXPECT_DOUBLE_EQ(s(std::span<const double>(&x, 1)), f(p));
  }
  EXPECT_EQ(s.size(), 1u);  // the second atom is identically zero at this time
}

TEST(Heat, FullProblemWithSource) {
  HeatProblem p;
  p.u0 = random_rep(1, 2, Activation::relu, 15);
  p.source = random_rep(2, 2, Activation::relu, 16);
  const auto sol = heat_full(p, 0.5);
  ASSERT_TRUE(sol.homogeneous && sol.inhomogeneous);
  const double x = 0.3;
  EXPECT_NEAR(sol.solution(std::span<const double>(&x, 1)),
              (*sol.homogeneous)(std::span<const double>(&x, 1)) + (*sol.inhomogeneous)(std::span<const double>(&x, 1)),
              1e-12);
  EXPECT_LE(sol.hom_cert.ratio, 1 + 1e-6);
  EXPECT_LE(sol.inhom_cert.ratio, 1 + 1e-3);
  p.source = random_rep(3, 1, Activation::relu, 1);
  EXPECT_THROW(heat_full(p, 0.5), DimensionMismatch);
}

TEST(Heat, ResidualOfSpacetimeRep) {
  const auto u0 = random_rep(1, 2, Activation::tanh, 18);
  const auto st = heat_homogeneous_spacetime(u0, 40);
  oracle::GridSpec spec;
  spec.box = {{0.2, 1.0}, {-1.0, 1.0}};
  spec.h = 0.02;
  spec.dt = 0.02;
  auto u = [&](std::span<const double> p) { return st(p[0], p.subspan(1)); };
  const auto r = oracle::residual_check(u, oracle::Operator::heat, spec);
  EXPECT_GT(r.points, 100u);
  EXPECT_LE(r.max_abs, 1e-2);
}
