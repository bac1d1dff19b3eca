#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "barron_pde/composition.hpp"
#include "barron_pde/network.hpp"
#include "barron_pde/parallel.hpp"

using namespace barron_pde;

namespace {

ShallowRep random_rep(std::size_t d, std::size_t m, Activation act, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < m; ++i) {
    Atom at{n(rng), std::vector<double>(d), n(rng)};
    for (double& v : at.w) v = n(rng);
    atoms.push_back(at);
  }
  return ShallowRep(d, act, atoms);
}

}  // namespace

TEST(Activation, ValuesAndDerivatives) {
  EXPECT_EQ(sigma(Activation::relu, -1.0), 0.0);
  EXPECT_EQ(sigma(Activation::relu, 2.5), 2.5);
  EXPECT_NEAR(sigma(Activation::softplus, 0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(sigma(Activation::softplus, 800.0), 800.0, 1e-12);
  EXPECT_EQ(sigma(Activation::softplus, -800.0), 0.0);
  for (auto act : {Activation::tanh, Activation::softplus}) {
    for (double s : {-2.0, -0.3, 0.0, 0.7, 3.0}) {
      const double h = 1e-5;
      EXPECT_NEAR(sigma_prime(act, s), (sigma(act, s + h) - sigma(act, s - h)) / (2 * h), 1e-8);
      EXPECT_NEAR(sigma_second(act, s), (sigma_prime(act, s + h) - sigma_prime(act, s - h)) / (2 * h), 1e-8);
    }
  }
  EXPECT_FALSE(has_second_derivative(Activation::relu));
  EXPECT_THROW(sigma_second(Activation::relu, 1.0), InvalidArgument);
}

TEST(Activation, NameRoundTrip) {
  for (auto act : {Activation::relu, Activation::tanh, Activation::softplus})
    EXPECT_EQ(parse_activation(to_string(act)), act);
  EXPECT_FALSE(parse_activation("gelu").has_value());
}

TEST(ShallowRep, EvaluatesSumOfAtoms) {
  ShallowRep rep(2, Activation::relu, {Atom{2.0, {1.0, 0.0}, 0.0}, Atom{-1.0, {0.0, 1.0}, 1.0}});
  const double x[2] = {0.5, 2.0};
  EXPECT_DOUBLE_EQ(rep(x), 2.0 * 0.5 - 3.0);
}

TEST(ShallowRep, NormConventions) {
  ShallowRep relu(2, Activation::relu, {Atom{-2.0, {3.0, 4.0}, -1.0}});
  EXPECT_DOUBLE_EQ(relu.norm_cert(), 2.0 * (5.0 + 1.0));
  ShallowRep th(2, Activation::tanh, {Atom{-2.0, {3.0, 4.0}, -100.0}});
  EXPECT_DOUBLE_EQ(th.norm_cert(), 2.0 * (5.0 + 1.0));
  ShallowRep sp(1, Activation::softplus, {Atom{1.0, {2.0}, -3.0}});
  EXPECT_DOUBLE_EQ(sp.norm_cert(), 5.0);
  EXPECT_DOUBLE_EQ(rep_norm(relu), relu.norm_cert());
}

TEST(ShallowRep, RejectsInvalidAtoms) {
  EXPECT_THROW(ShallowRep(2, Activation::relu, {Atom{1.0, {1.0}, 0.0}}), DimensionMismatch);
  EXPECT_THROW(ShallowRep(1, Activation::relu, {Atom{NAN, {1.0}, 0.0}}), InvalidArgument);
  EXPECT_THROW(ShallowRep(1, Activation::relu, {Atom{1.0, {0.0}, -1.0}}), InvalidArgument);
  EXPECT_NO_THROW(ShallowRep(1, Activation::relu, {Atom{1.0, {0.0}, 1.0}}));
  ShallowRep rep(3, Activation::relu);
  const double x[2] = {0, 0};
  EXPECT_THROW(rep(x), DimensionMismatch);
}

TEST(ShallowRep, EmptyRepIsZero) {
  ShallowRep rep(4, Activation::tanh);
  const double x[4] = {1, 2, 3, 4};
  EXPECT_EQ(rep(x), 0.0);
  EXPECT_EQ(rep.norm_cert(), 0.0);
}

TEST(ShallowRep, ConcatAddsFunctionsAndNorms) {
  auto f = random_rep(3, 5, Activation::tanh, 1), g = random_rep(3, 7, Activation::tanh, 2);
  auto h = concat(f, g);
  const double x[3] = {0.1, -0.4, 0.9};
  EXPECT_NEAR(h(x), f(x) + g(x), 1e-14);
  EXPECT_NEAR(h.norm_cert(), f.norm_cert() + g.norm_cert(), 1e-12);
  EXPECT_THROW(concat(f, random_rep(2, 1, Activation::tanh, 3)), DimensionMismatch);
}

TEST(ShallowRep, RidgeLiftComposesWithDirection) {
  auto prof = random_rep(1, 6, Activation::relu, 5);
  const std::vector<double> w{0.6, -0.8, 0.0};
  auto lifted = ridge_lift(prof, w, 0.3);
  const double x[3] = {1.0, 0.5, -2.0};
  const double s = 0.6 - 0.4 + 0.3;
  EXPECT_NEAR(lifted(x), prof(std::span<const double>(&s, 1)), 1e-13);
}

TEST(DeepRep, CompositionEvaluatesAndMultipliesNorms) {
  auto inner = random_rep(2, 4, Activation::relu, 7);
  auto outer = random_rep(1, 3, Activation::relu, 8);
  DeepRep net = compose(outer, DeepRep(inner));
  const double x[2] = {0.3, -0.2};
  const double v = inner(x);
  EXPECT_NEAR(net(x), outer(std::span<const double>(&v, 1)), 1e-13);
  EXPECT_NEAR(net.norm_cert(), inner.norm_cert() * outer.norm_cert(), 1e-12);
  EXPECT_EQ(net.depth(), 2u);
}

TEST(DeepRep, ChannelwiseMatchesDense) {
  Block b1{Activation::relu, 1, false,
           {ShallowRep(1, Activation::relu, {Atom{1, {1}, 0}}), ShallowRep(1, Activation::relu, {Atom{1, {-1}, 0}})}};
  Block b2{Activation::relu, 2, true,
           {ShallowRep(1, Activation::relu, {Atom{2, {1}, -0.5}}), ShallowRep(1, Activation::relu, {Atom{3, {1}, 0}})}};
  DeepRep net(1, {b1, b2});
  DeepRep dense(1, {b1, to_dense(b2)});
  for (double x : {-1.0, -0.2, 0.4, 1.5}) {
    auto a = net.forward(std::span<const double>(&x, 1));
    auto b = dense.forward(std::span<const double>(&x, 1));
    ASSERT_EQ(a.size(), 2u);
    EXPECT_DOUBLE_EQ(a[0], b[0]);
    EXPECT_DOUBLE_EQ(a[1], b[1]);
  }
}

TEST(DeepRep, RejectsMismatchedBlocks) {
  Block b1{Activation::relu, 2, false, {ShallowRep(2, Activation::relu)}};
  Block b2{Activation::relu, 3, false, {ShallowRep(3, Activation::relu)}};
  EXPECT_THROW(DeepRep(2, {b1, b2}), DimensionMismatch);
}

TEST(Composition, IdentityRep) {
  auto id = identity_rep(Activation::relu);
  for (double s : {-3.0, 0.0, 2.0}) EXPECT_DOUBLE_EQ(id(std::span<const double>(&s, 1)), s);
  EXPECT_THROW(identity_rep(Activation::tanh), InvalidArgument);
}

TEST(Composition, ProductRepApproximatesProduct) {
  auto f = DeepRep(random_rep(2, 3, Activation::relu, 11));
  auto g = compose(random_rep(1, 2, Activation::relu, 13), DeepRep(random_rep(2, 3, Activation::relu, 12)));
  auto fg = product_rep(f, g, 1.0, 2048);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 50; ++k) {
    const double x[2] = {u(rng), u(rng)};
    EXPECT_NEAR(fg(x), f(x) * g(x), 1e-4 * (1 + std::abs(f(x) * g(x))));
  }
}

TEST(Ranges, BallAndBoxEnclose) {
  auto rep = random_rep(2, 6, Activation::relu, 21);
  const Interval ball = ball_range(rep, 1.0);
  const std::vector<Interval> box(2, Interval{-0.7, 0.7});
  const Interval bx = box_range(rep, box);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int k = 0; k < 2000; ++k) {
    const double x[2] = {u(rng), u(rng)};
    const double v = rep(x);
    EXPECT_TRUE(bx.contains(v));
    if (x[0] * x[0] + x[1] * x[1] <= 1.0) EXPECT_TRUE(ball.contains(v));
  }
}

TEST(Subsample, UnbiasedWithNormPreserved) {
  auto rep = random_rep(2, 40, Activation::relu, 31);
  auto sub = subsample(rep, 64, 9);
  EXPECT_EQ(sub.size(), 64u);
  EXPECT_NEAR(sub.norm_cert(), rep.norm_cert(), 1e-10 * rep.norm_cert());
  // average of many independent subsamples approaches the original
  const double x[2] = {0.2, -0.5};
  double mean = 0.0;
  const int reps = 400;
  for (int s = 0; s < reps; ++s) mean += subsample(rep, 64, 1000 + s)(x);
  mean /= reps;
  EXPECT_NEAR(mean, rep(x), 4.0 * rep.norm_cert() * 2.0 / std::sqrt(64.0 * reps));
  auto again = subsample(rep, 64, 9);
  for (std::size_t i = 0; i < sub.size(); ++i) EXPECT_EQ(sub.a(i), again.a(i));
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  std::vector<double> one(1000), many(1000);
  set_num_threads(1);
  parallel_for(one.size(), [&](std::size_t i) { one[i] = std::sin(static_cast<double>(i)); });
  set_num_threads(8);
  parallel_for(many.size(), [&](std::size_t i) { many[i] = std::sin(static_cast<double>(i)); });
  set_num_threads(0);
  EXPECT_EQ(one, many);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) { if (i == 5) throw NumericalError("boom"); }), NumericalError);
}
