#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "barron_pde/activation.hpp"
#include "barron_pde/error.hpp"
#include "barron_pde/network.hpp"
#include "barron_pde/parallel.hpp"
#include "barron_pde/profile.hpp"
#include "barron_pde/quadrature.hpp"

namespace barron_pde {

/// Input vs output norm of one solve, compared with the reference bound.
struct NormCertificate {
  double input_norm = 0.0;
  double output_norm = 0.0;
  double paper_bound = 0.0;
  double ratio = 0.0;
  std::string bound_formula;
};

inline NormCertificate make_certificate(double in, double out, double bound, std::string formula) {
  NormCertificate c{in, out, bound, 0.0, std::move(formula)};
  c.ratio = bound > 0.0 ? out / bound : (out == 0.0 ? 0.0 : INFINITY);
  return c;
}

// ---------------------------------------------------------------------------
// Screened Poisson (-Delta + lambda^2) u = f on R^d.

struct ScreenedPoissonProblem {
  double lambda = 1.0;
  ShallowRep rhs;
};

struct ScreenedOptions {
  std::size_t n_quad = 2048;          // relu profile quadrature cells (graded)
  std::size_t laguerre_nodes = 64;    // smooth activations
  double tail_decay = 20.0;           // relu profile truncated where c|s| = tail_decay
};

/// Reference-bound multiplier for one rhs atom: lambda^-2 for bounded
/// activations, lambda^-2 + 2 lambda^-3 otherwise.
inline double screened_bound_factor(Activation act, double lambda) {
  return is_bounded(act) ? 1.0 / (lambda * lambda) : 1.0 / (lambda * lambda) + 2.0 / (lambda * lambda * lambda);
}

inline const char* screened_bound_formula(Activation act) {
  return is_bounded(act) ? "lambda^-2 * ||f||" : "(lambda^-2 + 2 lambda^-3) * ||f||";
}

/// phi(s) with -|w|^2 phi'' + lambda^2 phi = sigma(s) and phi bounded by the
/// growth of sigma, i.e. u(x) = a phi(w^T x + b) solves the screened
/// equation for the single-atom source a sigma(w^T x + b).
///
/// relu uses the closed form lambda^-2 relu(s) + |w|/(2 lambda^3) e^{-lambda|s|/|w|};
/// other activations integrate lambda^-2 E[sigma(s - rho)], rho ~ Laplace(c),
/// c = lambda/|w|, adaptively.
inline double screened_profile(Activation act, double w_norm, double lambda, double s) {
  require(lambda > 0.0, "screened_profile: lambda must be positive");
  require(w_norm >= 0.0, "screened_profile: |w| must be nonnegative");
  const double inv_l2 = 1.0 / (lambda * lambda);
  if (w_norm == 0.0) {
    if (act == Activation::relu) throw InvalidArgument("screened_profile: relu atom with |w| = 0");
    return inv_l2 * sigma(act, s);
  }
  if (act == Activation::relu)
    return inv_l2 * sigma(act, s) + w_norm / (2.0 * lambda * lambda * lambda) * std::exp(-lambda * std::abs(s) / w_norm);
  const double c = lambda / w_norm;
  boost::math::quadrature::exp_sinh<double> integrator;
  auto integrand = [&](double rho) {
    return 0.5 * c * std::exp(-c * rho) * (sigma(act, s - rho) + sigma(act, s + rho));
  };
  return inv_l2 * integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
}

/// Closed-form relu profile and its first two derivatives.
inline Profile1D screened_relu_profile(double w_norm, double lambda, double tail_decay = 20.0) {
  require(w_norm > 0.0, "screened_relu_profile: |w| must be positive");
  const double c = lambda / w_norm;
  const double inv_l2 = 1.0 / (lambda * lambda);
  const double reach = tail_decay / c;
  Profile1D p;
  p.g = [=](double s) { return inv_l2 * (std::max(s, 0.0) + std::exp(-c * std::abs(s)) / (2.0 * c)); };
  p.dg = [=](double s) {
    const double e = 0.5 * std::exp(-c * std::abs(s));
    return inv_l2 * (s > 0.0 ? 1.0 - e : e);
  };
  p.d2g = [=](double s) { return inv_l2 * 0.5 * c * std::exp(-c * std::abs(s)); };
  p.lo = -reach;
  p.hi = reach;
  return p;
}

/// Cell edges on [-reach, reach] for the relu profile, n even. Each side
/// equidistributes sqrt(g'') ~ e^{-c|s|/2}, which balances the piecewise
/// linear error |g''| width^2 across cells; the cusp of g'' at 0 is an edge.
inline std::vector<double> screened_relu_cells(double c, double reach, std::size_t n) {
  require(n >= 2 && n % 2 == 0, "screened_relu_cells: need an even number of cells");
  const std::size_t half = n / 2;
  const double total = -std::expm1(-0.5 * c * reach);
  std::vector<double> right(half + 1);
  for (std::size_t k = 0; k <= half; ++k)
    right[k] = -2.0 / c * std::log1p(-static_cast<double>(k) / static_cast<double>(half) * total);
  right.back() = reach;
  std::vector<double> edges;
  edges.reserve(n + 1);
  for (std::size_t k = half; k > 0; --k) edges.push_back(-right[k]);
  edges.insert(edges.end(), right.begin(), right.end());
  return edges;
}

struct ScreenedSolution {
  ShallowRep solution;
  std::vector<NormCertificate> per_atom;
  NormCertificate total;
};

/// Per-atom ridge construction. relu atoms: closed-form profile ->
/// profile_to_atoms on graded cells -> ridge_lift. Other activations: the convolution with
/// the Laplace kernel discretized by Gauss-Laguerre, giving shifted atoms of
/// the same activation. Output atoms are concatenated in input order.
inline ScreenedSolution solve_screened_poisson(const ScreenedPoissonProblem& p, const ScreenedOptions& opt = {}) {
  require(p.lambda > 0.0, "screened Poisson: lambda must be positive");
  const ShallowRep& f = p.rhs;
  const Activation act = f.activation();
  const double lambda = p.lambda;
  const double inv_l2 = 1.0 / (lambda * lambda);
  const std::size_t n_quad = opt.n_quad + (opt.n_quad % 2);  // even: the profile cusp sits on a cell edge
  const Rule laguerre = act == Activation::relu ? Rule{} : gauss_laguerre(opt.laguerre_nodes);

  std::vector<ShallowRep> parts(f.size());
  parallel_for(f.size(), [&](std::size_t i) {
    const double a = f.a(i), b = f.b(i);
    auto w = f.w(i);
    const double k = euclidean_norm(w);
    if (k == 0.0) {
      // constant source a sigma(b): u = a sigma(b) / lambda^2
      parts[i] = ShallowRep(f.input_dim(), act, {Atom{a * inv_l2, {w.begin(), w.end()}, b}});
      return;
    }
    if (act == Activation::relu) {
      const Profile1D prof = screened_relu_profile(k, lambda, opt.tail_decay);
      const auto cells = screened_relu_cells(lambda / k, prof.hi, n_quad);
      const ProfileAtoms pa = profile_to_atoms(prof, Activation::relu, cells);
      parts[i] = ridge_lift(pa.rep, w, b).scaled(a);
      return;
    }
    const double c = lambda / k;
    const std::size_t n = laguerre.size();
    std::vector<double> outer(2 * n), weights(2 * n * w.size()), bias(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      const double rho = laguerre.nodes[j] / c;
      for (int side = 0; side < 2; ++side) {
        const std::size_t idx = 2 * j + side;
        outer[idx] = 0.5 * a * laguerre.weights[j] * inv_l2;
        std::copy(w.begin(), w.end(), weights.begin() + static_cast<std::ptrdiff_t>(idx * w.size()));
        bias[idx] = side == 0 ? b - rho : b + rho;
      }
    }
    parts[i] = ShallowRep(f.input_dim(), act, std::move(outer), std::move(weights), std::move(bias));
  });

  ScreenedSolution out;
  const double factor = screened_bound_factor(act, lambda);
  double in_total = 0.0, out_total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double in = std::abs(f.a(i)) * weight_factor(act, euclidean_norm(f.w(i)), f.b(i));
    const double o = parts[i].norm_cert();
    out.per_atom.push_back(make_certificate(in, o, factor * in, screened_bound_formula(act)));
    in_total += in;
    out_total += o;
  }
  out.total = make_certificate(in_total, out_total, factor * in_total, screened_bound_formula(act));
  out.solution = parts.empty() ? ShallowRep(f.input_dim(), act) : concat(parts);
  return out;
}

// ---------------------------------------------------------------------------
// Poisson -Delta u = f with f written against sigma'' and u against sigma.

struct ActivationPairProblem {
  ShallowRep rhs;      // atoms a sigma''(w^T x + b); activation = sigma
  double alpha = 0.5;  // Hoelder exponent in the modified norm
};

struct PairSolution {
  ShallowRep solution;
  double rhs_modified_norm = 0.0;       // sum |a| (|w|^{2+alpha} + 1) of the source measure
  double data_modified_norm = 0.0;      // sum |a|/|w|^2 (|w|^{2+alpha} + 1) of the source measure
  double solution_modified_norm = 0.0;  // sum |a~| (|w~|^{2+alpha} + 1) of the solution measure
};

inline double modified_norm(const ShallowRep& rep, double alpha) {
  double s = 0.0;
  for (std::size_t i = 0; i < rep.size(); ++i)
    s += std::abs(rep.a(i)) * (std::pow(euclidean_norm(rep.w(i)), 2.0 + alpha) + 1.0);
  return s;
}

/// Exact solution u = sum (-a_i / |w_i|^2) sigma(w_i^T x + b_i), using
/// Delta sigma(w^T x + b) = |w|^2 sigma''(w^T x + b).
inline PairSolution solve_poisson_activation_pair(const ActivationPairProblem& p) {
  const ShallowRep& f = p.rhs;
  require(p.alpha > 0.0 && p.alpha < 1.0, "poisson-pair: alpha must lie in (0, 1)");
  if (f.activation() == Activation::relu)
    throw InvalidArgument(
        "poisson-pair: relu has no pointwise second derivative. With relu data on both sides the "
        "equation -Delta u = relu(x1) forces u ~ -max(0,x1)^3/6, cubic growth, whereas every relu "
        "network grows at most linearly at infinity; pair a smooth activation (softplus, tanh) instead");
  std::vector<double> outer(f.size());
  double data_norm = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k2 = dot(f.w(i), f.w(i));
    if (k2 == 0.0)
      throw InvalidArgument("poisson-pair: atom " + std::to_string(i) +
                            " has w = 0; a constant sigma'' source has no solution in this ansatz");
    outer[i] = -f.a(i) / k2;
    data_norm += std::abs(f.a(i)) / k2 * (std::pow(std::sqrt(k2), 2.0 + p.alpha) + 1.0);
  }
  PairSolution out;
  out.solution = ShallowRep(f.input_dim(), f.activation(), std::move(outer),
                            std::vector<double>(f.inner_weights().begin(), f.inner_weights().end()),
                            std::vector<double>(f.biases().begin(), f.biases().end()));
  out.rhs_modified_norm = modified_norm(f, p.alpha);
  out.data_modified_norm = data_norm;
  out.solution_modified_norm = modified_norm(out.solution, p.alpha);
  return out;
}

/// Source term sum a_i sigma''(w_i^T x + b_i) of a pair problem, pointwise.
inline double pair_source(const ShallowRep& rhs, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) s += rhs.a(i) * sigma_second(rhs.activation(), dot(rhs.w(i), x) + rhs.b(i));
  return s;
}

}  // namespace barron_pde
