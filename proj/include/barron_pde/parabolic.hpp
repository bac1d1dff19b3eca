#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "barron_pde/activation.hpp"
#include "barron_pde/elliptic.hpp"
#include "barron_pde/error.hpp"
#include "barron_pde/network.hpp"
#include "barron_pde/parallel.hpp"
#include "barron_pde/quadrature.hpp"

namespace barron_pde {

/// Shallow rep over (x, tau) in R^{d+1}, tau = sqrt(t) in the last slot.
struct SpaceTimeRep {
  ShallowRep rep;
  std::size_t tau_index = 0;

  std::size_t space_dim() const { return rep.input_dim() - 1; }

  double operator()(double t, std::span<const double> x) const {
    require(t >= 0.0, "SpaceTimeRep: t must be nonnegative");
    if (x.size() != space_dim()) throw DimensionMismatch("SpaceTimeRep: point has wrong dimension");
    std::vector<double> z(x.begin(), x.end());
    z.push_back(std::sqrt(t));
    return rep(z);
  }
};

struct HeatProblem {
  ShallowRep u0;                  // over R^d
  std::optional<ShallowRep> source;  // over (t, x) in R^{d+1}
  double t_max = 1.0;
};

struct HeatOptions {
  std::size_t n_hermite = 40;   // smooth activations
  std::size_t n_cells = 2048;   // relu: Gaussian cell quantization
  std::size_t n_time = 32;      // Duhamel Gauss-Legendre nodes
};

/// a E[relu(mu + s Z)], mu = w^T x + b, s = sqrt(2t)|w|.
inline double relu_heat_closed_form(const Atom& atom, double t, std::span<const double> x) {
  require(t >= 0.0, "relu_heat_closed_form: t must be nonnegative");
  if (x.size() != atom.w.size()) throw DimensionMismatch("relu_heat_closed_form: point has wrong dimension");
  const double mu = dot(atom.w, x) + atom.b;
  const double s = std::sqrt(2.0 * t) * euclidean_norm(atom.w);
  if (s == 0.0) return atom.a * std::max(mu, 0.0);
  const double r = mu / s;
  return atom.a * (mu * normal_cdf(r) + s * normal_pdf(r));
}

/// Rule for E f(Z), Z ~ N(0,1), used to smooth atoms of `act`. relu profiles
/// are kinked, so they get the moment-matched cell rule; smooth activations
/// get Gauss-Hermite.
inline Rule heat_rule(Activation act, const HeatOptions& opt) {
  return act == Activation::relu ? gaussian_cells(opt.n_cells) : gauss_hermite_normal(opt.n_hermite);
}

/// A priori quadrature error of the fixed-time propagation by t, summed over
/// atoms. relu: cell rule error <= 0.7 s / n^2 per unit |a| (measured
/// constant 0.63); smooth activations: Gauss-Hermite converges
/// geometrically while s stays near 1 (tanh at n = 40: 8e-9 at s = 1), but
/// degrades for wider Gaussians (1.5e-4 at s = 2), so the smooth estimate
/// below only holds for s <= 1.
inline double heat_quadrature_tolerance(const ShallowRep& u0, double t, const HeatOptions& opt = {}) {
  double tol = 0.0;
  const double n = static_cast<double>(u0.activation() == Activation::relu ? opt.n_cells : opt.n_hermite);
  for (std::size_t i = 0; i < u0.size(); ++i) {
    const double s = std::sqrt(2.0 * t) * euclidean_norm(u0.w(i));
    if (u0.activation() == Activation::relu)
      tol += std::abs(u0.a(i)) * 0.7 * s / (n * n);
    else
      tol += std::abs(u0.a(i)) * 1e-8 * (1.0 + s);
  }
  return tol;
}

/// u(t, x) = sum_i a_i E sigma(w_i^T x + b_i + sqrt(t) zeta_i), zeta_i ~ N(0, 2|w_i|^2),
/// as one shallow net in (x, tau = sqrt t): atoms (a q_k, (w, zeta_k), b).
inline SpaceTimeRep heat_homogeneous_spacetime(const ShallowRep& u0, std::size_t n_hermite = 40,
                                               const HeatOptions& opt_in = {}) {
  require(n_hermite >= 2, "heat: n_hermite must be at least 2");
  HeatOptions opt = opt_in;
  opt.n_hermite = n_hermite;
  const std::size_t d = u0.input_dim();
  const Rule rule = heat_rule(u0.activation(), opt);
  const std::size_t n = rule.size();
  std::vector<ShallowRep> parts(u0.size());
  parallel_for(u0.size(), [&](std::size_t i) {
    auto w = u0.w(i);
    const double k = euclidean_norm(w);
    if (k == 0.0) {
      std::vector<double> wz(w.begin(), w.end());
      wz.push_back(0.0);
      parts[i] = ShallowRep(d + 1, u0.activation(), {u0.a(i)}, std::move(wz), {u0.b(i)});
      return;
    }
    std::vector<double> a(n), ws(n * (d + 1)), b(n, u0.b(i));
    for (std::size_t q = 0; q < n; ++q) {
      a[q] = u0.a(i) * rule.weights[q];
      std::copy(w.begin(), w.end(), ws.begin() + static_cast<std::ptrdiff_t>(q * (d + 1)));
      ws[q * (d + 1) + d] = std::numbers::sqrt2 * k * rule.nodes[q];
    }
    parts[i] = ShallowRep(d + 1, u0.activation(), std::move(a), std::move(ws), std::move(b));
  });
  SpaceTimeRep out;
  out.tau_index = d;
  out.rep = parts.empty() ? ShallowRep(d + 1, u0.activation()) : concat(parts);
  return out;
}

/// Fixed-time specialization tau = sqrt t: atoms (a q_k, w, b + zeta_k sqrt t).
inline ShallowRep heat_homogeneous_at_time(const ShallowRep& u0, double t, const HeatOptions& opt = {}) {
  require(t >= 0.0, "heat: t must be nonnegative");
  const std::size_t d = u0.input_dim();
  if (t == 0.0) return u0;
  const Rule rule = heat_rule(u0.activation(), opt);
  const std::size_t n = rule.size();
  const double rt = std::sqrt(t);
  std::vector<ShallowRep> parts(u0.size());
  parallel_for(u0.size(), [&](std::size_t i) {
    auto w = u0.w(i);
    const double k = euclidean_norm(w);
    if (k == 0.0) {
      parts[i] = ShallowRep(d, u0.activation(), {u0.a(i)}, {w.begin(), w.end()}, {u0.b(i)});
      return;
    }
    std::vector<double> a(n), ws(n * d), b(n);
    for (std::size_t q = 0; q < n; ++q) {
      a[q] = u0.a(i) * rule.weights[q];
      std::copy(w.begin(), w.end(), ws.begin() + static_cast<std::ptrdiff_t>(q * d));
      b[q] = u0.b(i) + std::numbers::sqrt2 * k * rule.nodes[q] * rt;
    }
    parts[i] = ShallowRep(d, u0.activation(), std::move(a), std::move(ws), std::move(b));
  });
  return parts.empty() ? ShallowRep(d, u0.activation()) : concat(parts);
}

/// Reference bound factors.
inline double heat_spacetime_bound(double u0_norm) { return 2.0 * u0_norm; }
inline double heat_fixed_time_bound(double u0_norm, double t) { return (1.0 + std::sqrt(t)) * u0_norm; }

/// Sharp fixed-time bound ||u0|| + (2/sqrt(pi)) sqrt(t) sum |a||w|, which the
/// construction always satisfies (E|zeta| = 2|w|/sqrt(pi)).
inline double heat_fixed_time_sharp_bound(const ShallowRep& u0, double t) {
  double s = 0.0;
  for (std::size_t i = 0; i < u0.size(); ++i) s += std::abs(u0.a(i)) * euclidean_norm(u0.w(i));
  return u0.norm_cert() + 2.0 / std::sqrt(std::numbers::pi) * std::sqrt(t) * s;
}

inline double duhamel_polynomial(double t) {
  return t + 2.0 / 3.0 * std::pow(t, 1.5) + 0.5 * t * t + 0.4 * std::pow(t, 2.5);
}

/// f restricted to time s: atoms (a, w_x, b + w_t s) over R^d.
inline ShallowRep source_slice(const ShallowRep& f, double s) {
  require(f.input_dim() >= 2, "source_slice: source must have a time variable and a space variable");
  const std::size_t d = f.input_dim() - 1;
  std::vector<double> a, w, b;
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto wi = f.w(i);
    const double bias = f.b(i) + wi[0] * s;
    // a time-only relu atom switched off at this instant contributes nothing
    if (f.activation() == Activation::relu && bias <= 0.0 && euclidean_norm(wi.subspan(1)) == 0.0) continue;
    a.push_back(f.a(i));
    w.insert(w.end(), wi.begin() + 1, wi.end());
    b.push_back(bias);
  }
  return ShallowRep(d, f.activation(), std::move(a), std::move(w), std::move(b));
}

/// Duhamel integral int_0^t [e^{(t-s)Delta} f(s, .)] ds with Gauss-Legendre in s.
inline ShallowRep heat_inhomogeneous_at_time(const ShallowRep& f, double t, std::size_t n_time_nodes = 32,
                                             const HeatOptions& opt = {}) {
  require(t > 0.0, "heat: t must be positive for the Duhamel term");
  require(n_time_nodes >= 1, "heat: need at least one time node");
  const Rule gl = gauss_legendre(n_time_nodes, 0.0, t);
  std::vector<ShallowRep> parts(gl.size());
  for (std::size_t j = 0; j < gl.size(); ++j)
    parts[j] = heat_homogeneous_at_time(source_slice(f, gl.nodes[j]), t - gl.nodes[j], opt).scaled(gl.weights[j]);
  return concat(parts);
}

struct HeatSolution {
  ShallowRep solution;
  std::optional<ShallowRep> homogeneous;
  std::optional<ShallowRep> inhomogeneous;
  NormCertificate hom_cert;    // against (1 + sqrt t) ||u0||
  NormCertificate inhom_cert;  // against the Duhamel polynomial times ||f||
};

inline HeatSolution heat_full(const HeatProblem& p, double t, const HeatOptions& opt = {}) {
  require(t >= 0.0, "heat: t must be nonnegative");
  if (p.source && p.source->input_dim() != p.u0.input_dim() + 1)
    throw DimensionMismatch("heat: source must live on (t, x) with x of the initial-data dimension");
  HeatSolution out;
  const ShallowRep hom = heat_homogeneous_at_time(p.u0, t, opt);
  out.homogeneous = hom;
  out.hom_cert = make_certificate(p.u0.norm_cert(), hom.norm_cert(), heat_fixed_time_bound(p.u0.norm_cert(), t),
                                  "(1 + sqrt(t)) * ||u0||");
  out.solution = hom;
  if (p.source && t > 0.0) {
    const ShallowRep inh = heat_inhomogeneous_at_time(*p.source, t, opt.n_time, opt);
    out.inhomogeneous = inh;
    out.inhom_cert = make_certificate(p.source->norm_cert(), inh.norm_cert(),
                                      duhamel_polynomial(t) * p.source->norm_cert(),
                                      "(t + 2/3 t^1.5 + t^2/2 + 2/5 t^2.5) * ||f||");
    if (inh.activation() != hom.activation())
      throw InvalidArgument("heat: initial data and source must share an activation");
    out.solution = concat(hom, inh);
  }
  return out;
}

}  // namespace barron_pde
