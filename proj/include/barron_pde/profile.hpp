#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "barron_pde/activation.hpp"
#include "barron_pde/error.hpp"
#include "barron_pde/network.hpp"

namespace barron_pde {

/// Jump of g' at a point where g is only Lipschitz.
struct Kink {
  double at = 0.0;
  double jump = 0.0;
};

/// Scalar function on [lo, hi] given in closed form. Missing derivatives
/// are replaced by finite differences of g.
struct Profile1D {
  std::function<double(double)> g;
  std::function<double(double)> dg;   // optional; right derivative at kinks
  std::function<double(double)> d2g;  // optional; must be finite away from kinks
  double lo = 0.0;
  double hi = 1.0;
  std::vector<Kink> kinks;

  double value(double s) const { return g(s); }

  double slope(double s) const {
    if (dg) return dg(s);
    const double step = 1e-5 * std::max(1.0, hi - lo);
    // one-sided, second order, pointing into the interval
    const double dir = (s + 2.0 * step <= hi) ? 1.0 : -1.0;
    return dir * (-3.0 * g(s) + 4.0 * g(s + dir * step) - g(s + 2.0 * dir * step)) / (2.0 * step);
  }

  double curvature(double s) const {
    if (d2g) return d2g(s);
    const double step = 1e-4 * std::max(1.0, std::abs(s));
    return (g(s + step) - 2.0 * g(s) + g(s - step)) / (step * step);
  }
};

/// Output of profile_to_atoms. `variation_cert` is sum |a_k| |w_k| over the
/// curvature and kink atoms (for relu: the discrete int |g''| + sum |jumps|),
/// which is the quantity bounded by the classical one-dimensional Barron
/// norm estimates; rep.norm_cert() is the full path norm including biases
/// and the affine part.
struct ProfileAtoms {
  ShallowRep rep;
  double variation_cert = 0.0;
  double spacing = 0.0;
};

namespace detail {

// Bias placing a tanh constant atom at its saturation value (tanh(20) == 1 in double).
inline constexpr double kTanhSaturated = 20.0;

inline void push_atom(std::vector<Atom>& out, double a, double w, double b) {
  if (a != 0.0) out.push_back(Atom{a, {w}, b});
}

/// Atoms for c0 + c1 s, exact for relu/softplus, accurate to `tol` on
/// |s| <= reach for tanh.
inline std::vector<Atom> affine_atoms(Activation act, double c0, double c1, double reach, double tol = 1e-8) {
  std::vector<Atom> out;
  if (act == Activation::tanh) {
    push_atom(out, c0, 0.0, kTanhSaturated);
    if (c1 != 0.0) {
      // tanh(eps s)/eps - s ~ -(eps s)^3/(3 eps)
      const double r = std::max(reach, 1e-12);
      const double eps = std::min(1.0, std::sqrt(3.0 * tol / (std::abs(c1) * r * r * r)));
      push_atom(out, c1 / eps, eps, 0.0);
    }
    return out;
  }
  // sigma(s) - sigma(-s) == s for relu and softplus
  if (c1 != 0.0 && std::abs(c0) <= 1e6 * std::abs(c1)) {
    const double shift = c0 / c1;
    push_atom(out, c1, 1.0, shift);
    push_atom(out, -c1, -1.0, -shift);
  } else if (c0 != 0.0 || c1 != 0.0) {
    // (c1 - c0) s + c0 (s + 1)
    push_atom(out, c1 - c0, 1.0, 0.0);
    push_atom(out, -(c1 - c0), -1.0, 0.0);
    push_atom(out, c0, 1.0, 1.0);
    push_atom(out, -c0, -1.0, -1.0);
  }
  return out;
}

}  // namespace detail

namespace detail {

/// relu/softplus: affine part at lo plus int g''(beta) relu(s - beta) dbeta
/// on the given cells, plus the kinks. Midpoint rule by default; with
/// `moments` each cell gets its exact mass int g'' and an atom at the centroid
/// int beta g'' / int g'' (from g and g'), so the network is exact to the
/// right of every cell and the error stays local to the cell containing s.
inline std::vector<Atom> curvature_atoms(const Profile1D& p, Activation act, std::span<const double> edges,
                                         bool moments, double& variation) {
  const double reach = std::max(std::abs(p.lo), std::abs(p.hi));
  const double g_lo = p.value(p.lo);
  const double slope_lo = p.slope(p.lo);
  if (!std::isfinite(g_lo) || !std::isfinite(slope_lo))
    throw InvalidArgument("profile_to_atoms: g or g' not finite at the left endpoint");
  std::vector<Atom> atoms = affine_atoms(act, g_lo - slope_lo * p.lo, slope_lo, reach);
  atoms.reserve(atoms.size() + edges.size() + p.kinks.size());
  // [beta g' - g] at the cell edges; g' is the right derivative, so a kink on
  // an edge belongs to the cell on its right
  auto first_moment = [&](double at) { return at * p.slope(at) - p.value(at); };
  double d_left = moments ? p.slope(edges[0]) : 0.0, m_left = moments ? first_moment(edges[0]) : 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double width = edges[k + 1] - edges[k];
    double beta = 0.5 * (edges[k] + edges[k + 1]);
    double mass;
    if (moments) {
      const double d_right = p.slope(edges[k + 1]), m_right = first_moment(edges[k + 1]);
      double m0 = d_right - d_left, m1 = m_right - m_left;
      for (const auto& kink : p.kinks)
        if (kink.at > edges[k] && kink.at <= edges[k + 1]) {
          m0 -= kink.jump;
          m1 -= kink.jump * kink.at;
        }
      d_left = d_right;
      m_left = m_right;
      mass = m0;
      const double centroid = m1 / m0;
      if (std::isfinite(centroid) && centroid >= edges[k] && centroid <= edges[k + 1]) beta = centroid;
    } else {
      mass = p.curvature(beta) * width;
    }
    if (!std::isfinite(mass))
      throw InvalidArgument("profile_to_atoms: non-finite g'' sample at " + std::to_string(beta));
    variation += std::abs(mass);
    if (act == Activation::relu)
      push_atom(atoms, mass, 1.0, -beta);
    else  // softplus kernel of the cell's width
      push_atom(atoms, mass * width, 1.0 / width, -beta / width);
  }
  const double eps = edges.size() > 1 ? edges[1] - edges[0] : 1.0;
  for (const auto& kink : p.kinks) {
    if (kink.at < p.lo || kink.at > p.hi) continue;
    variation += std::abs(kink.jump);
    if (act == Activation::relu)
      push_atom(atoms, kink.jump, 1.0, -kink.at);
    else
      push_atom(atoms, kink.jump * eps, 1.0 / eps, -kink.at / eps);
  }
  return atoms;
}

}  // namespace detail

/// relu or softplus atoms for p on caller-chosen cells: `edges` increasing,
/// edges.front() == lo and edges.back() == hi. With g' available the cells
/// carry exact moments, so grading them to equidistribute sqrt|g''| balances
/// the local error |g''| width^2; otherwise the midpoint rule is used.
inline ProfileAtoms profile_to_atoms(const Profile1D& p, Activation act, std::span<const double> edges) {
  require(act != Activation::tanh, "profile_to_atoms: explicit cells need relu or softplus");
  require(edges.size() >= 2, "profile_to_atoms: need at least one cell");
  if (!(p.hi > p.lo) || !std::isfinite(p.lo) || !std::isfinite(p.hi))
    throw InvalidArgument("profile_to_atoms: interval has zero length");
  require(edges.front() == p.lo && edges.back() == p.hi, "profile_to_atoms: cells must span [lo, hi]");
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    require(edges[k + 1] > edges[k], "profile_to_atoms: cell edges must increase");
    spacing = std::min(spacing, edges[k + 1] - edges[k]);
  }
  double variation = 0.0;
  auto atoms = detail::curvature_atoms(p, act, edges, static_cast<bool>(p.dg), variation);
  return ProfileAtoms{ShallowRep(1, act, atoms), variation, spacing};
}

/// Converts a 1D profile into a network with one input that reproduces g on
/// [lo, hi].
///
/// relu: Taylor expansion with integral remainder anchored at lo,
///   g(s) = g(lo) + g'(lo)(s - lo) + int g''(beta) relu(s - beta) dbeta + sum_j J_j relu(s - kink_j),
/// the integral by the composite midpoint rule on n_quad equal cells (error O(h^2)).
/// softplus: the relu kernel replaced by h * softplus((s - beta)/h).
/// tanh: smooth-step quasi-interpolant of the nodal increments of g.
inline ProfileAtoms profile_to_atoms(const Profile1D& p, Activation act, std::size_t n_quad = 512) {
  require(n_quad >= 1, "profile_to_atoms: n_quad must be positive");
  if (!(p.hi > p.lo) || !std::isfinite(p.lo) || !std::isfinite(p.hi))
    throw InvalidArgument("profile_to_atoms: interval has zero length");
  const double h = (p.hi - p.lo) / static_cast<double>(n_quad);
  std::vector<Atom> atoms;
  double variation = 0.0;

  if (act == Activation::relu || act == Activation::softplus) {
    std::vector<double> edges(n_quad + 1);
    for (std::size_t k = 0; k <= n_quad; ++k) edges[k] = p.lo + static_cast<double>(k) * h;
    edges.back() = p.hi;
    atoms = detail::curvature_atoms(p, act, edges, false, variation);
  } else {
    // tanh: sum_j Delta_j H((s - t_j)/h) with H = (1 + tanh(kappa .))/2.
    const double g_lo = p.value(p.lo);
    const double slope_lo = p.slope(p.lo);
    if (!std::isfinite(g_lo) || !std::isfinite(slope_lo))
      throw InvalidArgument("profile_to_atoms: g or g' not finite at the left endpoint");
    constexpr double kappa = 0.25;
    const std::size_t pad = 64;  // tail of H below 1e-12 past this many steps
    const double slope_hi = p.slope(p.hi);
    std::vector<double> incr, mid;
    incr.reserve(n_quad + 2 * pad);
    for (std::size_t j = 0; j < pad; ++j) {
      incr.push_back(slope_lo * h);
      mid.push_back(p.lo - (static_cast<double>(pad - j) - 0.5) * h);
    }
    double prev = g_lo;
    for (std::size_t j = 0; j < n_quad; ++j) {
      const double s1 = (j + 1 == n_quad) ? p.hi : p.lo + static_cast<double>(j + 1) * h;
      const double cur = p.value(s1);
      if (!std::isfinite(cur)) throw InvalidArgument("profile_to_atoms: non-finite profile sample");
      incr.push_back(cur - prev);
      mid.push_back(p.lo + (static_cast<double>(j) + 0.5) * h);
      prev = cur;
    }
    for (std::size_t j = 0; j < pad; ++j) {
      incr.push_back(slope_hi * h);
      mid.push_back(p.hi + (static_cast<double>(j) + 0.5) * h);
    }
    double constant = g_lo - static_cast<double>(pad) * h * slope_lo;
    for (std::size_t j = 0; j < incr.size(); ++j) {
      constant += 0.5 * incr[j];
      const double a = 0.5 * incr[j];
      variation += std::abs(a) * kappa / h;
      detail::push_atom(atoms, a, kappa / h, -kappa * mid[j] / h);
    }
    detail::push_atom(atoms, constant, 0.0, detail::kTanhSaturated);
  }
  return ProfileAtoms{ShallowRep(1, act, atoms), variation, h};
}

}  // namespace barron_pde
