#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "barron_pde/activation.hpp"
#include "barron_pde/error.hpp"
#include "barron_pde/network.hpp"

// Brute-force references. Nothing in here calls the constructions it is
// used to check (no profile_to_atoms, no Hermite/cell rules).

namespace barron_pde::oracle {

/// Uniform 1D grid with node values.
struct Grid1D {
  double lo = 0.0;
  double h = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double x(std::size_t i) const { return lo + static_cast<double>(i) * h; }
  double hi() const { return x(values.size() - 1); }

  /// Linear interpolation (oracle values are only queried at or near nodes).
  double at(double s) const {
    require(!values.empty(), "Grid1D: empty grid");
    const double r = (s - lo) / h;
    if (r <= 0.0) return values.front();
    const std::size_t i = static_cast<std::size_t>(r);
    if (i + 1 >= values.size()) return values.back();
    const double f = r - static_cast<double>(i);
    return (1.0 - f) * values[i] + f * values[i + 1];
  }
};

/// (4 fine - coarse)/3 on the coarse nodes; fine must have spacing h/2 on the same interval.
inline Grid1D richardson(const Grid1D& coarse, const Grid1D& fine) {
  require(fine.size() == 2 * coarse.size() - 1, "richardson: grids are not nested");
  Grid1D out{coarse.lo, coarse.h, std::vector<double>(coarse.size())};
  for (std::size_t i = 0; i < coarse.size(); ++i) out.values[i] = (4.0 * fine.values[2 * i] - coarse.values[i]) / 3.0;
  return out;
}

/// Thomas algorithm for a tridiagonal system with constant off-diagonals.
inline std::vector<double> solve_tridiagonal(double lower, std::vector<double> diag, double upper, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) throw NumericalError("tridiagonal solve: zero pivot");
    const double m = lower / diag[i - 1];
    diag[i] -= m * upper;
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper * x[i + 1]) / diag[i];
  return x;
}

namespace detail {

inline std::size_t node_count(double lo, double hi, double h) {
  require(h > 0.0 && hi > lo, "grid: need h > 0 and hi > lo");
  const double n = (hi - lo) / h;
  const auto k = static_cast<std::size_t>(std::llround(n));
  require(std::abs(n - static_cast<double>(k)) < 1e-6 * std::max(1.0, n), "grid: (hi - lo)/h must be an integer");
  return k + 1;
}

}  // namespace detail

/// -|w|^2 phi'' + lambda^2 phi = sigma(s) on [lo, hi], three-point scheme,
/// Dirichlet data from the far-field asymptote sigma/lambda^2.
inline Grid1D fd_screened_1d(const std::function<double(double)>& source, double w_norm, double lambda, double lo,
                             double hi, double h) {
  require(lambda > 0.0 && w_norm > 0.0, "fd_screened_1d: lambda and |w| must be positive");
  const std::size_t n = detail::node_count(lo, hi, h);
  Grid1D g{lo, h, std::vector<double>(n)};
  const double k = w_norm * w_norm / (h * h);
  const double l2 = lambda * lambda;
  g.values.front() = source(lo) / l2;
  g.values.back() = source(g.hi()) / l2;
  if (n <= 2) return g;
  std::vector<double> diag(n - 2, 2.0 * k + l2), rhs(n - 2);
  for (std::size_t i = 1; i + 1 < n; ++i) rhs[i - 1] = source(g.x(i));
  rhs.front() += k * g.values.front();
  rhs.back() += k * g.values.back();
  const auto inner = solve_tridiagonal(-k, std::move(diag), -k, std::move(rhs));
  std::copy(inner.begin(), inner.end(), g.values.begin() + 1);
  return g;
}

/// Convolution phi(s) = int c/(2 lambda^2) e^{-c|r|} sigma(s - r) dr, c = lambda/|w|,
/// by adaptive Gauss-Kronrod on the two half-lines (split where sigma kinks).
inline double screened_convolution(Activation act, double w_norm, double lambda, double s) {
  require(lambda > 0.0 && w_norm > 0.0, "screened_convolution: lambda and |w| must be positive");
  const double c = lambda / w_norm;
  const double pre = c / (2.0 * lambda * lambda);
  auto kern = [&](double r) { return pre * std::exp(-c * std::abs(r)) * sigma(act, s - r); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cuts{0.0};
  if (act == Activation::relu && s != 0.0) cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  double total = GK::integrate(kern, -inf, cuts.front(), 15, 1e-13) + GK::integrate(kern, cuts.back(), inf, 15, 1e-13);
  if (cuts.size() == 2) total += GK::integrate(kern, cuts[0], cuts[1], 15, 1e-13);
  return total;
}

/// Crank-Nicolson for u_t = u_xx + f(t, x) on [lo, hi] with Dirichlet data
/// boundary(t, x), two backward-Euler half steps at the start (damps the
/// nonsmooth-data oscillation without losing second order).
inline Grid1D fd_heat_1d(const std::function<double(double)>& u0, const std::function<double(double, double)>& source,
                         const std::function<double(double, double)>& boundary, double t, double lo, double hi, double h,
                         double dt) {
  require(t >= 0.0 && dt > 0.0, "fd_heat_1d: need t >= 0 and dt > 0");
  const std::size_t n = detail::node_count(lo, hi, h);
  Grid1D g{lo, h, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) g.values[i] = u0(g.x(i));
  if (t == 0.0 || n <= 2) return g;
  const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t / dt - 1e-12)));
  const double k = t / static_cast<double>(steps);
  auto src = [&](double time, std::size_t i) { return source ? source(time, g.x(i)) : 0.0; };

  // theta-step from time t0 to t0 + k: theta = 1 implicit Euler, 1/2 Crank-Nicolson
  auto step = [&](double t0, double kk, double theta) {
    const double r = kk / (h * h);
    std::vector<double> diag(n - 2, 1.0 + 2.0 * theta * r), rhs(n - 2);
    const double t1 = t0 + kk;
    const double left = boundary(t1, lo), right = boundary(t1, g.hi());
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double lap = g.values[i - 1] - 2.0 * g.values[i] + g.values[i + 1];
      rhs[i - 1] = g.values[i] + (1.0 - theta) * r * lap + kk * (theta * src(t1, i) + (1.0 - theta) * src(t0, i));
    }
    rhs.front() += theta * r * left;
    rhs.back() += theta * r * right;
    const auto inner = solve_tridiagonal(-theta * r, std::move(diag), -theta * r, std::move(rhs));
    std::copy(inner.begin(), inner.end(), g.values.begin() + 1);
    g.values.front() = left;
    g.values.back() = right;
  };

  double now = 0.0;
  // Rannacher start: the first CN step replaced by two implicit Euler half steps
  step(now, 0.5 * k, 1.0);
  step(now + 0.5 * k, 0.5 * k, 1.0);
  now += k;
  for (std::size_t s = 1; s < steps; ++s) {
    step(now, k, 0.5);
    now = t * static_cast<double>(s + 1) / static_cast<double>(steps);
  }
  return g;
}

/// Grid Cole-Hopf: v0 = exp(-u0), heat steps, u = -log v.
inline Grid1D fd_cole_hopf_1d(const std::function<double(double)>& u0, double t, double lo, double hi, double h,
                              double dt) {
  auto v0 = [&](double x) { return std::exp(-u0(x)); };
  // bounded data is constant far out, so the far-field value is frozen
  auto bc = [&](double, double x) { return std::exp(-u0(x)); };
  Grid1D v = fd_heat_1d(v0, nullptr, bc, t, lo, hi, h, dt);
  for (double& e : v.values) {
    if (!(e > 0.0)) throw NumericalError("fd_cole_hopf_1d: nonpositive heat solution");
    e = -std::log(e);
  }
  return v;
}

/// Direct scheme for u_t = u_xx - u_x^2: central differences, Heun time
/// stepping with dt <= h^2/4, frozen boundary values.
inline Grid1D fd_hj_direct_1d(const std::function<double(double)>& u0, double t, double lo, double hi, double h) {
  const std::size_t n = detail::node_count(lo, hi, h);
  Grid1D g{lo, h, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) g.values[i] = u0(g.x(i));
  if (t == 0.0) return g;
  const std::size_t steps = static_cast<std::size_t>(std::ceil(t / (0.25 * h * h)));
  const double k = t / static_cast<double>(steps);
  auto rate = [&](const std::vector<double>& u, std::vector<double>& out) {
    out.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double ux = (u[i + 1] - u[i - 1]) / (2.0 * h);
      out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h) - ux * ux;
    }
  };
  std::vector<double> k1, k2, mid(n);
  for (std::size_t s = 0; s < steps; ++s) {
    rate(g.values, k1);
    for (std::size_t i = 0; i < n; ++i) mid[i] = g.values[i] + k * k1[i];
    rate(mid, k2);
    for (std::size_t i = 0; i < n; ++i) g.values[i] += 0.5 * k * (k1[i] + k2[i]);
  }
  return g;
}

/// Mean and standard error of a E[sigma(mu + s Z)] by plain Monte Carlo.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

inline McEstimate mc_heat_atom(Activation act, const Atom& atom, double t, std::span<const double> x, std::size_t n,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const double mu = dot(atom.w, x) + atom.b;
  const double s = std::sqrt(2.0 * t) * euclidean_norm(atom.w);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = atom.a * sigma(act, mu + s * normal(rng));
    sum += v;
    sum2 += v * v;
  }
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  const double var = std::max(0.0, (sum2 - nd * mean * mean) / (nd - 1.0));
  return {mean, std::sqrt(var / nd)};
}

// ---------------------------------------------------------------------------
// Residual checks.

enum class Operator { screened, heat, hj };

/// Tensor grid of spacing h over a box; for heat/hj the first coordinate
/// is time and derivatives in it use step dt.
struct GridSpec {
  std::vector<Interval> box;
  double h = 0.01;
  double dt = 0.0;  // time step for heat / hj (0 -> h)
  double lambda = 1.0;
  std::function<double(std::span<const double>)> source;  // f; absent means 0
  std::function<bool(std::span<const double>)> skip;      // points left out of the max
};

struct ResidualReport {
  double max_abs = 0.0;
  std::vector<double> where;
  std::size_t points = 0;
};

/// Central-difference residual of u at every grid node:
///   screened: -Delta u + lambda^2 u - f
///   heat:     u_t - Delta u - f        (coordinate 0 is t)
///   hj:       u_t - Delta u + |grad u|^2 (coordinate 0 is t)
inline ResidualReport residual_check(const std::function<double(std::span<const double>)>& u, Operator op,
                                     const GridSpec& spec) {
  const std::size_t dim = spec.box.size();
  require(dim >= 1, "residual_check: empty box");
  require(op == Operator::screened || dim >= 2, "residual_check: time-dependent operators need (t, x)");
  const std::size_t first_space = op == Operator::screened ? 0 : 1;
  const double h = spec.h;
  const double k = spec.dt > 0.0 ? spec.dt : h;
  std::vector<std::size_t> counts(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const double step = (j < first_space) ? k : h;
    counts[j] = static_cast<std::size_t>(std::floor((spec.box[j].hi - spec.box[j].lo) / step + 1e-9)) + 1;
  }
  std::size_t total = 1;
  for (auto c : counts) total *= c;
  ResidualReport rep;
  std::vector<double> p(dim), q(dim);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t j = 0; j < dim; ++j) {
      const double step = (j < first_space) ? k : h;
      p[j] = spec.box[j].lo + static_cast<double>(rest % counts[j]) * step;
      rest /= counts[j];
    }
    if (spec.skip && spec.skip(p)) continue;
    const double u0 = u(p);
    double lap = 0.0, grad2 = 0.0;
    for (std::size_t j = first_space; j < dim; ++j) {
      q = p;
      q[j] = p[j] + h;
      const double up = u(q);
      q[j] = p[j] - h;
      const double um = u(q);
      lap += (up - 2.0 * u0 + um) / (h * h);
      const double g = (up - um) / (2.0 * h);
      grad2 += g * g;
    }
    const double f = spec.source ? spec.source(p) : 0.0;
    double r = 0.0;
    if (op == Operator::screened) {
      r = -lap + spec.lambda * spec.lambda * u0 - f;
    } else {
      q = p;
      q[0] = p[0] + k;
      const double tp = u(q);
      q[0] = p[0] - k;
      const double tm = u(q);
      const double ut = (tp - tm) / (2.0 * k);
      r = op == Operator::heat ? ut - lap - f : ut - lap + grad2;
    }
    ++rep.points;
    if (std::abs(r) > rep.max_abs || rep.where.empty()) {
      rep.max_abs = std::abs(r);
      rep.where = p;
    }
  }
  return rep;
}

}  // namespace barron_pde::oracle
