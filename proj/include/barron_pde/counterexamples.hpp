#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "barron_pde/activation.hpp"
#include "barron_pde/error.hpp"
#include "barron_pde/experiments.hpp"
#include "barron_pde/network.hpp"
#include "barron_pde/parallel.hpp"
#include "barron_pde/quadrature.hpp"

namespace barron_pde {

// ---------------------------------------------------------------------------
// Harmonic extension into the unit ball.

struct BallQuadrature {
  std::size_t panels = 96;        // Gauss-Legendre panels in the polar variable
  std::size_t nodes = 12;         // nodes per panel
  std::size_t azimuth = 512;      // trapezoid nodes in the azimuth (d = 3)
  std::size_t mc_samples = 1 << 20;  // d >= 4
  std::uint64_t seed = 0;
  double margin = 0.05;
};

struct BallProblem {
  std::size_t d = 3;
  ShallowRep g;  // boundary data, evaluated on the unit sphere
  BallQuadrature quad;
};

/// Surface area of the unit sphere in R^d.
inline double sphere_area(std::size_t d) {
  const double h = 0.5 * static_cast<double>(d);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

namespace detail {

// Orthonormal completion e', e'' of a unit vector in R^3.
inline std::array<std::array<double, 3>, 2> complete_basis(const std::array<double, 3>& e) {
  std::array<double, 3> t{1.0, 0.0, 0.0};
  if (std::abs(e[0]) > 0.9) t = {0.0, 1.0, 0.0};
  const double p = t[0] * e[0] + t[1] * e[1] + t[2] * e[2];
  std::array<double, 3> u{t[0] - p * e[0], t[1] - p * e[1], t[2] - p * e[2]};
  const double n = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  for (double& v : u) v /= n;
  const std::array<double, 3> v{e[1] * u[2] - e[2] * u[1], e[2] * u[0] - e[0] * u[2], e[0] * u[1] - e[1] * u[0]};
  return {u, v};
}

// Composite Gauss-Legendre on [lo, hi] with extra breakpoints.
inline Rule split_rule(double lo, double hi, std::vector<double> cuts, std::size_t panels, std::size_t nodes) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  Rule out;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + (hi - lo) * static_cast<double>(p) / static_cast<double>(panels);
    const double b = lo + (hi - lo) * static_cast<double>(p + 1) / static_cast<double>(panels);
    std::vector<double> edges{a};
    for (double c : cuts)
      if (c > a && c < b) edges.push_back(c);
    edges.push_back(b);
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      if (edges[e + 1] <= edges[e]) continue;
      const Rule r = gauss_legendre(nodes, edges[e], edges[e + 1]);
      out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
      out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
    }
  }
  return out;
}

}  // namespace detail

/// Poisson integral u(x) = int P(x, y) g(y) dS(y), P = (1 - |x|^2)/(|S^{d-1}| |x - y|^d).
/// The integral is split over the atoms of g; each atom is integrated in
/// coordinates whose polar axis is its own direction, with panel breaks at
/// its kink. d = 2 and d = 3 use deterministic quadrature, d >= 4 seeded
/// Monte Carlo on the sphere.
inline double harmonic_ball_extension(const BallProblem& p, std::span<const double> x) {
  require(p.d >= 2, "ball: dimension must be at least 2");
  if (x.size() != p.d || p.g.input_dim() != p.d) throw DimensionMismatch("ball: point or data dimension mismatch");
  const double r2 = dot(x, x);
  if (std::sqrt(r2) >= 1.0 - p.quad.margin)
    throw InvalidArgument("ball: point too close to the boundary (|x| >= 1 - margin)");
  const Activation act = p.g.activation();
  const double area = sphere_area(p.d);
  const double dd = static_cast<double>(p.d);
  auto kernel = [&](double xy) { return (1.0 - r2) / (area * std::pow(1.0 + r2 - 2.0 * xy, 0.5 * dd)); };

  if (p.d >= 4) {
    std::mt19937_64 rng(p.quad.seed);
    std::normal_distribution<double> normal;
    std::vector<double> y(p.d);
    double sum = 0.0;
    for (std::size_t s = 0; s < p.quad.mc_samples; ++s) {
      double n = 0.0;
      for (double& v : y) {
        v = normal(rng);
        n += v * v;
      }
      n = std::sqrt(n);
      for (double& v : y) v /= n;
      sum += area * kernel(dot(x, y)) * p.g(y);
    }
    return sum / static_cast<double>(p.quad.mc_samples);
  }

  double total = 0.0;
  for (std::size_t i = 0; i < p.g.size(); ++i) {
    const double a = p.g.a(i), b = p.g.b(i);
    auto w = p.g.w(i);
    const double k = euclidean_norm(w);
    if (k == 0.0) {
      total += a * sigma(act, b);  // the kernel integrates to one
      continue;
    }
    std::vector<double> e(w.begin(), w.end());
    for (double& v : e) v /= k;
    const double kink = -b / k;  // atom kinks where e^T y = kink
    if (p.d == 2) {
      // y = cos(phi) e + sin(phi) e_perp
      const double xe = x[0] * e[0] + x[1] * e[1];
      const double xp = -x[0] * e[1] + x[1] * e[0];
      std::vector<double> cuts;
      if (std::abs(kink) < 1.0) {
        const double c = std::acos(kink);
        cuts = {c, 2.0 * std::numbers::pi - c};
      }
      const Rule r = detail::split_rule(0.0, 2.0 * std::numbers::pi, cuts, 4 * p.quad.panels, p.quad.nodes);
      double s = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q) {
        const double phi = r.nodes[q];
        const double c = std::cos(phi);
        s += r.weights[q] * kernel(xe * c + xp * std::sin(phi)) * sigma(act, k * c + b);
      }
      total += a * s;
    } else {
      // y = u e + sqrt(1 - u^2)(cos(phi) e' + sin(phi) e'')
      const std::array<double, 3> e3{e[0], e[1], e[2]};
      const auto basis = detail::complete_basis(e3);
      const double xe = x[0] * e[0] + x[1] * e[1] + x[2] * e[2];
      const double x1 = x[0] * basis[0][0] + x[1] * basis[0][1] + x[2] * basis[0][2];
      const double x2 = x[0] * basis[1][0] + x[1] * basis[1][1] + x[2] * basis[1][2];
      std::vector<double> cuts;
      if (std::abs(kink) < 1.0) cuts.push_back(kink);
      // grade towards the kernel peak at u = xe/|x|
      if (r2 > 0.0) cuts.push_back(xe / std::sqrt(r2));
      const Rule r = detail::split_rule(-1.0, 1.0, cuts, p.quad.panels, p.quad.nodes);
      const std::size_t na = p.quad.azimuth;
      const double dphi = 2.0 * std::numbers::pi / static_cast<double>(na);
      std::vector<double> proj(na);
      for (std::size_t j = 0; j < na; ++j) {
        const double phi = dphi * static_cast<double>(j);
        proj[j] = x1 * std::cos(phi) + x2 * std::sin(phi);
      }
      double s = 0.0;
      for (std::size_t q = 0; q < r.size(); ++q) {
        const double u = r.nodes[q];
        const double su = std::sqrt(std::max(0.0, 1.0 - u * u));
        double inner = 0.0;
        for (std::size_t j = 0; j < na; ++j) inner += kernel(u * xe + su * proj[j]);
        s += r.weights[q] * inner * dphi * sigma(act, k * u + b);
      }
      total += a * s;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Reduced axisymmetric solver: u(x) = G(x1) + psi(x1, |x'|).

/// Nodal solution on the half disk y1^2 + y2^2 <= 1, y2 >= 0, grid spacing h.
struct Grid2D {
  std::size_t n = 0;  // y1 in [-1, 1] has 2n + 1 nodes, y2 in [0, 1] has n + 1
  double h = 0.0;
  std::vector<double> values;  // row-major, index (j, i) = j * (2n + 1) + i; 0 outside the disk

  double y1(std::size_t i) const { return -1.0 + static_cast<double>(i) * h; }
  double y2(std::size_t j) const { return static_cast<double>(j) * h; }
  double node(std::size_t i, std::size_t j) const { return values[j * (2 * n + 1) + i]; }

  /// Bilinear interpolation; nodes outside the disk carry the boundary value 0.
  double operator()(double a, double r) const {
    const double fi = std::clamp((a + 1.0) / h, 0.0, static_cast<double>(2 * n));
    const double fj = std::clamp(r / h, 0.0, static_cast<double>(n));
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(fi), 2 * n - 1);
    const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(fj), n - 1);
    const double s = fi - static_cast<double>(i), t = fj - static_cast<double>(j);
    return (1 - s) * (1 - t) * node(i, j) + s * (1 - t) * node(i + 1, j) + (1 - s) * t * node(i, j + 1) +
           s * t * node(i + 1, j + 1);
  }
};

/// psi_11 + psi_22 + (d - 2)/y2 psi_2 = -G''(y1) in the half disk, psi = 0 on
/// the arc, psi_2 = 0 on the axis. G is a one-dimensional rep; relu kinks
/// enter as line sources -jump/h on their grid column (split linearly
/// between the two nearest columns when off-grid). Shortley-Weller rows at
/// the arc.
inline Grid2D reduced_axisymmetric_solve(const ShallowRep& G, std::size_t d, std::size_t n) {
  require(G.input_dim() == 1, "reduced solver: profile must be one-dimensional");
  require(d >= 2 && n >= 4, "reduced solver: need d >= 2 and n >= 4");
  const double h = 1.0 / static_cast<double>(n);
  const std::size_t nx = 2 * n + 1, ny = n + 1;
  Grid2D grid{n, h, std::vector<double>(nx * ny, 0.0)};
  auto inside = [&](std::size_t i, std::size_t j) {
    const double a = grid.y1(i), r = grid.y2(j);
    return a * a + r * r < 1.0 - 1e-12;
  };
  std::vector<long> id(nx * ny, -1);
  long count = 0;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      if (inside(i, j)) id[j * nx + i] = count++;

  // source -G'' per column: smooth part pointwise, relu kinks as column deltas
  std::vector<double> line(nx, 0.0);
  std::vector<double> smooth(nx, 0.0);
  for (std::size_t k = 0; k < G.size(); ++k) {
    const double a = G.a(k), w = G.w(k)[0], b = G.b(k);
    if (w == 0.0) continue;
    if (G.activation() == Activation::relu) {
      const double at = -b / w;
      if (at <= -1.0 || at >= 1.0) continue;
      const double jump = a * std::abs(w);  // jump of G' across the kink
      const double f = (at + 1.0) / h;
      const std::size_t i0 = static_cast<std::size_t>(f);
      const double frac = f - static_cast<double>(i0);
      line[i0] += (1.0 - frac) * jump / h;
      if (frac > 0.0 && i0 + 1 < nx) line[i0 + 1] += frac * jump / h;
    } else {
      for (std::size_t i = 0; i < nx; ++i) smooth[i] += a * w * w * sigma_second(G.activation(), w * grid.y1(i) + b);
    }
  }

  const double dm2 = static_cast<double>(d) - 2.0;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs(count);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const long row = id[j * nx + i];
      if (row < 0) continue;
      const double a = grid.y1(i), r = grid.y2(j);
      rhs(row) = -(line[i] + smooth[i]);
      double diag = 0.0;
      // arm length to the arc (or grid neighbour) along +-y1 and +y2
      auto arm = [&](int di, int dj, long& nb) {
        const long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
        if (ii >= 0 && ii < static_cast<long>(nx) && jj >= 0 && jj < static_cast<long>(ny) &&
            id[static_cast<std::size_t>(jj) * nx + static_cast<std::size_t>(ii)] >= 0) {
          nb = id[static_cast<std::size_t>(jj) * nx + static_cast<std::size_t>(ii)];
          return h;
        }
        nb = -1;
        if (di != 0) return std::sqrt(1.0 - r * r) - std::abs(a);
        return std::sqrt(1.0 - a * a) - r;
      };
      long nl, nr, nu;
      const double hl = arm(-1, 0, nl), hr = arm(1, 0, nr), hu = arm(0, 1, nu);
      // y1 direction (Shortley-Weller)
      const double cl = 2.0 / (hl * (hl + hr)), cr = 2.0 / (hr * (hl + hr));
      diag -= 2.0 / (hl * hr);
      if (nl >= 0) trip.emplace_back(row, nl, cl);
      if (nr >= 0) trip.emplace_back(row, nr, cr);
      if (j == 0) {
        // axis: psi_22 + (d-2) psi_2 / y2 -> (d - 1) psi_22, mirrored neighbour
        const double c = (dm2 + 1.0) * 2.0 / (hu * hu);
        diag -= c;
        if (nu >= 0) trip.emplace_back(row, nu, c);
      } else {
        long nd;
        const double hd = arm(0, -1, nd);
        const double cu2 = 2.0 / (hu * (hu + hd)), cd2 = 2.0 / (hd * (hu + hd));
        // first derivative on unequal arms
        const double cu1 = hd / (hu * (hu + hd)), cd1 = -hu / (hd * (hu + hd));
        const double c0 = (hu - hd) / (hu * hd);
        const double g = dm2 / r;
        diag += -2.0 / (hu * hd) + g * c0;
        if (nu >= 0) trip.emplace_back(row, nu, cu2 + g * cu1);
        if (nd >= 0) trip.emplace_back(row, nd, cd2 + g * cd1);
      }
      trip.emplace_back(row, row, diag);
    }
  }
  Eigen::SparseMatrix<double> A(count, count);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw NumericalError("reduced solver: factorization failed");
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !sol.allFinite()) throw NumericalError("reduced solver: solve failed");
  for (std::size_t k = 0; k < nx * ny; ++k)
    if (id[k] >= 0) grid.values[k] = sol(id[k]);
  return grid;
}

/// u(x) = G(x1) + psi(x1, |(x2, ..., xd)|).
inline double reduced_reconstruct(const ShallowRep& G, const Grid2D& psi, std::span<const double> x) {
  double r2 = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j) r2 += x[j] * x[j];
  return G(x.subspan(0, 1)) + psi(x[0], std::sqrt(r2));
}

/// One-sided difference quotients of u in y1 across {y1 = 0} at heights
/// rho: jump = d1 u(0+, rho) - d1 u(0-, rho). Interior points give ~0,
/// points near the sphere approach the jump of G'.
struct GradientJump {
  double rho = 0.0;
  double jump = 0.0;
};

inline std::vector<GradientJump> gradient_jump_probe(const ShallowRep& G, const Grid2D& psi, std::span<const double> rhos,
                                                     double eps) {
  std::vector<GradientJump> out;
  for (double rho : rhos) {
    auto u = [&](double a) {
      const double x[2] = {a, rho};
      return G(std::span<const double>(x, 1)) + psi(x[0], x[1]);
    };
    const double right = (u(2.0 * eps) - u(eps)) / eps;
    const double left = (u(-eps) - u(-2.0 * eps)) / eps;
    out.push_back({rho, right - left});
  }
  return out;
}

/// Quasi-uniform points in the unit ball: Halton sequence in [-1, 1]^d with rejection.
inline std::vector<std::vector<double>> ball_points(std::size_t d, std::size_t count) {
  static constexpr std::array<unsigned, 8> primes{2, 3, 5, 7, 11, 13, 17, 19};
  require(d >= 1 && d <= primes.size(), "ball_points: dimension out of range");
  std::vector<std::vector<double>> pts;
  for (std::uint64_t k = 1; pts.size() < count; ++k) {
    std::vector<double> p(d);
    double r2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double f = 1.0, v = 0.0;
      for (std::uint64_t m = k; m > 0; m /= primes[j]) {
        f /= primes[j];
        v += f * static_cast<double>(m % primes[j]);
      }
      p[j] = 2.0 * v - 1.0;
      r2 += p[j] * p[j];
    }
    if (r2 < 1.0) pts.push_back(std::move(p));
  }
  return pts;
}

struct BallRateConfig {
  std::vector<std::size_t> m_list{16, 32, 64, 128, 256, 512};
  std::size_t n_seeds = 10;
  std::uint64_t base_seed = 0;
  std::size_t n_samples = 10000;
  double ridge = 1e-8;
  std::size_t grid_n = 200;    // reduced solver resolution
  double control_time = 0.05;  // control target: the heat flow of g at this time
  std::size_t control_cells = 256;
};

struct ArmReport {
  std::vector<double> median_error;
  std::vector<std::vector<double>> seed_errors;
  LogLogFit fit;
};

struct BallRateReport {
  std::vector<std::size_t> m;
  std::vector<std::uint64_t> seeds;
  ArmReport ball;
  ArmReport control;
  std::vector<GradientJump> jumps;
};

/// Fits random-feature relu nets to the harmonic extension of g(y) = G(y1)
/// (sampled through the reduced solver) and, with the identical pipeline,
/// to a certified Barron control target.
inline BallRateReport ball_rate_experiment(const ShallowRep& G, std::size_t d, const BallRateConfig& cfg,
                                           const ShallowRep& control) {
  require(control.input_dim() == d, "ball_rate_experiment: control target has the wrong dimension");
  const Grid2D psi = reduced_axisymmetric_solve(G, d, cfg.grid_n);
  const auto pts = ball_points(d, cfg.n_samples);
  std::vector<double> yb(pts.size()), yc(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) {
    yb[k] = reduced_reconstruct(G, psi, pts[k]);
    yc[k] = control(pts[k]);
  });

  BallRateReport out;
  out.m = cfg.m_list;
  for (std::size_t s = 0; s < cfg.n_seeds; ++s) out.seeds.push_back(cfg.base_seed + s);
  const std::size_t jobs = cfg.m_list.size() * cfg.n_seeds;
  std::vector<double> eb(jobs), ec(jobs);
  parallel_for(2 * jobs, [&](std::size_t job) {
    const bool ball_arm = job < jobs;
    const std::size_t k = ball_arm ? job : job - jobs;
    const std::size_t mi = k / cfg.n_seeds, si = k % cfg.n_seeds;
    const auto fit = fit_two_layer(pts, ball_arm ? yb : yc, cfg.m_list[mi], cfg.ridge, out.seeds[si]);
    (ball_arm ? eb : ec)[k] = fit.l2_error;
  });
  auto summarize = [&](const std::vector<double>& e, ArmReport& arm) {
    std::vector<double> ms;
    for (std::size_t mi = 0; mi < cfg.m_list.size(); ++mi) {
      std::vector<double> row(e.begin() + static_cast<std::ptrdiff_t>(mi * cfg.n_seeds),
                              e.begin() + static_cast<std::ptrdiff_t>((mi + 1) * cfg.n_seeds));
      arm.median_error.push_back(median(row));
      arm.seed_errors.push_back(std::move(row));
      ms.push_back(static_cast<double>(cfg.m_list[mi]));
    }
    bool positive = true;
    for (double v : arm.median_error) positive = positive && v > 0.0;
    if (positive && ms.size() >= 2) arm.fit = fit_loglog(ms, arm.median_error);
  };
  summarize(eb, out.ball);
  summarize(ec, out.control);
  const double rhos[] = {0.0, 0.5, 0.9, 0.99};
  out.jumps = gradient_jump_probe(G, psi, rhos, 2.0 / static_cast<double>(cfg.grid_n));
  return out;
}

// ---------------------------------------------------------------------------
// Corner singularities.

struct CornerSpec {
  int k = 1;
  double theta = 1.5 * std::numbers::pi;
  double exponent() const { return static_cast<double>(k) * std::numbers::pi / theta; }
};

inline void check_corner(const CornerSpec& s) {
  require(s.k >= 1, "corner: k must be a positive integer");
  require(s.theta > 0.0 && s.theta < 2.0 * std::numbers::pi, "corner: theta must lie in (0, 2 pi)");
}

inline double corner_eval(const CornerSpec& s, double r, double phi) {
  check_corner(s);
  require(r >= 0.0, "corner: r must be nonnegative");
  require(phi >= 0.0 && phi <= s.theta, "corner: angle outside the sector");
  const double p = s.exponent();
  return std::pow(r, p) * std::sin(p * phi);
}

/// Cartesian gradient; |grad u| = p r^{p-1}.
inline std::array<double, 2> corner_grad(const CornerSpec& s, double r, double phi) {
  check_corner(s);
  require(r > 0.0, "corner: gradient needs r > 0");
  require(phi >= 0.0 && phi <= s.theta, "corner: angle outside the sector");
  const double p = s.exponent();
  const double ur = p * std::pow(r, p - 1.0) * std::sin(p * phi);
  const double ut = p * std::pow(r, p - 1.0) * std::cos(p * phi);  // (1/r) u_phi
  return {ur * std::cos(phi) - ut * std::sin(phi), ur * std::sin(phi) + ut * std::cos(phi)};
}

/// Angle of (x, y) in [0, 2 pi).
inline double polar_angle(double x, double y) {
  double a = std::atan2(y, x);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

/// Max |5-point Laplacian| of u over Cartesian grid nodes in the sector with
/// r in [r_min, r_max] whose whole stencil lies inside the sector.
inline double corner_harmonic_residual(const CornerSpec& s, double h, double r_min, double r_max = 1.0) {
  check_corner(s);
  auto in_sector = [&](double x, double y) {
    const double r = std::hypot(x, y);
    return r > 0.0 && polar_angle(x, y) <= s.theta;
  };
  auto u = [&](double x, double y) { return corner_eval(s, std::hypot(x, y), polar_angle(x, y)); };
  const auto n = static_cast<long>(std::ceil(r_max / h));
  double worst = 0.0;
  for (long i = -n; i <= n; ++i)
    for (long j = -n; j <= n; ++j) {
      const double x = static_cast<double>(i) * h, y = static_cast<double>(j) * h;
      const double r = std::hypot(x, y);
      if (r < r_min || r > r_max) continue;
      if (!in_sector(x, y) || !in_sector(x + h, y) || !in_sector(x - h, y) || !in_sector(x, y + h) ||
          !in_sector(x, y - h))
        continue;
      // stencil must not straddle the cut phi = 0 / 2 pi
      const double a0 = polar_angle(x, y);
      bool ok = true;
      for (auto [dx, dy] : {std::pair{h, 0.0}, {-h, 0.0}, {0.0, h}, {0.0, -h}})
        ok = ok && std::abs(polar_angle(x + dx, y + dy) - a0) < std::numbers::pi;
      if (!ok) continue;
      const double lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u(x, y)) / (h * h);
      worst = std::max(worst, std::abs(lap));
    }
  return worst;
}

/// Fitted exponent of sup_phi |grad u| on circles of the given radii.
/// With fd_step > 0 the gradient is a central difference of corner_eval.
inline double corner_gradient_exponent(const CornerSpec& s, std::span<const double> radii, double fd_step = 0.0,
                                       std::size_t n_angles = 64) {
  std::vector<double> sup;
  for (double r : radii) {
    double best = 0.0;
    for (std::size_t q = 0; q < n_angles; ++q) {
      // interior angles only, so difference stencils stay in the sector
      const double phi = s.theta * (static_cast<double>(q) + 0.5) / static_cast<double>(n_angles);
      double g = 0.0;
      if (fd_step <= 0.0) {
        const auto v = corner_grad(s, r, phi);
        g = std::hypot(v[0], v[1]);
      } else {
        const double e = fd_step * r;
        const double dr = (corner_eval(s, r + e, phi) - corner_eval(s, r - e, phi)) / (2.0 * e);
        const double da = std::min({fd_step, phi, s.theta - phi});
        const double dphi = (corner_eval(s, r, phi + da) - corner_eval(s, r, phi - da)) / (2.0 * da * r);
        g = std::hypot(dr, dphi);
      }
      best = std::max(best, g);
    }
    sup.push_back(best);
  }
  std::vector<double> rr(radii.begin(), radii.end());
  return fit_loglog(rr, sup).slope;
}

// ---------------------------------------------------------------------------
// Growth obstruction and the U-shaped domain.

/// -max(0, x1)^3 / 6, a solution of -Delta u = relu(x1).
inline double poisson_cubic_growth(std::span<const double> x) {
  require(!x.empty(), "poisson_cubic_growth: empty point");
  const double p = std::max(0.0, x[0]);
  return -p * p * p / 6.0;
}

/// Fitted exponent of sup_{|x| = R} |f| over R, sup taken over e1 and
/// seeded sphere samples.
template <class F>
double growth_exponent(F&& f, std::size_t d, std::span<const double> radii, std::size_t n_dirs = 256,
                       std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> dirs;
  std::vector<double> e1(d, 0.0);
  e1[0] = 1.0;
  dirs.push_back(e1);
  for (std::size_t k = 0; k < n_dirs; ++k) {
    std::vector<double> v(d);
    double n = 0.0;
    for (double& c : v) {
      c = normal(rng);
      n += c * c;
    }
    n = std::sqrt(n);
    for (double& c : v) c /= n;
    dirs.push_back(std::move(v));
  }
  std::vector<double> sup;
  std::vector<double> x(d);
  for (double R : radii) {
    double best = 0.0;
    for (const auto& v : dirs) {
      for (std::size_t j = 0; j < d; ++j) x[j] = R * v[j];
      best = std::max(best, std::abs(f(std::span<const double>(x))));
    }
    sup.push_back(best);
  }
  std::vector<double> rr(radii.begin(), radii.end());
  return fit_loglog(rr, sup).slope;
}

inline double growth_diagnostic(std::span<const double> radii, std::size_t d = 3) {
  return growth_exponent([](std::span<const double> x) { return poisson_cubic_growth(x); }, d, radii);
}

/// U = (0,1)x(0,3) u (2,3)x(0,3) u (0,3)x(0,1).
inline bool in_ushape(double x1, double x2) {
  const bool left = x1 > 0.0 && x1 < 1.0 && x2 > 0.0 && x2 < 3.0;
  const bool right = x1 > 2.0 && x1 < 3.0 && x2 > 0.0 && x2 < 3.0;
  const bool bar = x1 > 0.0 && x1 < 3.0 && x2 > 0.0 && x2 < 1.0;
  return left || right || bar;
}

inline double ushape_eval(double x1, double x2) {
  if (!in_ushape(x1, x2)) throw InvalidArgument("ushape: point outside the U-shaped domain");
  return x1 < 1.5 ? std::max(0.0, x2 - 1.0) : 0.0;
}

/// Shallow rep equal to ushape_eval on U1 = {x in U : x1 < 2}.
inline ShallowRep ushape_rep_u1() { return ShallowRep(2, Activation::relu, {Atom{1.0, {0.0, 1.0}, -1.0}}); }

/// Shallow rep equal to ushape_eval on U2 = {x in U : x1 > 1} (the zero function).
inline ShallowRep ushape_rep_u2() { return ShallowRep(2, Activation::relu); }

}  // namespace barron_pde
