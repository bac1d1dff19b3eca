#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "barron_pde/error.hpp"

namespace barron_pde {

/// Nodes and weights of a one-dimensional rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Gauss-Legendre on [-1, 1], Newton iteration on the three-term recurrence.
inline Rule gauss_legendre(std::size_t n) {
  require(n >= 1, "gauss_legendre: need at least one node");
  Rule r{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / static_cast<double>(j);
      }
      pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

/// Gauss-Legendre mapped to [lo, hi].
inline Rule gauss_legendre(std::size_t n, double lo, double hi) {
  Rule r = gauss_legendre(n);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

/// Composite Gauss-Legendre: `panels` equal panels on [lo, hi], `n` nodes each.
inline Rule composite_gauss_legendre(std::size_t panels, std::size_t n, double lo, double hi) {
  Rule out;
  const double h = (hi - lo) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    Rule r = gauss_legendre(n, lo + p * h, lo + (p + 1) * h);
    out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
    out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
  }
  return out;
}

/// Gauss-Hermite rule for the standard normal: sum_k q_k f(z_k) ~ E f(Z),
/// Z ~ N(0, 1). Weights sum to one.
inline Rule gauss_hermite_normal(std::size_t n) {
  require(n >= 2, "gauss_hermite_normal: need at least two nodes");
  // Physicists' rule for weight exp(-x^2) (orthonormal recurrence), then
  // rescaled to the standard normal.
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  const double nd = static_cast<double>(n);
  std::vector<double> x(n), w(n);
  const std::size_t m = (n + 1) / 2;
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -0.16667);
    else if (i == 1)
      z -= 1.14 * std::pow(nd, 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * x[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * x[1];
    else
      z = 2.0 * z - x[i - 2];
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (jd + 1.0)) * p2 - std::sqrt(jd / (jd + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nd) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-14 * std::max(1.0, std::abs(z))) break;
    }
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / (pp * pp);
  }
  Rule r{std::vector<double>(n), std::vector<double>(n)};
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += w[i];
  for (std::size_t i = 0; i < n; ++i) {
    r.nodes[i] = std::numbers::sqrt2 * x[n - 1 - i];  // ascending
    r.weights[i] = w[n - 1 - i] / total;
  }
  return r;
}

/// Gauss-Laguerre rule for int_0^inf e^{-t} f(t) dt.
inline Rule gauss_laguerre(std::size_t n) {
  require(n >= 1, "gauss_laguerre: need at least one node");
  Rule r{std::vector<double>(n), std::vector<double>(n)};
  const double nd = static_cast<double>(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0)
      z = 3.0 / (1.0 + 2.4 * nd);
    else if (i == 1)
      z += 15.0 / (1.0 + 2.5 * nd);
    else {
      const double ai = static_cast<double>(i - 1);
      z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - r.nodes[i - 2]);
    }
    double pp = 0.0, p2 = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = 1.0;
      p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2.0 * jd + 1.0 - z) * p2 - jd * p3) / (jd + 1.0);
      }
      pp = (nd * p1 - nd * p2) / z;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= 1e-14 * std::max(1.0, std::abs(z))) break;
    }
    r.nodes[i] = z;
    r.weights[i] = -1.0 / (pp * nd * p2);
  }
  return r;
}

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Moment-matched quantization of N(0, 1) into n cells: cell boundaries are
/// equispaced in erf(z/2) on [-L, L] (outer cells extend to +-inf), each
/// node is the conditional mean of its cell and each weight the cell mass.
/// For any f that is affine on every cell the rule is exact; for relu ridge
/// profiles the error is O(n^-2).
inline Rule gaussian_cells(std::size_t n, double half_width = 8.0) {
  require(n >= 2, "gaussian_cells: need at least two cells");
  std::vector<double> edge(n + 1);
  const double e = std::erf(0.5 * half_width);
  for (std::size_t j = 0; j <= n; ++j) {
    const double u = e * (2.0 * static_cast<double>(j) / static_cast<double>(n) - 1.0);
    edge[j] = 2.0 * boost::math::erf_inv(u);
  }
  edge.front() = -INFINITY;
  edge.back() = INFINITY;
  Rule r{std::vector<double>(n), std::vector<double>(n)};
  auto tail = [](double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); };  // P(Z > z)
  auto pdf = [](double z) { return std::isfinite(z) ? normal_pdf(z) : 0.0; };
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = edge[j], hi = edge[j + 1];
    // mass via the tail on the side where it is small, for accuracy
    const double q = (lo >= 0.0) ? tail(lo) - tail(hi) : (normal_cdf(hi) - normal_cdf(lo));
    r.weights[j] = q;
    r.nodes[j] = (pdf(lo) - pdf(hi)) / q;
  }
  return r;
}

}  // namespace barron_pde
