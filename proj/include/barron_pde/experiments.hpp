#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "barron_pde/error.hpp"
#include "barron_pde/network.hpp"
#include "barron_pde/parallel.hpp"

namespace barron_pde {

/// Least-squares fit of log(error) = intercept + slope * log(x).
struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "fit_loglog: need at least two matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, "fit_loglog: abscissae must not all coincide");
  LogLogFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

inline double median(std::vector<double> v) {
  require(!v.empty(), "median of nothing");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  return 0.5 * (*std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)) + hi);
}

enum class ErrorNorm { l2, linf };

struct RateConfig {
  std::vector<std::size_t> m_list{16, 32, 64, 128, 256, 512, 1024};
  std::size_t n_seeds = 20;
  std::uint64_t base_seed = 0;
  std::size_t n_eval = 2000;  // Monte Carlo points of the uniform measure on [-1, 1]^dim
  ErrorNorm norm = ErrorNorm::l2;
};

struct RateReport {
  std::vector<std::size_t> m;
  std::vector<double> median_error;
  std::vector<std::vector<double>> seed_errors;  // [m index][seed index]
  std::vector<std::uint64_t> seeds;
  double cert = 0.0;
  std::vector<double> bound;                // cert / sqrt(m), the L2 bound on [-1, 1]^dim
  std::vector<double> linf_reference;       // d max{1, R} cert / sqrt(m) with R = sqrt(d)
  LogLogFit fit;
  bool bound_holds = true;                  // median <= bound for every m (L2 only)
};

/// Subsampling sweep: for each m and seed draw an MJB subsample and measure
/// its distance to `rep` at fixed uniform evaluation points.
inline RateReport rate_experiment(const ShallowRep& rep, const RateConfig& cfg) {
  require(!rep.empty(), "rate_experiment: representation has no atoms");
  require(cfg.n_seeds >= 1 && cfg.n_eval >= 1 && !cfg.m_list.empty(), "rate_experiment: empty sweep");
  for (std::size_t i = 1; i < cfg.m_list.size(); ++i)
    require(cfg.m_list[i] > cfg.m_list[i - 1], "rate_experiment: m values must increase strictly");
  const std::size_t d = rep.input_dim();

  std::mt19937_64 eval_rng(cfg.base_seed ^ 0x5851f42d4c957f2dULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> pts(cfg.n_eval * d), ref(cfg.n_eval);
  for (double& v : pts) v = unit(eval_rng);
  parallel_for(cfg.n_eval, [&](std::size_t k) { ref[k] = rep(std::span<const double>(pts.data() + k * d, d)); });

  RateReport out;
  out.m = cfg.m_list;
  out.cert = rep.norm_cert();
  for (std::size_t s = 0; s < cfg.n_seeds; ++s) out.seeds.push_back(cfg.base_seed + s);
  const std::size_t jobs = cfg.m_list.size() * cfg.n_seeds;
  std::vector<double> err(jobs);
  parallel_for(jobs, [&](std::size_t job) {
    const std::size_t mi = job / cfg.n_seeds, si = job % cfg.n_seeds;
    const ShallowRep sub = subsample(rep, cfg.m_list[mi], out.seeds[si]);
    double acc = 0.0;
    for (std::size_t k = 0; k < cfg.n_eval; ++k) {
      const double e = sub(std::span<const double>(pts.data() + k * d, d)) - ref[k];
      acc = cfg.norm == ErrorNorm::l2 ? acc + e * e : std::max(acc, std::abs(e));
    }
    err[job] = cfg.norm == ErrorNorm::l2 ? std::sqrt(acc / static_cast<double>(cfg.n_eval)) : acc;
  });

  const double R = std::sqrt(static_cast<double>(d));
  std::vector<double> ms;
  for (std::size_t mi = 0; mi < cfg.m_list.size(); ++mi) {
    std::vector<double> row(err.begin() + static_cast<std::ptrdiff_t>(mi * cfg.n_seeds),
                            err.begin() + static_cast<std::ptrdiff_t>((mi + 1) * cfg.n_seeds));
    const double m = static_cast<double>(cfg.m_list[mi]);
    out.median_error.push_back(median(row));
    out.seed_errors.push_back(std::move(row));
    out.bound.push_back(out.cert / std::sqrt(m));
    out.linf_reference.push_back(static_cast<double>(d) * std::max(1.0, R) * out.cert / std::sqrt(m));
    if (cfg.norm == ErrorNorm::l2 && out.median_error.back() > out.bound.back()) out.bound_holds = false;
    ms.push_back(m);
  }
  bool all_positive = true;
  for (double e : out.median_error) all_positive = all_positive && e > 0.0;
  if (all_positive && ms.size() >= 2) out.fit = fit_loglog(ms, out.median_error);
  return out;
}

struct TwoLayerFit {
  ShallowRep rep;
  double l2_error = 0.0;  // RMS residual on the fitting samples
};

/// Random-feature least squares: unit directions uniform on the sphere,
/// biases placing each kink uniformly inside the sample range along its
/// direction, outer weights from ridge-regularized normal equations.
inline TwoLayerFit fit_two_layer(const std::vector<std::vector<double>>& x, const std::vector<double>& y, std::size_t m,
                                 double ridge, std::uint64_t seed, Activation act = Activation::relu) {
  require(m >= 1, "fit_two_layer: m must be at least 1");
  require(!x.empty() && x.size() == y.size(), "fit_two_layer: need matching nonempty samples");
  require(ridge > 0.0, "fit_two_layer: ridge parameter must be positive");
  const std::size_t n = x.size(), d = x[0].size();
  for (const auto& p : x)
    if (p.size() != d) throw DimensionMismatch("fit_two_layer: samples have different dimensions");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(m * d), b(m);
  for (std::size_t k = 0; k < m; ++k) {
    double nrm = 0.0;
    do {
      nrm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        w[k * d + j] = normal(rng);
        nrm += w[k * d + j] * w[k * d + j];
      }
    } while (nrm == 0.0);
    nrm = std::sqrt(nrm);
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t j = 0; j < d; ++j) w[k * d + j] /= nrm;
    for (const auto& p : x) {
      const double s = dot(std::span<const double>(w.data() + k * d, d), p);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    b[k] = -(lo + (hi - lo) * unit(rng));
  }

  Eigen::MatrixXd phi(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k)
      phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          sigma(act, dot(std::span<const double>(w.data() + k * d, d), x[i]) + b[k]);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(n));
  Eigen::MatrixXd gram = phi.transpose() * phi;
  gram.diagonal().array() += ridge * static_cast<double>(n);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success) throw NumericalError("fit_two_layer: normal equations not factorizable");
  const Eigen::VectorXd a = ldlt.solve(phi.transpose() * yv);
  const Eigen::VectorXd res = phi * a - yv;

  TwoLayerFit out;
  out.rep = ShallowRep(d, act, std::vector<double>(a.data(), a.data() + m), std::move(w), std::move(b));
  out.l2_error = std::sqrt(res.squaredNorm() / static_cast<double>(n));
  return out;
}

}  // namespace barron_pde
