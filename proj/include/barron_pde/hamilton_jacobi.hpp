#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "barron_pde/activation.hpp"
#include "barron_pde/error.hpp"
#include "barron_pde/network.hpp"
#include "barron_pde/parallel.hpp"
#include "barron_pde/profile.hpp"

namespace barron_pde {

/// Enclosure [beta_minus, beta_plus] of u0; gamma = exp(-beta) reversed.
struct RangeInterval {
  double beta_minus = 0.0;
  double beta_plus = 0.0;
  double gamma_minus() const { return std::exp(-beta_plus); }
  double gamma_plus() const { return std::exp(-beta_minus); }
};

namespace detail {

inline std::size_t range_cells_per_dim(std::size_t d) {
  switch (d) {
    case 1: return 4096;
    case 2: return 256;
    case 3: return 40;
    default: return 0;
  }
}

}  // namespace detail

/// Sound enclosure of u0 on the ball of radius R. Per-atom interval
/// arithmetic on the ball; for d <= 3 additionally the union of box
/// enclosures over a uniform subdivision of [-R, R]^d, intersected.
inline RangeInterval range_bound(const ShallowRep& u0, double radius) {
  require(radius > 0.0, "range_bound: radius must be positive");
  Interval r = ball_range(u0, radius);
  const std::size_t d = u0.input_dim();
  const std::size_t m = detail::range_cells_per_dim(d);
  if (m > 0 && !u0.empty()) {
    std::size_t total = 1;
    for (std::size_t j = 0; j < d; ++j) total *= m;
    const double h = 2.0 * radius / static_cast<double>(m);
    Interval u{INFINITY, -INFINITY};
    std::vector<Interval> box(d);
    for (std::size_t c = 0; c < total; ++c) {
      std::size_t rest = c;
      for (std::size_t j = 0; j < d; ++j) {
        const std::size_t k = rest % m;
        rest /= m;
        box[j] = {-radius + static_cast<double>(k) * h, -radius + static_cast<double>(k + 1) * h};
      }
      const Interval v = box_range(u0, box);
      u.lo = std::min(u.lo, v.lo);
      u.hi = std::max(u.hi, v.hi);
    }
    r.lo = std::max(r.lo, u.lo);
    r.hi = std::min(r.hi, u.hi);
  }
  return {r.lo, r.hi};
}

struct ColeHopfConfig {
  std::size_t n_mc = 4096;
  std::uint64_t seed = 0;
  std::size_t exp_atoms = 256;
  std::size_t log_atoms = 256;
  double radius = 3.0;   // evaluation region |x| <= radius
  double t_max = 1.0;    // evaluation horizon
  std::size_t n_probe = 64;
  // Log-interval guard. profile_error: F is a mean of values of E, so it
  // can only leave [gamma-, gamma+] by the sup error of E; the guard is six
  // times that error. mc_spread: six Monte Carlo standard errors of F at
  // the probe points (much wider, kept for comparison).
  enum class Guard { profile_error, mc_spread } guard = Guard::profile_error;
};

struct HjCertificate {
  double u0_norm = 0.0;
  double exp_variation = 0.0;  // int |E''| of the exp profile rep
  double log_variation = 0.0;  // int |L''| of the log profile rep
  double exp_reference = 0.0;  // exp(-beta-) - exp(-beta+)
  double log_reference = 0.0;  // 1/gamma- - 1/gamma+
  double product = 0.0;        // exp_variation * log_variation * ||u0||
  double deep_cert = 0.0;      // full block-product path norm of the network
  double paper_bound = 0.0;    // exp(beta+ - beta-) ||u0||
  double ratio = 0.0;          // product / paper_bound
};

struct ColeHopfSolution {
  DeepRep net;  // input (x, tau = sqrt t)
  RangeInterval range;
  double delta = 0.0;
  double mc_spread = 0.0;          // largest Monte Carlo standard error of F at the probes
  double exp_profile_error = 0.0;  // sampled sup |E - exp(-s)|
  double log_lo = 0.0, log_hi = 0.0;
  ProfileAtoms exp_profile;
  ProfileAtoms log_profile;
  HjCertificate certificate;

  double operator()(double t, std::span<const double> x) const {
    require(t >= 0.0, "cole-hopf: t must be nonnegative");
    std::vector<double> z(x.begin(), x.end());
    z.push_back(std::sqrt(t));
    return net(z);
  }
};

inline Profile1D exp_neg_profile(double lo, double hi) {
  return Profile1D{[](double s) { return std::exp(-s); }, [](double s) { return -std::exp(-s); },
                   [](double s) { return std::exp(-s); }, lo, hi, {}};
}

inline Profile1D neg_log_profile(double lo, double hi) {
  return Profile1D{[](double s) { return -std::log(s); }, [](double s) { return -1.0 / s; },
                   [](double s) { return 1.0 / (s * s); }, lo, hi, {}};
}

inline HjCertificate hj_norm_certificate(const ShallowRep& u0, const RangeInterval& range, const ProfileAtoms& e,
                                         const ProfileAtoms& l, const DeepRep& net) {
  HjCertificate c;
  c.u0_norm = u0.norm_cert();
  c.exp_variation = e.variation_cert;
  c.log_variation = l.variation_cert;
  c.exp_reference = range.gamma_plus() - range.gamma_minus();
  c.log_reference = 1.0 / range.gamma_minus() - 1.0 / range.gamma_plus();
  c.product = c.exp_variation * c.log_variation * c.u0_norm;
  c.deep_cert = net.norm_cert();
  c.paper_bound = std::exp(range.beta_plus - range.beta_minus) * c.u0_norm;
  c.ratio = c.paper_bound > 0.0 ? c.product / c.paper_bound : 0.0;
  return c;
}

/// Three-block network for u_t - Delta u + |grad u|^2 = 0, u(0) = u0, via
/// u = -log E[exp(-u0(x + sqrt(t) Z))], Z ~ N(0, 2I), the expectation
/// replaced by N seeded samples.
inline ColeHopfSolution cole_hopf_solve(const ShallowRep& u0, const ColeHopfConfig& cfg) {
  require(cfg.n_mc >= 1, "cole-hopf: need at least one Monte Carlo sample");
  require(cfg.exp_atoms >= 2 && cfg.log_atoms >= 2, "cole-hopf: profile widths must be at least 2");
  require(cfg.radius > 0.0 && cfg.t_max > 0.0, "cole-hopf: radius and t_max must be positive");
  const std::size_t d = u0.input_dim();
  const std::size_t N = cfg.n_mc;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2);
  std::vector<double> z(N * d);
  double zmax = 0.0;
  for (std::size_t n = 0; n < N; ++n) {
    double r2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      z[n * d + j] = normal(rng);
      r2 += z[n * d + j] * z[n * d + j];
    }
    zmax = std::max(zmax, std::sqrt(r2));
  }

  ColeHopfSolution out;
  // block 1 evaluates u0 at x + tau z_n with |x| <= R, tau <= sqrt(t_max)
  out.range = range_bound(u0, cfg.radius + std::sqrt(cfg.t_max) * zmax);
  if (!std::isfinite(out.range.beta_minus) || !std::isfinite(out.range.beta_plus))
    throw NumericalError("cole-hopf: initial data is unbounded on the evaluation region");

  // Block 1: v_n(x, tau) = u0(x + tau z_n), atoms sigma(w^T x + (w^T z_n) tau + b).
  Block b1{u0.activation(), d + 1, false, std::vector<ShallowRep>(N)};
  parallel_for(N, [&](std::size_t n) {
    std::vector<double> a(u0.outer_weights().begin(), u0.outer_weights().end());
    std::vector<double> b(u0.biases().begin(), u0.biases().end());
    std::vector<double> w(u0.size() * (d + 1));
    const std::span<const double> zn(z.data() + n * d, d);
    for (std::size_t i = 0; i < u0.size(); ++i) {
      auto wi = u0.w(i);
      std::copy(wi.begin(), wi.end(), w.begin() + static_cast<std::ptrdiff_t>(i * (d + 1)));
      w[i * (d + 1) + d] = dot(wi, zn);
    }
    b1.outputs[n] = ShallowRep(d + 1, u0.activation(), std::move(a), std::move(w), std::move(b));
  });

  // Block 2: E ~ exp(-s) on [beta-, beta+] on every channel.
  double lo = out.range.beta_minus, hi = out.range.beta_plus;
  if (hi - lo < 1e-6) {
    const double pad = 0.05 * std::max(1.0, std::abs(lo));
    lo -= pad;
    hi += pad;
  }
  out.exp_profile = profile_to_atoms(exp_neg_profile(lo, hi), Activation::relu, cfg.exp_atoms);
  Block b2{Activation::relu, N, true, std::vector<ShallowRep>(N, out.exp_profile.rep)};

  // Guard delta from the Monte Carlo spread of F at probe points.
  const double g_lo = std::exp(-hi), g_hi = std::exp(-lo);
  std::mt19937_64 probe_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), tunit(0.0, 1.0);
  std::vector<std::vector<double>> probes(cfg.n_probe, std::vector<double>(d + 1));
  for (auto& p : probes) {
    for (std::size_t j = 0; j < d; ++j) p[j] = cfg.radius / std::sqrt(static_cast<double>(d)) * unit(probe_rng);
    p[d] = std::sqrt(cfg.t_max * tunit(probe_rng));
  }
  std::vector<double> probe_mean(cfg.n_probe), probe_sd(cfg.n_probe);
  parallel_for(cfg.n_probe, [&](std::size_t k) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      const double v = b1.outputs[n](probes[k]);
      const double e = out.exp_profile.rep(std::span<const double>(&v, 1));
      s += e;
      s2 += e * e;
    }
    const double mean = s / static_cast<double>(N);
    const double var = N > 1 ? std::max(0.0, (s2 - N * mean * mean) / static_cast<double>(N - 1)) : 0.0;
    probe_mean[k] = mean;
    probe_sd[k] = std::sqrt(var / static_cast<double>(N));
  });
  double sd = 0.0;
  for (double v : probe_sd) sd = std::max(sd, v);
  out.mc_spread = sd;
  // sup |E - exp(-s)| on [lo, hi], sampled between the profile cells
  double perr = 0.0;
  const std::size_t n_check = 8 * cfg.exp_atoms;
  for (std::size_t k = 0; k <= n_check; ++k) {
    const double s = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n_check);
    perr = std::max(perr, std::abs(out.exp_profile.rep(std::span<const double>(&s, 1)) - std::exp(-s)));
  }
  out.exp_profile_error = perr;
  const double spread = cfg.guard == ColeHopfConfig::Guard::mc_spread ? sd : perr;
  out.delta = std::max(1e-3, 6.0 * spread / g_lo);
  out.log_lo = g_lo * (1.0 - out.delta);
  out.log_hi = g_hi * (1.0 + out.delta);
  require(out.log_lo > 0.0, "cole-hopf: guard factor delta >= 1 leaves no positive log domain; increase n_mc");
  for (std::size_t k = 0; k < cfg.n_probe; ++k)
    if (probe_mean[k] < out.log_lo || probe_mean[k] > out.log_hi)
      throw NumericalError("cole-hopf: Monte Carlo average left the log interval at a probe point; increase n_mc");

  // Block 3: L ~ -log on the guarded gamma interval, applied to the mean of the channels.
  out.log_profile = profile_to_atoms(neg_log_profile(out.log_lo, out.log_hi), Activation::relu, cfg.log_atoms);
  const ShallowRep& L = out.log_profile.rep;
  std::vector<double> la(L.outer_weights().begin(), L.outer_weights().end());
  std::vector<double> lb(L.biases().begin(), L.biases().end());
  std::vector<double> lw(L.size() * N);
  for (std::size_t i = 0; i < L.size(); ++i)
    std::fill_n(lw.begin() + static_cast<std::ptrdiff_t>(i * N), N, L.w(i)[0] / static_cast<double>(N));
  Block b3{Activation::relu, N, false, {ShallowRep(N, Activation::relu, std::move(la), std::move(lw), std::move(lb))}};

  std::vector<Block> blocks;
  blocks.push_back(std::move(b1));
  blocks.push_back(std::move(b2));
  blocks.push_back(std::move(b3));
  out.net = DeepRep(d + 1, std::move(blocks));
  out.certificate = hj_norm_certificate(u0, out.range, out.exp_profile, out.log_profile, out.net);
  return out;
}

}  // namespace barron_pde
