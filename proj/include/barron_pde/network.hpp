#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "barron_pde/activation.hpp"
#include "barron_pde/error.hpp"

namespace barron_pde {

/// One neuron a * sigma(w^T x + b).
struct Atom {
  double a = 0.0;
  std::vector<double> w;
  double b = 0.0;
};

inline double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * v[j];
  return s;
}

/// Finite two-layer network: a discrete representing measure over atoms.
///
/// Weights are stored flat (atom-major). The norm certificate is the path
/// norm of this particular representation, an upper bound for the Barron
/// norm of the function it computes.
class ShallowRep {
 public:
  ShallowRep() = default;

  ShallowRep(std::size_t input_dim, Activation act) : dim_(input_dim), act_(act) {
    require(input_dim > 0, "input dimension must be positive");
  }

  ShallowRep(std::size_t input_dim, Activation act, const std::vector<Atom>& atoms)
      : ShallowRep(input_dim, act) {
    a_.reserve(atoms.size());
    b_.reserve(atoms.size());
    w_.reserve(atoms.size() * input_dim);
    for (const auto& atom : atoms) {
      if (atom.w.size() != input_dim)
        throw DimensionMismatch("atom weight has length " + std::to_string(atom.w.size()) +
                                ", expected " + std::to_string(input_dim));
      a_.push_back(atom.a);
      b_.push_back(atom.b);
      w_.insert(w_.end(), atom.w.begin(), atom.w.end());
    }
    validate_and_certify();
  }

  /// Flat constructor: weights holds size()*input_dim entries, atom-major.
  ShallowRep(std::size_t input_dim, Activation act, std::vector<double> outer,
             std::vector<double> weights, std::vector<double> bias)
      : dim_(input_dim), act_(act), a_(std::move(outer)), w_(std::move(weights)), b_(std::move(bias)) {
    require(input_dim > 0, "input dimension must be positive");
    if (a_.size() != b_.size() || w_.size() != a_.size() * dim_)
      throw DimensionMismatch("inconsistent flat atom arrays");
    validate_and_certify();
  }

  std::size_t input_dim() const { return dim_; }
  Activation activation() const { return act_; }
  std::size_t size() const { return a_.size(); }
  bool empty() const { return a_.empty(); }

  double a(std::size_t i) const { return a_[i]; }
  double b(std::size_t i) const { return b_[i]; }
  std::span<const double> w(std::size_t i) const { return {w_.data() + i * dim_, dim_}; }
  Atom atom(std::size_t i) const {
    auto wi = w(i);
    return {a_[i], {wi.begin(), wi.end()}, b_[i]};
  }

  std::span<const double> outer_weights() const { return a_; }
  std::span<const double> inner_weights() const { return w_; }
  std::span<const double> biases() const { return b_; }

  double norm_cert() const { return norm_cert_; }

  /// Sum_i a_i sigma(w_i^T x + b_i), accumulated in atom order.
  double operator()(std::span<const double> x) const {
    if (x.size() != dim_)
      throw DimensionMismatch("point has dimension " + std::to_string(x.size()) + ", network expects " +
                              std::to_string(dim_));
    double sum = 0.0;
    const double* wi = w_.data();
    for (std::size_t i = 0; i < a_.size(); ++i, wi += dim_) {
      double z = b_[i];
      for (std::size_t j = 0; j < dim_; ++j) z += wi[j] * x[j];
      sum += a_[i] * sigma(act_, z);
    }
    return sum;
  }

  /// Same network with every outer weight multiplied by c.
  ShallowRep scaled(double c) const {
    std::vector<double> a = a_;
    for (double& v : a) v *= c;
    return ShallowRep(dim_, act_, std::move(a), w_, b_);
  }

 private:
  void validate_and_certify() {
    double cert = 0.0;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      auto wi = w(i);
      bool finite = std::isfinite(a_[i]) && std::isfinite(b_[i]);
      for (double v : wi) finite = finite && std::isfinite(v);
      if (!finite) throw InvalidArgument("atom " + std::to_string(i) + " has a non-finite weight");
      const double wn = euclidean_norm(wi);
      if (act_ == Activation::relu && wn == 0.0 && b_[i] <= 0.0)
        throw InvalidArgument("relu atom " + std::to_string(i) + " has w = 0 and b <= 0 (identically zero)");
      cert += std::abs(a_[i]) * weight_factor(act_, wn, b_[i]);
    }
    norm_cert_ = cert;
  }

  std::size_t dim_ = 1;
  Activation act_ = Activation::relu;
  std::vector<double> a_;
  std::vector<double> w_;
  std::vector<double> b_;
  double norm_cert_ = 0.0;
};

inline double eval_shallow(const ShallowRep& rep, std::span<const double> x) { return rep(x); }

/// Convention-dependent path norm, recomputed from the atoms.
inline double rep_norm(const ShallowRep& rep) {
  double cert = 0.0;
  for (std::size_t i = 0; i < rep.size(); ++i)
    cert += std::abs(rep.a(i)) * weight_factor(rep.activation(), euclidean_norm(rep.w(i)), rep.b(i));
  return cert;
}

/// Atom-list union; evaluation is additive.
inline ShallowRep concat(const ShallowRep& lhs, const ShallowRep& rhs) {
  if (lhs.input_dim() != rhs.input_dim()) throw DimensionMismatch("concat: input dimensions differ");
  if (lhs.activation() != rhs.activation()) throw InvalidArgument("concat: activations differ");
  std::vector<double> a(lhs.outer_weights().begin(), lhs.outer_weights().end());
  std::vector<double> w(lhs.inner_weights().begin(), lhs.inner_weights().end());
  std::vector<double> b(lhs.biases().begin(), lhs.biases().end());
  a.insert(a.end(), rhs.outer_weights().begin(), rhs.outer_weights().end());
  w.insert(w.end(), rhs.inner_weights().begin(), rhs.inner_weights().end());
  b.insert(b.end(), rhs.biases().begin(), rhs.biases().end());
  return ShallowRep(lhs.input_dim(), lhs.activation(), std::move(a), std::move(w), std::move(b));
}

inline ShallowRep concat(std::span<const ShallowRep> parts) {
  if (parts.empty()) throw InvalidArgument("concat: nothing to concatenate");
  std::vector<double> a, w, b;
  for (const auto& p : parts) {
    if (p.input_dim() != parts[0].input_dim()) throw DimensionMismatch("concat: input dimensions differ");
    if (p.activation() != parts[0].activation()) throw InvalidArgument("concat: activations differ");
    a.insert(a.end(), p.outer_weights().begin(), p.outer_weights().end());
    w.insert(w.end(), p.inner_weights().begin(), p.inner_weights().end());
    b.insert(b.end(), p.biases().begin(), p.biases().end());
  }
  return ShallowRep(parts[0].input_dim(), parts[0].activation(), std::move(a), std::move(w), std::move(b));
}

/// Lifts a one-dimensional profile rep to the ridge x -> profile(w^T x + b).
/// Atom (alpha, omega, beta) becomes (alpha, omega * w, omega * b + beta).
inline ShallowRep ridge_lift(const ShallowRep& profile, std::span<const double> direction, double bias) {
  if (profile.input_dim() != 1) throw DimensionMismatch("ridge_lift: profile must be one-dimensional");
  if (euclidean_norm(direction) == 0.0) throw InvalidArgument("ridge_lift: zero direction");
  const std::size_t d = direction.size();
  std::vector<double> a(profile.outer_weights().begin(), profile.outer_weights().end());
  std::vector<double> w(profile.size() * d);
  std::vector<double> b(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double omega = profile.w(i)[0];
    for (std::size_t j = 0; j < d; ++j) w[i * d + j] = omega * direction[j];
    b[i] = omega * bias + profile.b(i);
  }
  return ShallowRep(d, profile.activation(), std::move(a), std::move(w), std::move(b));
}

// ---------------------------------------------------------------------------
// Tree-like (multi-block) networks.

/// One layer of a tree-like network. Output o is a shallow rep over the
/// previous layer's outputs. A channelwise block applies output o's
/// one-dimensional rep to input channel o alone (equivalent to atoms whose
/// weight vector is supported on coordinate o, stored compactly).
struct Block {
  Activation activation = Activation::relu;
  std::size_t input_dim = 1;
  bool channelwise = false;
  std::vector<ShallowRep> outputs;

  std::size_t output_dim() const { return outputs.size(); }

  double norm_cert() const {
    double m = 0.0;
    for (const auto& o : outputs) m = std::max(m, o.norm_cert());
    return m;
  }
};

inline void validate_block(const Block& block) {
  require(!block.outputs.empty(), "block has no outputs");
  for (const auto& o : block.outputs) {
    if (o.activation() != block.activation) throw InvalidArgument("block output activation differs from block");
    const std::size_t expect = block.channelwise ? 1 : block.input_dim;
    if (o.input_dim() != expect) throw DimensionMismatch("block output has wrong input dimension");
  }
  if (block.channelwise && block.outputs.size() != block.input_dim)
    throw DimensionMismatch("channelwise block needs one output per input channel");
}

/// Chain of blocks: block 1 consumes the raw input, block k the outputs of
/// block k-1. Certificate: product over blocks of the largest output norm.
class DeepRep {
 public:
  DeepRep() = default;

  DeepRep(std::size_t input_dim, std::vector<Block> blocks) : dim_(input_dim), blocks_(std::move(blocks)) {
    require(dim_ > 0, "input dimension must be positive");
    require(!blocks_.empty(), "deep network needs at least one block");
    std::size_t in = dim_;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (blocks_[k].input_dim != in)
        throw DimensionMismatch("block " + std::to_string(k + 1) + " consumes " +
                                std::to_string(blocks_[k].input_dim) + " inputs but receives " + std::to_string(in));
      validate_block(blocks_[k]);
      in = blocks_[k].output_dim();
    }
    norm_cert_ = 1.0;
    for (const auto& blk : blocks_) norm_cert_ *= blk.norm_cert();
  }

  /// Depth-one network wrapping a shallow rep.
  explicit DeepRep(const ShallowRep& shallow)
      : DeepRep(shallow.input_dim(), {Block{shallow.activation(), shallow.input_dim(), false, {shallow}}}) {}

  std::size_t input_dim() const { return dim_; }
  std::size_t depth() const { return blocks_.size(); }
  std::size_t output_dim() const { return blocks_.back().output_dim(); }
  const std::vector<Block>& blocks() const { return blocks_; }
  double norm_cert() const { return norm_cert_; }

  /// Forward pass; returns all outputs of the last block.
  std::vector<double> forward(std::span<const double> x) const {
    if (x.size() != dim_) throw DimensionMismatch("point dimension does not match network input");
    std::vector<double> cur(x.begin(), x.end()), next;
    for (const auto& blk : blocks_) {
      next.assign(blk.output_dim(), 0.0);
      for (std::size_t o = 0; o < blk.output_dim(); ++o)
        next[o] = blk.channelwise ? blk.outputs[o](std::span<const double>(&cur[o], 1)) : blk.outputs[o](cur);
      cur.swap(next);
    }
    return cur;
  }

  double operator()(std::span<const double> x) const {
    if (output_dim() != 1) throw DimensionMismatch("scalar evaluation of a vector-valued network");
    return forward(x)[0];
  }

 private:
  std::size_t dim_ = 1;
  std::vector<Block> blocks_;
  double norm_cert_ = 0.0;
};

inline double eval_deep(const DeepRep& net, std::span<const double> x) { return net(x); }

/// Relu (or softplus) rep of the identity s = sigma(s) - sigma(-s).
inline ShallowRep identity_rep(Activation act) {
  if (act == Activation::tanh) throw InvalidArgument("tanh has no exact two-atom identity");
  return ShallowRep(1, act, {Atom{1.0, {1.0}, 0.0}, Atom{-1.0, {-1.0}, 0.0}});
}

/// Dense equivalent of a block (channelwise atoms expanded to full weights).
inline Block to_dense(const Block& blk) {
  if (!blk.channelwise) return blk;
  Block out{blk.activation, blk.input_dim, false, {}};
  const std::size_t n = blk.input_dim;
  for (std::size_t o = 0; o < n; ++o) {
    const auto& r = blk.outputs[o];
    std::vector<double> a(r.outer_weights().begin(), r.outer_weights().end());
    std::vector<double> b(r.biases().begin(), r.biases().end());
    std::vector<double> w(r.size() * n, 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) w[i * n + o] = r.w(i)[0];
    out.outputs.emplace_back(n, r.activation(), std::move(a), std::move(w), std::move(b));
  }
  return out;
}

/// f o g for scalar outer f over R^k and inner g with k outputs.
inline DeepRep compose(const ShallowRep& outer, const DeepRep& inner) {
  if (outer.input_dim() != inner.output_dim())
    throw DimensionMismatch("compose: outer consumes " + std::to_string(outer.input_dim()) +
                            " inputs, inner produces " + std::to_string(inner.output_dim()));
  auto blocks = inner.blocks();
  blocks.push_back(Block{outer.activation(), outer.input_dim(), false, {outer}});
  return DeepRep(inner.input_dim(), std::move(blocks));
}

// ---------------------------------------------------------------------------
// Interval enclosures.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

inline Interval sigma_image(Activation act, Interval z) {
  // every supported activation is nondecreasing
  return {sigma(act, z.lo), sigma(act, z.hi)};
}

inline Interval scale(Interval v, double a) { return a >= 0 ? Interval{a * v.lo, a * v.hi} : Interval{a * v.hi, a * v.lo}; }

/// Enclosure of the rep's values on the Euclidean ball of radius R: per-atom
/// sigma([b - |w|R, b + |w|R]) scaled by a, summed.
inline Interval ball_range(const ShallowRep& rep, double radius) {
  Interval total{0.0, 0.0};
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const double wn = euclidean_norm(rep.w(i));
    const Interval z{rep.b(i) - wn * radius, rep.b(i) + wn * radius};
    const Interval v = scale(sigma_image(rep.activation(), z), rep.a(i));
    total.lo += v.lo;
    total.hi += v.hi;
  }
  return total;
}

/// Enclosure of the rep's values on an axis-aligned box given per-coordinate.
inline Interval box_range(const ShallowRep& rep, std::span<const Interval> box) {
  Interval total{0.0, 0.0};
  for (std::size_t i = 0; i < rep.size(); ++i) {
    auto wi = rep.w(i);
    Interval z{rep.b(i), rep.b(i)};
    for (std::size_t j = 0; j < wi.size(); ++j) {
      const Interval t = scale(box[j], wi[j]);
      z.lo += t.lo;
      z.hi += t.hi;
    }
    const Interval v = scale(sigma_image(rep.activation(), z), rep.a(i));
    total.lo += v.lo;
    total.hi += v.hi;
  }
  return total;
}

/// Interval propagation through all blocks of a deep net on a box.
inline std::vector<Interval> deep_box_range(const DeepRep& net, std::span<const Interval> box) {
  std::vector<Interval> cur(box.begin(), box.end()), next;
  for (const auto& blk : net.blocks()) {
    next.resize(blk.output_dim());
    for (std::size_t o = 0; o < blk.output_dim(); ++o)
      next[o] = blk.channelwise ? box_range(blk.outputs[o], std::span<const Interval>(&cur[o], 1))
                                : box_range(blk.outputs[o], cur);
    cur.swap(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Maurey-Jones-Barron subsampling.

/// Draws m atoms i.i.d. with probability proportional to their norm
/// contribution |a_i| * factor_i and gives each the outer weight
/// sign(a_i) * cert / (m * factor_i), so every sampled atom carries norm
/// cert / m and the sample mean is unbiased for the original function.
inline ShallowRep subsample(const ShallowRep& rep, std::size_t m, std::uint64_t seed) {
  require(m >= 1, "subsample: m must be at least 1");
  require(!rep.empty(), "subsample: empty representation");
  std::vector<double> contrib(rep.size());
  std::vector<double> factor(rep.size());
  for (std::size_t i = 0; i < rep.size(); ++i) {
    factor[i] = weight_factor(rep.activation(), euclidean_norm(rep.w(i)), rep.b(i));
    contrib[i] = std::abs(rep.a(i)) * factor[i];
  }
  std::vector<double> cdf(contrib.size());
  std::partial_sum(contrib.begin(), contrib.end(), cdf.begin());
  const double total = cdf.back();
  if (!(total > 0.0)) throw InvalidArgument("subsample: representation has zero norm");

  std::mt19937_64 rng(seed);
  const std::size_t d = rep.input_dim();
  std::vector<double> a(m), w(m * d), b(m);
  for (std::size_t k = 0; k < m; ++k) {
    // 53-bit uniform in [0, total)
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    i = std::min(i, rep.size() - 1);  // first slot with cdf > u, so contrib[i] > 0
    a[k] = std::copysign(total / (static_cast<double>(m) * factor[i]), rep.a(i));
    auto wi = rep.w(i);
    std::copy(wi.begin(), wi.end(), w.begin() + static_cast<std::ptrdiff_t>(k * d));
    b[k] = rep.b(i);
  }
  return ShallowRep(d, rep.activation(), std::move(a), std::move(w), std::move(b));
}

}  // namespace barron_pde
