#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "barron_pde/network.hpp"
#include "barron_pde/profile.hpp"

namespace barron_pde {

namespace detail {

inline bool is_zero_net(const DeepRep& net) {
  for (const auto& o : net.blocks().back().outputs)
    for (double a : o.outer_weights())
      if (a != 0.0) return false;
  return true;
}

// Appends channelwise identity blocks until the net has `depth` blocks.
inline DeepRep pad_depth(const DeepRep& net, std::size_t depth, const std::vector<Activation>& acts) {
  auto blocks = net.blocks();
  while (blocks.size() < depth) {
    const Activation act = acts[blocks.size()];
    const std::size_t k = blocks.back().output_dim();
    Block id{act, k, true, std::vector<ShallowRep>(k, identity_rep(act))};
    blocks.push_back(std::move(id));
  }
  return DeepRep(net.input_dim(), std::move(blocks));
}

// Re-embeds a dense block's atoms into a wider input space starting at `offset`.
inline std::vector<ShallowRep> embed_outputs(const Block& blk, std::size_t width, std::size_t offset) {
  const Block dense = to_dense(blk);
  std::vector<ShallowRep> out;
  for (const auto& r : dense.outputs) {
    std::vector<double> a(r.outer_weights().begin(), r.outer_weights().end());
    std::vector<double> b(r.biases().begin(), r.biases().end());
    std::vector<double> w(r.size() * width, 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      auto wi = r.w(i);
      std::copy(wi.begin(), wi.end(), w.begin() + static_cast<std::ptrdiff_t>(i * width + offset));
    }
    out.emplace_back(width, r.activation(), std::move(a), std::move(w), std::move(b));
  }
  return out;
}

}  // namespace detail

/// Runs two scalar nets side by side: output 0 is f, output 1 is g. Blocks
/// of equal level must share an activation; the shallower net is extended
/// with exact identity blocks.
inline DeepRep stack(const DeepRep& f, const DeepRep& g) {
  if (f.input_dim() != g.input_dim()) throw DimensionMismatch("stack: input dimensions differ");
  if (f.output_dim() != 1 || g.output_dim() != 1) throw DimensionMismatch("stack: factors must be scalar");
  const std::size_t depth = std::max(f.depth(), g.depth());
  std::vector<Activation> acts(depth);
  for (std::size_t k = 0; k < depth; ++k) {
    const DeepRep& src = k < f.depth() ? f : g;
    acts[k] = src.blocks()[k].activation;
    if (k < f.depth() && k < g.depth() && f.blocks()[k].activation != g.blocks()[k].activation)
      throw InvalidArgument("stack: factors use different activations at level " + std::to_string(k + 1));
  }
  const DeepRep fp = detail::pad_depth(f, depth, acts);
  const DeepRep gp = detail::pad_depth(g, depth, acts);
  std::vector<Block> blocks;
  for (std::size_t k = 0; k < depth; ++k) {
    const Block& bf = fp.blocks()[k];
    const Block& bg = gp.blocks()[k];
    Block merged{acts[k], 0, false, {}};
    if (k == 0) {
      merged.input_dim = f.input_dim();
      const Block df = to_dense(bf), dg = to_dense(bg);
      merged.outputs = df.outputs;
      merged.outputs.insert(merged.outputs.end(), dg.outputs.begin(), dg.outputs.end());
    } else {
      const std::size_t width = bf.input_dim + bg.input_dim;
      merged.input_dim = width;
      merged.outputs = detail::embed_outputs(bf, width, 0);
      auto rest = detail::embed_outputs(bg, width, bf.input_dim);
      merged.outputs.insert(merged.outputs.end(), rest.begin(), rest.end());
    }
    blocks.push_back(std::move(merged));
  }
  return DeepRep(f.input_dim(), std::move(blocks));
}

/// Relu rep of s -> s^2 on [-M, M]; also used for polarization.
inline ProfileAtoms square_profile(double reach, std::size_t n_quad) {
  Profile1D sq{[](double s) { return s * s; }, [](double s) { return 2.0 * s; }, [](double) { return 2.0; },
               -reach, reach, {}};
  return profile_to_atoms(sq, Activation::relu, n_quad);
}

/// Network for f * g on the box [-R, R]^d via polarization
/// fg = ((f + g)^2 - (f - g)^2) / 4 with a relu rep of s^2 on the range
/// enclosure of |f| + |g|. Depth grows by one.
inline DeepRep product_rep(const DeepRep& f, const DeepRep& g, double box_radius, std::size_t n_quad = 512) {
  require(box_radius > 0.0, "product_rep: box radius must be positive");
  const DeepRep both = stack(f, g);
  const std::vector<Interval> box(f.input_dim(), Interval{-box_radius, box_radius});
  const auto range = deep_box_range(both, box);
  const double reach = std::max(std::abs(range[0].lo), std::abs(range[0].hi)) +
                       std::max(std::abs(range[1].lo), std::abs(range[1].hi));
  if (!std::isfinite(reach)) throw NumericalError("product_rep: unbounded range estimate");

  if (detail::is_zero_net(f) || detail::is_zero_net(g) || reach == 0.0)
    return compose(ShallowRep(2, Activation::relu), both);

  const ShallowRep sq = square_profile(reach, n_quad).rep;
  const std::array<double, 2> plus{1.0, 1.0}, minus{1.0, -1.0};
  const ShallowRep parts[2] = {ridge_lift(sq, plus, 0.0).scaled(0.25), ridge_lift(sq, minus, 0.0).scaled(-0.25)};
  return compose(concat(parts), both);
}

}  // namespace barron_pde
