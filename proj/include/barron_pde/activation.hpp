#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "barron_pde/error.hpp"

namespace barron_pde {

enum class Activation { relu, tanh, softplus };

enum class Smoothness { piecewise_linear, smooth_bounded, smooth_unbounded };

// relu: weight factor |w| + |b|.  bounded: |w| + 1.
enum class NormConvention { relu, bounded };

inline std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::softplus: return "softplus";
  }
  return "?";
}

inline std::optional<Activation> parse_activation(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "softplus") return Activation::softplus;
  return std::nullopt;
}

inline Smoothness smoothness(Activation act) {
  switch (act) {
    case Activation::relu: return Smoothness::piecewise_linear;
    case Activation::tanh: return Smoothness::smooth_bounded;
    case Activation::softplus: return Smoothness::smooth_unbounded;
  }
  return Smoothness::piecewise_linear;
}

// Softplus grows linearly, so the bias genuinely matters and it shares the
// relu convention. Only activations with finite limits at +-inf use |w|+1.
inline NormConvention norm_convention(Activation act) {
  return act == Activation::tanh ? NormConvention::bounded : NormConvention::relu;
}

inline bool is_bounded(Activation act) { return smoothness(act) == Smoothness::smooth_bounded; }

/// Whether sigma'' exists as an ordinary function (false for relu, where it
/// is a Dirac mass at the origin).
inline bool has_second_derivative(Activation act) { return act != Activation::relu; }

inline double sigma(Activation act, double s) {
  switch (act) {
    case Activation::relu: return s > 0.0 ? s : 0.0;
    case Activation::tanh: return std::tanh(s);
    case Activation::softplus:
      // log(1 + e^s) without overflow
      return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
  }
  return 0.0;
}

inline double logistic(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

inline double sigma_prime(Activation act, double s) {
  switch (act) {
    case Activation::relu: return s > 0.0 ? 1.0 : 0.0;
    case Activation::tanh: {
      const double t = std::tanh(s);
      return 1.0 - t * t;
    }
    case Activation::softplus: return logistic(s);
  }
  return 0.0;
}

inline double sigma_second(Activation act, double s) {
  switch (act) {
    case Activation::relu:
      throw InvalidArgument("relu'' is a distribution and cannot be evaluated pointwise");
    case Activation::tanh: {
      const double t = std::tanh(s);
      return -2.0 * t * (1.0 - t * t);
    }
    case Activation::softplus: {
      const double p = logistic(s);
      return p * (1.0 - p);
    }
  }
  return 0.0;
}

/// Weight factor of one neuron under the activation's norm convention.
inline double weight_factor(Activation act, double w_norm, double b) {
  return norm_convention(act) == NormConvention::relu ? w_norm + std::abs(b) : w_norm + 1.0;
}

}  // namespace barron_pde
