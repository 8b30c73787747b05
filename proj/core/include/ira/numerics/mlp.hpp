#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "ira/numerics/rng.hpp"
#include "ira/numerics/tensor.hpp"

namespace ira::numerics {

enum class Activation { relu, tanh, identity };

std::string_view to_string(Activation a);

struct DenseLayer {
  Matrix weight;  // [out x in]
  RowVector bias;  // [out]
  Activation activation = Activation::identity;

  Eigen::Index in_dim() const { return weight.cols(); }
  Eigen::Index out_dim() const { return weight.rows(); }
};

/// Feed-forward network. The last layer is the linear head; everything below
/// it is the encoder whose final activation is the learned representation.
struct MlpParams {
  std::vector<DenseLayer> layers;

  Eigen::Index in_dim() const { return layers.front().in_dim(); }
  Eigen::Index out_dim() const { return layers.back().out_dim(); }
  std::size_t parameter_count() const;

  /// Throws DimensionError if consecutive layers disagree.
  void validate() const;
};

struct LayerGrads {
  Matrix weight;
  RowVector bias;
};

/// Gradient (or Adam moment) storage shaped like an MlpParams.
struct MlpGrads {
  std::vector<LayerGrads> layers;

  static MlpGrads zeros_like(const MlpParams& params);

  MlpGrads& operator+=(const MlpGrads& other);
  MlpGrads& operator*=(double scale);
  bool all_finite() const;
};

/// Inputs and post-activation outputs of every layer:
/// activations[0] is the network input, activations[i + 1] the output of layer i.
struct ForwardPass {
  std::vector<Matrix> activations;

  const Matrix& input() const { return activations.front(); }
  const Matrix& output() const { return activations.back(); }
  /// Output of layer `layer` (0-based).
  const Matrix& layer_output(std::size_t layer) const { return activations.at(layer + 1); }
};

ForwardPass mlp_forward(const MlpParams& params, const Matrix& input);

/// Forward pass that keeps only the output.
Matrix mlp_predict(const MlpParams& params, const Matrix& input);

struct BackwardOptions {
  static constexpr std::size_t all_layers = std::numeric_limits<std::size_t>::max();

  /// Number of layers to backpropagate through, counted from the input. With the
  /// default the incoming gradient is w.r.t. the network output; with `top = L - 1`
  /// it is w.r.t. the encoder output and the head receives a zero gradient.
  std::size_t top = all_layers;
  bool param_grads = true;
  bool input_grad = true;
};

struct BackwardResult {
  MlpGrads grads;
  Matrix input_grad;
};

/// Reverse-mode gradients of <output, output_grad> with respect to the
/// parameters and the input.
BackwardResult mlp_backward(const MlpParams& params, const ForwardPass& cache,
                            const Matrix& output_grad, const BackwardOptions& options = {});

enum class InitScheme {
  /// Every layer U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  fan_in,
  /// Like fan_in, except the final layer is U(-3e-3, 3e-3).
  actor,
};

/// `layer_sizes` lists widths from input to output; `activations` has one
/// entry per layer (layer_sizes.size() - 1).
MlpParams init_params(std::span<const std::size_t> layer_sizes,
                      std::span<const Activation> activations, Rng& rng, InitScheme scheme);

inline constexpr double kActorOutputInitBound = 3e-3;

// Flat views used by the finite-difference oracle and the checkpoint writer.
// Order: layer by layer, weight row-major then bias.
std::vector<double> flatten(const MlpParams& params);
std::vector<double> flatten(const MlpGrads& grads);
void unflatten(std::span<const double> flat, MlpParams& params);

}  // namespace ira::numerics
