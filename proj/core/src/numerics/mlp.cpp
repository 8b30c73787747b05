#include "ira/numerics/mlp.hpp"

#include <cmath>
#include <string>

#include "ira/error.hpp"

namespace ira::numerics {

namespace {

void apply_activation(Activation a, Matrix& z) {
  switch (a) {
    case Activation::relu:
      z = z.cwiseMax(0.0);
      break;
    case Activation::tanh:
      z = z.array().tanh().matrix();
      break;
    case Activation::identity:
      break;
  }
}

// Turns d(loss)/d(output) into d(loss)/d(pre-activation), given the output.
void activation_backward(Activation a, const Matrix& output, Matrix& grad) {
  switch (a) {
    case Activation::relu:
      grad = (output.array() > 0.0).select(grad, 0.0);
      break;
    case Activation::tanh:
      grad.array() *= 1.0 - output.array().square();
      break;
    case Activation::identity:
      break;
  }
}

std::string layer_tag(std::size_t i) { return "layer " + std::to_string(i); }

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::relu:
      return "relu";
    case Activation::tanh:
      return "tanh";
    case Activation::identity:
      return "identity";
  }
  return "unknown";
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += static_cast<std::size_t>(layer.weight.size() + layer.bias.size());
  return n;
}

void MlpParams::validate() const {
  if (layers.empty()) throw DimensionError("MLP has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& layer = layers[i];
    if (layer.bias.size() != layer.weight.rows()) {
      throw DimensionError(layer_tag(i) + ": bias has " + std::to_string(layer.bias.size()) +
                           " entries for " + std::to_string(layer.weight.rows()) + " outputs");
    }
    if (i > 0 && layers[i - 1].out_dim() != layer.in_dim()) {
      throw DimensionError(layer_tag(i) + ": expects " + std::to_string(layer.in_dim()) +
                           " inputs but the previous layer produces " +
                           std::to_string(layers[i - 1].out_dim()));
    }
  }
}

MlpGrads MlpGrads::zeros_like(const MlpParams& params) {
  MlpGrads g;
  g.layers.reserve(params.layers.size());
  for (const auto& layer : params.layers) {
    g.layers.push_back({Matrix::Zero(layer.weight.rows(), layer.weight.cols()),
                        RowVector::Zero(layer.bias.size())});
  }
  return g;
}

MlpGrads& MlpGrads::operator+=(const MlpGrads& other) {
  if (other.layers.size() != layers.size()) throw DimensionError("MlpGrads: layer count mismatch");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    layers[i].weight += other.layers[i].weight;
    layers[i].bias += other.layers[i].bias;
  }
  return *this;
}

MlpGrads& MlpGrads::operator*=(double scale) {
  for (auto& layer : layers) {
    layer.weight *= scale;
    layer.bias *= scale;
  }
  return *this;
}

bool MlpGrads::all_finite() const {
  for (const auto& layer : layers) {
    if (!numerics::all_finite(layer.weight) || !numerics::all_finite(layer.bias)) return false;
  }
  return true;
}

ForwardPass mlp_forward(const MlpParams& params, const Matrix& input) {
  if (params.layers.empty()) throw DimensionError("mlp_forward: MLP has no layers");
  ForwardPass pass;
  pass.activations.reserve(params.layers.size() + 1);
  pass.activations.push_back(input);
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const auto& layer = params.layers[i];
    const Matrix& x = pass.activations.back();
    if (x.cols() != layer.in_dim()) {
      throw DimensionError("mlp_forward: " + layer_tag(i) + " expects " +
                           std::to_string(layer.in_dim()) + " inputs, got " +
                           shape_string(x.rows(), x.cols()));
    }
    Matrix z(x.rows(), layer.out_dim());
    z.noalias() = x * layer.weight.transpose();
    z.rowwise() += layer.bias;
    apply_activation(layer.activation, z);
    pass.activations.push_back(std::move(z));
  }
  return pass;
}

Matrix mlp_predict(const MlpParams& params, const Matrix& input) {
  if (params.layers.empty()) throw DimensionError("mlp_predict: MLP has no layers");
  Matrix x = input;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const auto& layer = params.layers[i];
    if (x.cols() != layer.in_dim()) {
      throw DimensionError("mlp_predict: " + layer_tag(i) + " expects " +
                           std::to_string(layer.in_dim()) + " inputs, got " +
                           shape_string(x.rows(), x.cols()));
    }
    Matrix z(x.rows(), layer.out_dim());
    z.noalias() = x * layer.weight.transpose();
    z.rowwise() += layer.bias;
    apply_activation(layer.activation, z);
    x = std::move(z);
  }
  return x;
}

BackwardResult mlp_backward(const MlpParams& params, const ForwardPass& cache,
                            const Matrix& output_grad, const BackwardOptions& options) {
  const std::size_t n_layers = params.layers.size();
  if (cache.activations.size() != n_layers + 1) {
    throw DimensionError("mlp_backward: cache holds " + std::to_string(cache.activations.size()) +
                         " activations for a " + std::to_string(n_layers) + "-layer network");
  }
  const std::size_t top = options.top == BackwardOptions::all_layers ? n_layers : options.top;
  if (top == 0 || top > n_layers) {
    throw DimensionError("mlp_backward: cannot start from layer " + std::to_string(top));
  }
  for (std::size_t i = 0; i < n_layers; ++i) {
    const auto& x = cache.activations[i];
    const auto& y = cache.activations[i + 1];
    if (x.cols() != params.layers[i].in_dim() || y.cols() != params.layers[i].out_dim() ||
        y.rows() != x.rows()) {
      throw DimensionError("mlp_backward: cache does not match " + layer_tag(i));
    }
  }
  const Matrix& top_out = cache.activations[top];
  if (output_grad.rows() != top_out.rows() || output_grad.cols() != top_out.cols()) {
    throw DimensionError("mlp_backward: gradient " +
                         shape_string(output_grad.rows(), output_grad.cols()) + " vs output " +
                         shape_string(top_out.rows(), top_out.cols()));
  }

  BackwardResult result;
  if (options.param_grads) result.grads = MlpGrads::zeros_like(params);

  Matrix grad = output_grad;
  for (std::size_t i = top; i-- > 0;) {
    const auto& layer = params.layers[i];
    activation_backward(layer.activation, cache.activations[i + 1], grad);
    if (options.param_grads) {
      result.grads.layers[i].weight.noalias() = grad.transpose() * cache.activations[i];
      result.grads.layers[i].bias = grad.colwise().sum();
    }
    if (i > 0 || options.input_grad) {
      Matrix below(grad.rows(), layer.in_dim());
      below.noalias() = grad * layer.weight;
      grad = std::move(below);
    }
  }
  if (options.input_grad) result.input_grad = std::move(grad);
  return result;
}

MlpParams init_params(std::span<const std::size_t> layer_sizes,
                      std::span<const Activation> activations, Rng& rng, InitScheme scheme) {
  if (layer_sizes.size() < 2) throw DimensionError("init_params: need at least one layer");
  if (activations.size() != layer_sizes.size() - 1) {
    throw DimensionError("init_params: " + std::to_string(activations.size()) +
                         " activations for " + std::to_string(layer_sizes.size() - 1) + " layers");
  }
  for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
    if (layer_sizes[i] == 0) {
      throw DimensionError("init_params: width " + std::to_string(i) + " is zero");
    }
  }
  MlpParams params;
  const std::size_t n_layers = layer_sizes.size() - 1;
  for (std::size_t i = 0; i < n_layers; ++i) {
    const auto in = static_cast<Eigen::Index>(layer_sizes[i]);
    const auto out = static_cast<Eigen::Index>(layer_sizes[i + 1]);
    const bool actor_head = scheme == InitScheme::actor && i + 1 == n_layers;
    const double bound = actor_head ? kActorOutputInitBound : 1.0 / std::sqrt(static_cast<double>(in));
    DenseLayer layer{Matrix(out, in), RowVector(out), activations[i]};
    for (Eigen::Index r = 0; r < out; ++r)
      for (Eigen::Index c = 0; c < in; ++c) layer.weight(r, c) = rng.uniform(-bound, bound);
    for (Eigen::Index r = 0; r < out; ++r) layer.bias(r) = rng.uniform(-bound, bound);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

std::vector<double> flatten(const MlpParams& params) {
  std::vector<double> flat;
  flat.reserve(params.parameter_count());
  for (const auto& layer : params.layers) {
    flat.insert(flat.end(), layer.weight.data(), layer.weight.data() + layer.weight.size());
    flat.insert(flat.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
  }
  return flat;
}

std::vector<double> flatten(const MlpGrads& grads) {
  std::vector<double> flat;
  for (const auto& layer : grads.layers) {
    flat.insert(flat.end(), layer.weight.data(), layer.weight.data() + layer.weight.size());
    flat.insert(flat.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
  }
  return flat;
}

void unflatten(std::span<const double> flat, MlpParams& params) {
  if (flat.size() != params.parameter_count()) {
    throw DimensionError("unflatten: " + std::to_string(flat.size()) + " values for " +
                         std::to_string(params.parameter_count()) + " parameters");
  }
  std::size_t at = 0;
  for (auto& layer : params.layers) {
    std::copy_n(flat.data() + at, layer.weight.size(), layer.weight.data());
    at += static_cast<std::size_t>(layer.weight.size());
    std::copy_n(flat.data() + at, layer.bias.size(), layer.bias.data());
    at += static_cast<std::size_t>(layer.bias.size());
  }
}

}  // namespace ira::numerics
