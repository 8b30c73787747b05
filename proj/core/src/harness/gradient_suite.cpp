#include "ira/harness/gradient_suite.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "ira/agents/agent.hpp"
#include "ira/numerics/gradcheck.hpp"
#include "ira/numerics/mlp.hpp"

namespace ira::harness {

namespace {

using numerics::Activation;
using numerics::Matrix;
using numerics::MlpParams;
using numerics::Rng;
using numerics::Vector;

// Central differences straddle a relu kink when a pre-activation is within
// about h of zero; such draws are replaced.
constexpr double kKinkMargin = 1e-3;

constexpr std::array<const char*, 5> kKinds{"mlp-params", "mlp-input", "critic-td", "critic-td-rde", "actor-gag"};

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(lo, hi);
  }
  return m;
}

int random_int(int lo, int hi, Rng& rng) {
  return lo + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(hi - lo + 1)));
}

std::vector<std::size_t> random_hidden(Rng& rng) {
  std::vector<std::size_t> hidden(static_cast<std::size_t>(random_int(1, 2, rng)));
  for (auto& h : hidden) h = static_cast<std::size_t>(random_int(4, 16, rng));
  return hidden;
}

MlpParams random_net(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out,
                     Activation hidden_act, Activation out_act, Rng& rng) {
  std::vector<std::size_t> sizes{in};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  std::vector<Activation> acts(hidden.size(), hidden_act);
  acts.push_back(out_act);
  return numerics::init_params(sizes, acts, rng, numerics::InitScheme::fan_in);
}

Activation random_activation(Rng& rng) {
  static constexpr std::array<Activation, 3> all{Activation::relu, Activation::tanh, Activation::identity};
  return all[rng.uniform_index(all.size())];
}

// Smallest |pre-activation| over the relu units touched by `input`.
double relu_margin(const MlpParams& net, const Matrix& input) {
  const auto pass = numerics::mlp_forward(net, input);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const auto& layer = net.layers[i];
    if (layer.activation != Activation::relu) continue;
    Matrix z = pass.activations[i] * layer.weight.transpose();
    z.rowwise() += layer.bias;
    margin = std::min(margin, z.cwiseAbs().minCoeff());
  }
  return margin;
}

double squared_error(const Matrix& out, const Matrix& target) {
  return (out - target).squaredNorm() / static_cast<double>(out.rows());
}

struct Draw {
  numerics::ScalarFunction f;
  std::vector<double> x0;
  std::vector<double> grad;
  double margin = std::numeric_limits<double>::infinity();
};

Draw draw_case(int kind, Rng& rng) {
  const int batch = random_int(2, 6, rng);
  const int state_dim = random_int(1, 4, rng);
  const int action_dim = random_int(1, 3, rng);
  const auto hidden = random_hidden(rng);

  Draw d;
  auto& f = d.f;
  auto& x0 = d.x0;
  auto& grad = d.grad;

  if (kind == 0 || kind == 1) {
    const auto in = static_cast<std::size_t>(state_dim + action_dim);
    const auto out = static_cast<std::size_t>(action_dim);
    const MlpParams net = random_net(in, hidden, out, random_activation(rng), random_activation(rng), rng);
    const Matrix input = random_matrix(batch, static_cast<Eigen::Index>(in), -1.0, 1.0, rng);
    const Matrix target = random_matrix(batch, static_cast<Eigen::Index>(out), -1.0, 1.0, rng);
    const auto pass = numerics::mlp_forward(net, input);
    const Matrix out_grad = 2.0 * (pass.output() - target) / static_cast<double>(batch);
    const auto back = numerics::mlp_backward(net, pass, out_grad);
    d.margin = relu_margin(net, input);
    if (kind == 0) {
      x0 = numerics::flatten(net);
      grad = numerics::flatten(back.grads);
      f = [work = net, input, target](std::span<const double> p) mutable {
        numerics::unflatten(p, work);
        return squared_error(numerics::mlp_predict(work, input), target);
      };
    } else {
      x0.assign(input.data(), input.data() + input.size());
      grad.assign(back.input_grad.data(), back.input_grad.data() + back.input_grad.size());
      f = [net, input, target](std::span<const double> p) {
        Matrix x = input;
        std::copy(p.begin(), p.end(), x.data());
        return squared_error(numerics::mlp_predict(net, x), target);
      };
    }
  } else if (kind == 2 || kind == 3) {
    const auto in = static_cast<std::size_t>(state_dim + action_dim);
    const MlpParams critic = random_net(in, hidden, 1, Activation::relu, Activation::identity, rng);
    const MlpParams target_net = random_net(in, hidden, 1, Activation::relu, Activation::identity, rng);
    const Matrix states = random_matrix(batch, state_dim, -1.0, 1.0, rng);
    const Matrix actions = random_matrix(batch, action_dim, -1.0, 1.0, rng);
    const Matrix pi = random_matrix(batch, action_dim, -1.0, 1.0, rng);
    const Matrix sub = random_matrix(batch, action_dim, -1.0, 1.0, rng);
    Vector y(batch);
    for (int i = 0; i < batch; ++i) y(i) = rng.uniform(-2.0, 2.0);
    agents::RdeInputs rde{&states, &pi, &sub, rng.uniform(0.1, 1.0)};
    const agents::RdeInputs* rde_ptr = kind == 3 ? &rde : nullptr;
    const auto loss = agents::critic_loss_and_grads(critic, target_net, states, actions, y, rde_ptr);
    x0 = numerics::flatten(critic);
    grad = numerics::flatten(loss.grads);
    d.margin = relu_margin(critic, agents::critic_input(states, actions));
    if (kind == 3) d.margin = std::min(d.margin, relu_margin(critic, agents::critic_input(states, pi)));
    const bool with_rde = rde_ptr != nullptr;
    const double alpha = rde.alpha;
    f = [work = critic, target_net, states, actions, y, pi, sub, alpha, with_rde](std::span<const double> p) mutable {
      numerics::unflatten(p, work);
      const agents::RdeInputs inputs{&states, &pi, &sub, alpha};
      const auto l = agents::critic_loss_and_grads(work, target_net, states, actions, y,
                                                   with_rde ? &inputs : nullptr);
      return l.td_loss + l.rde_value;
    };
  } else {
    const double bound = rng.uniform(0.5, 2.0);
    const MlpParams actor = random_net(static_cast<std::size_t>(state_dim), hidden,
                                       static_cast<std::size_t>(action_dim), Activation::relu, Activation::tanh, rng);
    const MlpParams critic = random_net(static_cast<std::size_t>(state_dim + action_dim), random_hidden(rng), 1,
                                        Activation::relu, Activation::identity, rng);
    const Matrix states = random_matrix(batch, state_dim, -1.0, 1.0, rng);
    const Matrix anchors = random_matrix(batch, action_dim, -bound, bound, rng);
    const double mu = rng.uniform(0.1, 1.5);
    const auto loss = agents::actor_loss_and_grads(actor, critic, states, &anchors, mu, bound);
    x0 = numerics::flatten(actor);
    grad = numerics::flatten(loss.grads);
    d.margin = std::min(relu_margin(actor, states),
                        relu_margin(critic, agents::critic_input(states, agents::policy_actions(actor, states, bound))));
    f = [work = actor, critic, states, anchors, mu, bound](std::span<const double> p) mutable {
      numerics::unflatten(p, work);
      return agents::actor_loss_and_grads(work, critic, states, &anchors, mu, bound).value;
    };
  }

  return d;
}

GradCase run_case(int index, Rng& rng, std::size_t probes, double h) {
  GradCase c;
  c.index = index;
  const int kind = index % static_cast<int>(kKinds.size());
  c.kind = kKinds[static_cast<std::size_t>(kind)];
  Draw d = draw_case(kind, rng);
  while (d.margin < kKinkMargin) {
    ++c.redraws;
    d = draw_case(kind, rng);
  }
  c.parameter_count = d.x0.size();
  c.max_relative_error = numerics::finite_diff_check(d.f, d.x0, d.grad, probes, h, rng);
  return c;
}

}  // namespace

GradSuiteResult run_gradient_suite(std::uint64_t seed, int cases, std::size_t probes, double h) {
  Rng rng = Rng::stream(seed, "gradient-suite");
  GradSuiteResult result;
  for (int i = 0; i < cases; ++i) {
    result.cases.push_back(run_case(i, rng, probes, h));
    result.max_relative_error = std::max(result.max_relative_error, result.cases.back().max_relative_error);
  }
  return result;
}

}  // namespace ira::harness
