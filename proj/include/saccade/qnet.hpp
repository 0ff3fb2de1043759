#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "saccade/env.hpp"

namespace saccade {

using QValues = std::array<double, kNumActions>;

// Index of the largest Q-value, ties broken by lowest action index.
Action argmax_action(const QValues& q);

// Weights and biases of the MLP Q-approximator. Treated as an immutable
// value: updates produce a new NetworkParams.
struct NetworkParams {
  std::vector<int> layer_dims;               // {input, hidden..., output}
  std::vector<std::vector<double>> weights;  // weights[l]: dims[l+1] x dims[l], row-major
  std::vector<std::vector<double>> biases;   // biases[l]: dims[l+1]

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  int num_layers() const { return static_cast<int>(weights.size()); }
};

// Same shape as the NetworkParams it differentiates.
struct Gradient {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

struct Hyperparams {
  double alpha = 1e-3;            // SGD learning rate
  double gamma = 0.95;            // discount
  double epsilon_start = 1.0;
  double epsilon_end = 0.1;
  int epsilon_decay_steps = 10000;
  int batch_size = 32;
  int replay_capacity = 10000;
  int hidden_size = 128;
  int max_episode_steps = 0;      // 0 = 10 * (width + height)
  int warmup_experiences = 0;     // 0 = batch_size
  uint64_t seed = 0;

  int effective_warmup() const {
    return warmup_experiences > batch_size ? warmup_experiences : batch_size;
  }

  // Throws std::invalid_argument when any field is out of range.
  void validate() const;
};

// Per-layer pre-activations and layer inputs kept for the backward pass.
struct ForwardCache {
  std::vector<std::vector<double>> acts;  // acts[l] = input of layer l; acts.back() = output
  std::vector<std::vector<double>> zs;    // zs[l] = pre-activation of layer l
};

// Glorot-uniform weights, zero biases, output dimension fixed at 4.
NetworkParams init_params(int input_dim, int hidden_dim, uint64_t seed);

// Hidden layers apply max(0, .) after the affine map; the output layer
// stays linear.
std::pair<QValues, ForwardCache> forward(const NetworkParams& params,
                                         const std::vector<double>& x);
QValues predict(const NetworkParams& params, const std::vector<double>& x);

// Mean over the batch of squared error summed across the four outputs.
double loss(const NetworkParams& params, const std::vector<std::vector<double>>& states,
            const std::vector<QValues>& targets);

// Analytic gradient of loss(); caches must come from forward passes of
// `params` over `states` in order.
Gradient backward(const NetworkParams& params, const std::vector<std::vector<double>>& states,
                  const std::vector<QValues>& targets, const std::vector<ForwardCache>& caches);

// theta' = theta - alpha * grad.
NetworkParams sgd_step(NetworkParams params, const Gradient& grad, double alpha);

// One aggregated SGD step on the batch-mean gradient; returns the updated
// parameters and the pre-update loss.
std::pair<NetworkParams, double> train_minibatch(NetworkParams params,
                                                 const std::vector<std::vector<double>>& states,
                                                 const std::vector<QValues>& targets, double alpha);

}  // namespace saccade
