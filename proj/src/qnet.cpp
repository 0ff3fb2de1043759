#include "saccade/qnet.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "saccade/rng.hpp"

namespace saccade {

namespace {

void check_lengths(size_t states, size_t targets) {
  if (states == 0 || states != targets) {
    throw std::invalid_argument("batch size mismatch: " + std::to_string(states) +
                                " states vs " + std::to_string(targets) + " targets");
  }
}

// Affine map into `out`; `relu` selects the hidden-layer activation.
void layer_forward(const std::vector<double>& w, const std::vector<double>& b,
                   const std::vector<double>& in, std::vector<double>& z,
                   std::vector<double>& out, bool relu) {
  const size_t rows = b.size();
  const size_t cols = in.size();
  z.resize(rows);
  out.resize(rows);
  for (size_t r = 0; r < rows; ++r) {
    const double* wr = w.data() + r * cols;
    double acc = b[r];
    for (size_t c = 0; c < cols; ++c) acc += wr[c] * in[c];
    z[r] = acc;
    out[r] = relu ? std::max(0.0, acc) : acc;
  }
}

}  // namespace

Action argmax_action(const QValues& q) {
  int best = 0;
  for (int i = 1; i < kNumActions; ++i) {
    if (q[i] > q[best]) best = i;
  }
  return static_cast<Action>(best);
}

void Hyperparams::validate() const {
  if (!(alpha > 0)) throw std::invalid_argument("alpha must be positive");
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("gamma must be in (0, 1)");
  if (!(epsilon_end >= 0 && epsilon_end <= epsilon_start && epsilon_start <= 1)) {
    throw std::invalid_argument("epsilon schedule must satisfy 0 <= end <= start <= 1");
  }
  if (epsilon_decay_steps < 0) throw std::invalid_argument("epsilon_decay_steps must be >= 0");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (replay_capacity < batch_size) {
    throw std::invalid_argument("replay_capacity must be >= batch_size");
  }
  if (hidden_size < 1) throw std::invalid_argument("hidden_size must be >= 1");
  if (max_episode_steps < 0) throw std::invalid_argument("max_episode_steps must be >= 0");
  if (warmup_experiences < 0) throw std::invalid_argument("warmup_experiences must be >= 0");
}

NetworkParams init_params(int input_dim, int hidden_dim, uint64_t seed) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw std::invalid_argument("network dimensions must be >= 1");
  }
  Rng rng(seed);
  NetworkParams params;
  params.layer_dims = {input_dim, hidden_dim, kNumActions};
  for (int l = 0; l + 1 < static_cast<int>(params.layer_dims.size()); ++l) {
    const int fan_in = params.layer_dims[l];
    const int fan_out = params.layer_dims[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::vector<double> w(static_cast<size_t>(fan_in) * fan_out);
    for (double& v : w) v = (2.0 * rng.next_double() - 1.0) * limit;
    params.weights.push_back(std::move(w));
    params.biases.emplace_back(fan_out, 0.0);
  }
  return params;
}

std::pair<QValues, ForwardCache> forward(const NetworkParams& params,
                                         const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != params.input_dim()) {
    throw std::invalid_argument("input length " + std::to_string(x.size()) +
                                " does not match network input dim " +
                                std::to_string(params.input_dim()));
  }
  ForwardCache cache;
  cache.acts.resize(params.num_layers() + 1);
  cache.zs.resize(params.num_layers());
  cache.acts[0] = x;
  for (int l = 0; l < params.num_layers(); ++l) {
    const bool hidden = l + 1 < params.num_layers();
    layer_forward(params.weights[l], params.biases[l], cache.acts[l], cache.zs[l],
                  cache.acts[l + 1], hidden);
  }
  QValues q{};
  for (int i = 0; i < kNumActions; ++i) q[i] = cache.acts.back()[i];
  return {q, std::move(cache)};
}

QValues predict(const NetworkParams& params, const std::vector<double>& x) {
  return forward(params, x).first;
}

double loss(const NetworkParams& params, const std::vector<std::vector<double>>& states,
            const std::vector<QValues>& targets) {
  check_lengths(states.size(), targets.size());
  double total = 0.0;
  for (size_t i = 0; i < states.size(); ++i) {
    QValues q = predict(params, states[i]);
    for (int a = 0; a < kNumActions; ++a) {
      const double diff = q[a] - targets[i][a];
      total += diff * diff;
    }
  }
  return total / static_cast<double>(states.size());
}

Gradient backward(const NetworkParams& params, const std::vector<std::vector<double>>& states,
                  const std::vector<QValues>& targets, const std::vector<ForwardCache>& caches) {
  check_lengths(states.size(), targets.size());
  if (caches.size() != states.size()) {
    throw std::invalid_argument("cache count does not match batch size");
  }
  const int layers = params.num_layers();
  Gradient grad;
  for (int l = 0; l < layers; ++l) {
    grad.weights.emplace_back(params.weights[l].size(), 0.0);
    grad.biases.emplace_back(params.biases[l].size(), 0.0);
  }

  std::vector<double> delta, next_delta;
  for (size_t i = 0; i < states.size(); ++i) {
    const ForwardCache& cache = caches[i];
    if (cache.acts.size() != static_cast<size_t>(layers) + 1 ||
        cache.acts[0].size() != states[i].size()) {
      throw std::invalid_argument("stale forward cache for sample " + std::to_string(i));
    }
    // d loss / d output for the squared error summed over the four outputs
    delta.assign(params.output_dim(), 0.0);
    for (int a = 0; a < kNumActions; ++a) {
      delta[a] = 2.0 * (cache.acts.back()[a] - targets[i][a]);
    }
    for (int l = layers - 1; l >= 0; --l) {
      const std::vector<double>& in = cache.acts[l];
      const size_t rows = params.biases[l].size();
      const size_t cols = in.size();
      for (size_t r = 0; r < rows; ++r) {
        grad.biases[l][r] += delta[r];
        double* gw = grad.weights[l].data() + r * cols;
        const double d = delta[r];
        for (size_t c = 0; c < cols; ++c) gw[c] += d * in[c];
      }
      if (l > 0) {
        next_delta.assign(cols, 0.0);
        for (size_t r = 0; r < rows; ++r) {
          const double* wr = params.weights[l].data() + r * cols;
          const double d = delta[r];
          for (size_t c = 0; c < cols; ++c) next_delta[c] += wr[c] * d;
        }
        // rectifier derivative from the previous layer's pre-activation
        for (size_t c = 0; c < cols; ++c) {
          if (cache.zs[l - 1][c] <= 0.0) next_delta[c] = 0.0;
        }
        std::swap(delta, next_delta);
      }
    }
  }
  const double inv_batch = 1.0 / static_cast<double>(states.size());
  for (int l = 0; l < layers; ++l) {
    for (double& v : grad.weights[l]) v *= inv_batch;
    for (double& v : grad.biases[l]) v *= inv_batch;
  }
  return grad;
}

NetworkParams sgd_step(NetworkParams params, const Gradient& grad, double alpha) {
  if (grad.weights.size() != params.weights.size()) {
    throw std::invalid_argument("gradient layer count does not match parameters");
  }
  for (size_t l = 0; l < params.weights.size(); ++l) {
    if (grad.weights[l].size() != params.weights[l].size() ||
        grad.biases[l].size() != params.biases[l].size()) {
      throw std::invalid_argument("gradient shape does not match parameters at layer " +
                                  std::to_string(l));
    }
    for (size_t i = 0; i < params.weights[l].size(); ++i) {
      params.weights[l][i] -= alpha * grad.weights[l][i];
    }
    for (size_t i = 0; i < params.biases[l].size(); ++i) {
      params.biases[l][i] -= alpha * grad.biases[l][i];
    }
  }
  return params;
}

std::pair<NetworkParams, double> train_minibatch(NetworkParams params,
                                                 const std::vector<std::vector<double>>& states,
                                                 const std::vector<QValues>& targets,
                                                 double alpha) {
  check_lengths(states.size(), targets.size());
  std::vector<ForwardCache> caches;
  caches.reserve(states.size());
  double total = 0.0;
  for (size_t i = 0; i < states.size(); ++i) {
    auto [q, cache] = forward(params, states[i]);
    for (int a = 0; a < kNumActions; ++a) {
      const double diff = q[a] - targets[i][a];
      total += diff * diff;
    }
    caches.push_back(std::move(cache));
  }
  const double batch_loss = total / static_cast<double>(states.size());
  if (!std::isfinite(batch_loss)) {
    throw std::runtime_error("training diverged: non-finite minibatch loss");
  }
  Gradient grad = backward(params, states, targets, caches);
  return {sgd_step(std::move(params), grad, alpha), batch_loss};
}

}  // namespace saccade
