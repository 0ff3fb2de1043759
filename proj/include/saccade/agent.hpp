#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "saccade/env.hpp"
#include "saccade/metrics.hpp"
#include "saccade/qnet.hpp"
#include "saccade/replay.hpp"

namespace saccade {

enum class MazeFamily { random_fixed, circle_fresh, path_fresh };

const char* family_name(MazeFamily family);
std::optional<MazeFamily> parse_family(const std::string& name);

// One experiment run: maze family, geometry, training length and outputs.
struct ExperimentConfig {
  MazeFamily family = MazeFamily::random_fixed;
  int width = 10;
  int height = 10;
  int window = 3;
  int episodes = 500;
  Hyperparams hyper;
  RewardConfig reward;
  std::string out_dir = "out";
  bool deterministic = false;
  int checkpoint_every = 50;
  int render_every = 0;  // 0 = no renders

  int effective_max_steps() const {
    return hyper.max_episode_steps > 0 ? hyper.max_episode_steps : 10 * (width + height);
  }
  void validate() const;
};

// Linear decay from epsilon_start to epsilon_end over epsilon_decay_steps;
// exactly epsilon_end from the decay horizon on.
double epsilon_at(const Hyperparams& hyper, int64_t global_step);

// Actor-side episode state.
struct ActorState {
  Maze maze;
  Position pos;
  Position start;
  int window = 3;
  int steps_in_episode = 0;
  int episode = 0;
  int64_t global_step = 0;
  double epsilon = 1.0;
};

// States and selective target vectors for one minibatch.
struct TargetBatch {
  std::vector<std::vector<double>> states;
  std::vector<QValues> targets;
};

// Epsilon-greedy over the Q-vector; greedy ties break toward the lowest
// action index (N, E, S, W).
Action select_action(const QValues& q, double epsilon, Rng& rng);

// Selective targets: the acted entry gets r (terminal) or
// r + gamma * max_a' Q(s', a'); every other entry copies the prediction.
// Both forward passes use the same current parameters.
TargetBatch build_targets(const std::vector<Experience>& minibatch, const NetworkParams& params,
                          double gamma);

// Observe, pick an action, step the environment, store the experience and
// advance the counters and epsilon schedule.
Experience actor_step(ActorState& state, const NetworkParams& params, ReplayMemory& memory,
                      const Hyperparams& hyper, const RewardConfig& reward, Rng& rng);

struct LearnerResult {
  bool trained = false;  // false while the memory is below the warmup threshold
  double loss = 0.0;
};

// sample -> build_targets -> train_minibatch. No-op while the memory holds
// fewer than hyper.effective_warmup() experiences.
LearnerResult learner_step(NetworkParams& params, const ReplayMemory& memory,
                           const Hyperparams& hyper, Rng& rng);

// Shared parameter store: atomic snapshot reads and replaces.
class ParamStore {
 public:
  explicit ParamStore(NetworkParams params)
      : current_(std::make_shared<const NetworkParams>(std::move(params))) {}

  std::shared_ptr<const NetworkParams> snapshot() const {
    std::lock_guard lock(mutex_);
    return current_;
  }

  void publish(NetworkParams params) {
    auto next = std::make_shared<const NetworkParams>(std::move(params));
    std::lock_guard lock(mutex_);
    current_ = std::move(next);
  }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const NetworkParams> current_;
};

struct TrainingReport {
  std::vector<EpisodeRecord> records;
  NetworkParams final_params;
  int64_t total_steps = 0;
};

// Runs the full experiment: episode loop per the family protocol, episode
// CSV + convergence CSV + periodic checkpoints under config.out_dir.
// Deterministic mode interleaves one learner step per actor step on a
// single thread; otherwise actor and learner run as concurrent flows.
TrainingReport run_training(const ExperimentConfig& config);

struct EvalReport {
  int episodes = 0;
  double reach_rate = 0.0;
  double mean_ratio = 0.0;
  double mean_steps = 0.0;
  std::vector<EpisodeRecord> records;
};

// Greedy (epsilon = 0) episodes under the family protocol.
EvalReport evaluate(const NetworkParams& params, const ExperimentConfig& config);

}  // namespace saccade
