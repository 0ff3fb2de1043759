#include "saccade/agent.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "saccade/checkpoint.hpp"

namespace saccade {

const char* family_name(MazeFamily family) {
  switch (family) {
    case MazeFamily::random_fixed: return "random";
    case MazeFamily::circle_fresh: return "circle";
    case MazeFamily::path_fresh: return "path";
  }
  return "?";
}

std::optional<MazeFamily> parse_family(const std::string& name) {
  if (name == "random") return MazeFamily::random_fixed;
  if (name == "circle") return MazeFamily::circle_fresh;
  if (name == "path") return MazeFamily::path_fresh;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  hyper.validate();
  if (width < 2 || height < 2) {
    throw std::invalid_argument("maze dimensions must be at least 2x2");
  }
  if (window < 1 || window % 2 == 0 || window > std::min(width, height)) {
    throw std::invalid_argument("window must be odd and no larger than the maze");
  }
  if (episodes < 0) throw std::invalid_argument("episodes must be >= 0");
  if (checkpoint_every < 1) throw std::invalid_argument("checkpoint_every must be >= 1");
  if (render_every < 0) throw std::invalid_argument("render_every must be >= 0");
}

double epsilon_at(const Hyperparams& hyper, int64_t global_step) {
  if (global_step >= hyper.epsilon_decay_steps) return hyper.epsilon_end;
  const double frac = static_cast<double>(global_step) / hyper.epsilon_decay_steps;
  return hyper.epsilon_start + (hyper.epsilon_end - hyper.epsilon_start) * frac;
}

Action select_action(const QValues& q, double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must be in [0, 1]");
  }
  if (epsilon > 0.0 && rng.next_double() < epsilon) {
    return kAllActions[rng.next_below(kNumActions)];
  }
  return argmax_action(q);
}

TargetBatch build_targets(const std::vector<Experience>& minibatch, const NetworkParams& params,
                          double gamma) {
  if (minibatch.empty()) throw std::invalid_argument("minibatch must be non-empty");
  TargetBatch batch;
  batch.states.reserve(minibatch.size());
  batch.targets.reserve(minibatch.size());
  for (const Experience& e : minibatch) {
    QValues target = predict(params, e.state);
    const int acted = static_cast<int>(e.action);
    if (e.terminal) {
      target[acted] = e.reward;
    } else {
      const QValues next_q = predict(params, e.next_state);
      target[acted] = e.reward + gamma * *std::max_element(next_q.begin(), next_q.end());
    }
    batch.states.push_back(e.state);
    batch.targets.push_back(target);
  }
  return batch;
}

Experience actor_step(ActorState& state, const NetworkParams& params, ReplayMemory& memory,
                      const Hyperparams& hyper, const RewardConfig& reward, Rng& rng) {
  Observation obs = observe(state.maze, state.pos, state.window);
  state.epsilon = epsilon_at(hyper, state.global_step);
  const QValues q = predict(params, obs.encoded);
  const Action action = select_action(q, state.epsilon, rng);
  const StepOutcome outcome = step(state.maze, state.pos, action, reward);
  Observation next_obs = observe(state.maze, outcome.next_pos, state.window);

  Experience experience{std::move(obs.encoded), action, outcome.reward,
                        std::move(next_obs.encoded), outcome.reached_goal};
  memory.push(experience);
  state.pos = outcome.next_pos;
  ++state.steps_in_episode;
  ++state.global_step;
  state.epsilon = epsilon_at(hyper, state.global_step);
  return experience;
}

LearnerResult learner_step(NetworkParams& params, const ReplayMemory& memory,
                           const Hyperparams& hyper, Rng& rng) {
  if (memory.size() < static_cast<size_t>(hyper.effective_warmup())) return {};
  const std::vector<Experience> minibatch = memory.sample(hyper.batch_size, rng);
  TargetBatch batch = build_targets(minibatch, params, hyper.gamma);
  auto [updated, loss_value] =
      train_minibatch(std::move(params), batch.states, batch.targets, hyper.alpha);
  params = std::move(updated);
  return {true, loss_value};
}

namespace {

// Seed stream ids for deriving independent rngs from the run seed.
enum SeedStream : uint64_t {
  kStreamInit = 0,
  kStreamMaze = 1,
  kStreamStart = 2,
  kStreamAction = 3,
  kStreamSample = 4,
};

Maze episode_maze(const ExperimentConfig& config, const Maze& fixed, Rng& maze_rng) {
  switch (config.family) {
    case MazeFamily::random_fixed: return fixed;
    case MazeFamily::circle_fresh:
      return generate_circle(config.width, config.height, maze_rng.next_u64());
    case MazeFamily::path_fresh:
      return generate_path(config.width, config.height, maze_rng.next_u64());
  }
  throw std::logic_error("unknown maze family");
}

// Random start cell distinct from the goal.
Position sample_start(const Maze& maze, Rng& rng) {
  for (;;) {
    Position p{rng.next_int(0, maze.height - 1), rng.next_int(0, maze.width - 1)};
    if (!(p == maze.goal)) return p;
  }
}

std::string zero_padded(int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*d", width, value);
  return buf;
}

struct EpisodeSink {
  std::ofstream episode_csv;
  std::vector<EpisodeRecord> records;

  explicit EpisodeSink(const std::string& out_dir) : episode_csv(out_dir + "/episodes.csv") {
    if (!episode_csv) throw std::runtime_error("cannot open episode log in " + out_dir);
    write_episode_csv_header(episode_csv);
  }

  void add(const EpisodeRecord& record) {
    records.push_back(record);
    append_episode_csv(episode_csv, record);
    episode_csv.flush();
  }
};

void maybe_render(const ExperimentConfig& config, const Maze& maze, const SaccadePath& path,
                  int episode) {
  if (config.render_every <= 0 || episode % config.render_every != 0) return;
  const std::string stem = config.out_dir + "/episode_" + zero_padded(episode, 6);
  render_path_file(maze, path, stem + ".ppm");
  std::ofstream path_csv(stem + "_path.csv");
  if (!path_csv) throw std::runtime_error("cannot open " + stem + "_path.csv");
  write_path_csv(path, path_csv);
}

}  // namespace

TrainingReport run_training(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);

  const uint64_t seed = config.hyper.seed;
  NetworkParams params = init_params(config.window * config.window, config.hyper.hidden_size,
                                     derive_seed(seed, kStreamInit));
  ReplayMemory memory(config.hyper.replay_capacity);
  Rng maze_rng(derive_seed(seed, kStreamMaze));
  Rng start_rng(derive_seed(seed, kStreamStart));
  Rng action_rng(derive_seed(seed, kStreamAction));

  Maze fixed_maze;
  if (config.family == MazeFamily::random_fixed) {
    fixed_maze = generate_random(config.width, config.height, maze_rng.next_u64());
    save_maze(fixed_maze, config.out_dir + "/maze.txt");
  }

  save_checkpoint(params, config.hyper, 0, config.out_dir + "/checkpoint_initial.txt");
  EpisodeSink sink(config.out_dir);

  const int max_steps = config.effective_max_steps();
  ActorState actor;
  actor.window = config.window;

  // Concurrent mode: the learner trains on parameter snapshots and
  // publishes updates while the actor interacts with the environment.
  ParamStore store{NetworkParams{}};
  std::atomic<bool> stop{false};
  std::mutex loss_mutex;
  double shared_loss_sum = 0.0;
  int64_t shared_loss_count = 0;
  std::thread learner;
  Rng sample_rng(derive_seed(seed, kStreamSample));

  if (!config.deterministic) {
    store.publish(params);
    learner = std::thread([&]() {
      Rng learner_rng(derive_seed(seed, kStreamSample));
      while (!stop.load(std::memory_order_relaxed)) {
        NetworkParams working = *store.snapshot();
        const LearnerResult result = learner_step(working, memory, config.hyper, learner_rng);
        if (result.trained) {
          store.publish(std::move(working));
          std::lock_guard lock(loss_mutex);
          shared_loss_sum += result.loss;
          ++shared_loss_count;
        } else {
          std::this_thread::sleep_for(std::chrono::milliseconds(1));
        }
      }
    });
  }

  for (int episode = 0; episode < config.episodes; ++episode) {
    actor.maze = episode_maze(config, fixed_maze, maze_rng);
    actor.start = sample_start(actor.maze, start_rng);
    actor.pos = actor.start;
    actor.steps_in_episode = 0;
    actor.episode = episode;

    SaccadePath path{actor.start};
    double loss_sum = 0.0;
    int64_t loss_count = 0;
    bool reached = false;

    while (true) {
      Experience experience;
      if (config.deterministic) {
        experience = actor_step(actor, params, memory, config.hyper, config.reward, action_rng);
        const LearnerResult result = learner_step(params, memory, config.hyper, sample_rng);
        if (result.trained) {
          loss_sum += result.loss;
          ++loss_count;
        }
      } else {
        const auto snapshot = store.snapshot();
        experience = actor_step(actor, *snapshot, memory, config.hyper, config.reward, action_rng);
      }
      path.push_back(actor.pos);
      if (experience.terminal) {
        reached = true;
        break;
      }
      if (actor.steps_in_episode >= max_steps) break;
    }

    if (!config.deterministic) {
      std::lock_guard lock(loss_mutex);
      loss_sum = shared_loss_sum;
      loss_count = shared_loss_count;
      shared_loss_sum = 0.0;
      shared_loss_count = 0;
    }

    EpisodeRecord record;
    record.episode = episode;
    record.start = actor.start;
    record.optimal_len = shortest_path_len(actor.start, actor.maze.goal);
    record.steps_taken = actor.steps_in_episode;
    record.reached_goal = reached;
    record.truncated = !reached;
    record.ratio = episode_ratio(record.optimal_len, record.steps_taken, reached);
    record.epsilon = actor.epsilon;
    record.mean_loss = loss_count > 0 ? loss_sum / static_cast<double>(loss_count) : 0.0;
    sink.add(record);

    maybe_render(config, actor.maze, path, episode);

    if ((episode + 1) % config.checkpoint_every == 0 && episode + 1 < config.episodes) {
      const NetworkParams current = config.deterministic ? params : *store.snapshot();
      save_checkpoint(current, config.hyper, actor.global_step,
                      config.out_dir + "/checkpoint_ep" + zero_padded(episode + 1, 6) + ".txt");
    }
  }

  if (!config.deterministic) {
    stop.store(true, std::memory_order_relaxed);
    learner.join();
    params = *store.snapshot();
  }

  if (config.episodes > 0) {
    save_checkpoint(params, config.hyper, actor.global_step,
                    config.out_dir + "/checkpoint_final.txt");
  }
  save_convergence_csv(sink.records, config.out_dir + "/convergence.csv");

  return {std::move(sink.records), std::move(params), actor.global_step};
}

EvalReport evaluate(const NetworkParams& params, const ExperimentConfig& config) {
  config.validate();
  if (params.input_dim() != config.window * config.window) {
    throw std::invalid_argument(
        "checkpoint input dim " + std::to_string(params.input_dim()) +
        " does not match window " + std::to_string(config.window) + "x" +
        std::to_string(config.window));
  }

  const uint64_t seed = config.hyper.seed;
  Rng maze_rng(derive_seed(seed, kStreamMaze));
  Rng start_rng(derive_seed(seed, kStreamStart));
  Maze fixed_maze;
  if (config.family == MazeFamily::random_fixed) {
    fixed_maze = generate_random(config.width, config.height, maze_rng.next_u64());
  }

  const int max_steps = config.effective_max_steps();
  EvalReport report;
  report.episodes = config.episodes;

  double ratio_sum = 0.0;
  double steps_sum = 0.0;
  int reached_count = 0;
  for (int episode = 0; episode < config.episodes; ++episode) {
    const Maze maze = episode_maze(config, fixed_maze, maze_rng);
    const Position start = sample_start(maze, start_rng);
    Position pos = start;
    bool reached = false;
    int steps = 0;
    while (steps < max_steps) {
      const Observation obs = observe(maze, pos, config.window);
      const Action action = argmax_action(predict(params, obs.encoded));
      const StepOutcome outcome = step(maze, pos, action, config.reward);
      pos = outcome.next_pos;
      ++steps;
      if (outcome.reached_goal) {
        reached = true;
        break;
      }
    }

    EpisodeRecord record;
    record.episode = episode;
    record.start = start;
    record.optimal_len = shortest_path_len(start, maze.goal);
    record.steps_taken = steps;
    record.reached_goal = reached;
    record.truncated = !reached;
    record.ratio = episode_ratio(record.optimal_len, record.steps_taken, reached);
    report.records.push_back(record);

    ratio_sum += record.ratio;
    steps_sum += steps;
    reached_count += reached ? 1 : 0;
  }

  if (config.episodes > 0) {
    report.reach_rate = static_cast<double>(reached_count) / config.episodes;
    report.mean_ratio = ratio_sum / config.episodes;
    report.mean_steps = steps_sum / config.episodes;
  }
  return report;
}

}  // namespace saccade
