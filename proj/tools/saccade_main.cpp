#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "saccade/agent.hpp"
#include "saccade/checkpoint.hpp"
#include "saccade/env.hpp"
#include "saccade/metrics.hpp"

namespace {

struct SizeOption {
  int width = 10;
  int height = 10;
};

SizeOption parse_size(const std::string& text) {
  SizeOption size;
  char extra;
  if (std::sscanf(text.c_str(), "%dx%d%c", &size.width, &size.height, &extra) != 2) {
    throw CLI::ValidationError("--size", "expected WxH, e.g. 20x20, got '" + text + "'");
  }
  return size;
}

saccade::MazeFamily parse_family_or_throw(const std::string& name) {
  auto family = saccade::parse_family(name);
  if (!family) {
    throw CLI::ValidationError("--family", "expected random, circle or path, got '" + name + "'");
  }
  return *family;
}

struct TrainOptions {
  std::string family = "random";
  std::string size = "10x10";
  saccade::ExperimentConfig config;
};

// Shared experiment flags for train and eval.
void add_experiment_options(CLI::App* cmd, TrainOptions& opts) {
  cmd->add_option("--family", opts.family, "Maze family: random, circle, path")
      ->capture_default_str();
  cmd->add_option("--size", opts.size, "Maze size as WxH")->capture_default_str();
  cmd->add_option("--window", opts.config.window, "Observation window side length (odd)")
      ->capture_default_str();
  cmd->add_option("--episodes", opts.config.episodes, "Number of episodes")
      ->capture_default_str();
  cmd->add_option("--seed", opts.config.hyper.seed, "Run seed; all randomness derives from it")
      ->capture_default_str();
  cmd->add_option("--alpha", opts.config.hyper.alpha, "SGD learning rate")
      ->capture_default_str();
  cmd->add_option("--gamma", opts.config.hyper.gamma, "Discount factor")->capture_default_str();
  cmd->add_option("--epsilon-start", opts.config.hyper.epsilon_start, "Initial exploration rate")
      ->capture_default_str();
  cmd->add_option("--epsilon-end", opts.config.hyper.epsilon_end, "Final exploration rate")
      ->capture_default_str();
  cmd->add_option("--epsilon-decay-steps", opts.config.hyper.epsilon_decay_steps,
                  "Steps over which epsilon decays linearly")
      ->capture_default_str();
  cmd->add_option("--batch-size", opts.config.hyper.batch_size, "Minibatch size")
      ->capture_default_str();
  cmd->add_option("--capacity", opts.config.hyper.replay_capacity, "Replay memory capacity")
      ->capture_default_str();
  cmd->add_option("--hidden", opts.config.hyper.hidden_size, "Hidden layer width")
      ->capture_default_str();
  cmd->add_option("--max-steps", opts.config.hyper.max_episode_steps,
                  "Episode step cap; 0 = 10*(width+height)")
      ->capture_default_str();
  cmd->add_option("--warmup", opts.config.hyper.warmup_experiences,
                  "Experiences required before training; 0 = batch size")
      ->capture_default_str();
  cmd->add_option("--terminal-reward", opts.config.reward.terminal_reward,
                  "Reward on reaching the goal")
      ->capture_default_str();
  cmd->add_option("--step-reward", opts.config.reward.step_reward, "Reward for non-goal steps")
      ->capture_default_str();
  cmd->add_flag("--deterministic", opts.config.deterministic,
                "Single-threaded interleaving: one learner step per actor step");
  cmd->add_option("--out", opts.config.out_dir, "Output directory")->capture_default_str();
  cmd->set_config("--config", "", "Read options from a key=value config file");
}

void finish_config(TrainOptions& opts) {
  const SizeOption size = parse_size(opts.size);
  opts.config.width = size.width;
  opts.config.height = size.height;
  opts.config.family = parse_family_or_throw(opts.family);
}

int run_gen(const std::string& family, const std::string& size_text, uint64_t seed,
            const std::string& out) {
  const SizeOption size = parse_size(size_text);
  saccade::Maze maze;
  switch (parse_family_or_throw(family)) {
    case saccade::MazeFamily::random_fixed:
      maze = saccade::generate_random(size.width, size.height, seed);
      break;
    case saccade::MazeFamily::circle_fresh:
      maze = saccade::generate_circle(size.width, size.height, seed);
      break;
    case saccade::MazeFamily::path_fresh:
      maze = saccade::generate_path(size.width, size.height, seed);
      break;
  }
  saccade::save_maze(maze, out);
  std::cout << "wrote " << out << " (" << size.width << "x" << size.height << ", goal at "
            << maze.goal.row << "," << maze.goal.col << ")\n";
  return 0;
}

int run_train(TrainOptions& opts) {
  finish_config(opts);
  const saccade::TrainingReport report = saccade::run_training(opts.config);
  const auto& records = report.records;
  std::cout << "trained " << records.size() << " episodes in " << report.total_steps
            << " steps\n";
  if (!records.empty()) {
    const double avg = saccade::running_average(records, records.size());
    int reached = 0;
    for (const auto& r : records) reached += r.reached_goal ? 1 : 0;
    std::cout << "average ratio " << saccade::format_double(avg) << ", reached goal in "
              << reached << "/" << records.size() << " episodes\n";
  }
  std::cout << "outputs in " << opts.config.out_dir << "/ (episodes.csv, convergence.csv, "
            << "checkpoints)\n";
  return 0;
}

int run_eval(TrainOptions& opts, const std::string& checkpoint_path, bool window_given) {
  finish_config(opts);
  const saccade::Checkpoint ckpt = saccade::load_checkpoint(checkpoint_path);
  const int input_dim = ckpt.params.layer_dims.front();
  if (window_given) {
    if (input_dim != opts.config.window * opts.config.window) {
      throw std::invalid_argument("checkpoint expects input dim " + std::to_string(input_dim) +
                                  " but --window " + std::to_string(opts.config.window) +
                                  " implies " +
                                  std::to_string(opts.config.window * opts.config.window));
    }
  } else {
    int k = 1;
    while (k * k < input_dim) ++k;
    if (k * k != input_dim) {
      throw std::invalid_argument("checkpoint input dim " + std::to_string(input_dim) +
                                  " is not a square observation window");
    }
    opts.config.window = k;
  }
  const saccade::EvalReport report = saccade::evaluate(ckpt.params, opts.config);
  std::cout << "evaluated " << report.episodes << " greedy episodes on "
            << saccade::family_name(opts.config.family) << " mazes\n";
  std::cout << "reach_rate " << saccade::format_double(report.reach_rate) << "\n";
  std::cout << "mean_ratio " << saccade::format_double(report.mean_ratio) << "\n";
  std::cout << "mean_steps " << saccade::format_double(report.mean_steps) << "\n";
  return 0;
}

int run_render(const std::string& maze_path, const std::string& path_csv,
               const std::string& out) {
  const saccade::Maze maze = saccade::load_maze(maze_path);
  saccade::SaccadePath path;
  if (!path_csv.empty()) {
    std::ifstream in(path_csv);
    if (!in) throw std::runtime_error("cannot open: " + path_csv);
    path = saccade::read_path_csv(in);
  }
  saccade::render_path_file(maze, path, out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"saccadic visual search on mazes of digits: train and evaluate a "
               "Q-learning agent"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a maze file");
  std::string gen_family = "random";
  std::string gen_size = "10x10";
  uint64_t gen_seed = 0;
  std::string gen_out = "maze.txt";
  gen->add_option("--family", gen_family, "Maze family: random, circle, path")
      ->capture_default_str();
  gen->add_option("--size", gen_size, "Maze size as WxH")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output maze file")->capture_default_str();

  auto* train = app.add_subcommand("train", "Train an agent");
  TrainOptions train_opts;
  add_experiment_options(train, train_opts);
  train->add_option("--checkpoint-every", train_opts.config.checkpoint_every,
                    "Checkpoint cadence in episodes")
      ->capture_default_str();
  train->add_option("--render-every", train_opts.config.render_every,
                    "Render every Nth episode; 0 = off")
      ->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint greedily");
  TrainOptions eval_opts;
  eval_opts.config.episodes = 100;
  std::string eval_checkpoint;
  add_experiment_options(eval, eval_opts);
  eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint file to evaluate")->required();

  auto* render = app.add_subcommand("render", "Render a maze (and optional path) to a PPM image");
  std::string render_maze;
  std::string render_path_csv;
  std::string render_out = "maze.ppm";
  render->add_option("--maze", render_maze, "Maze file")->required();
  render->add_option("--path", render_path_csv, "Trajectory CSV with header row,col");
  render->add_option("--out", render_out, "Output PPM file")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(gen_family, gen_size, gen_seed, gen_out);
    if (train->parsed()) return run_train(train_opts);
    if (eval->parsed()) {
      return run_eval(eval_opts, eval_checkpoint, eval->count("--window") > 0);
    }
    if (render->parsed()) return run_render(render_maze, render_path_csv, render_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
