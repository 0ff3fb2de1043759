#include "saccade/oracle.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace saccade::oracle {

int bfs_shortest(const Maze& maze, Position a, Position b) {
  if (!maze.in_bounds(a) || !maze.in_bounds(b)) {
    throw std::invalid_argument("bfs_shortest: position out of bounds");
  }
  if (a == b) return 0;
  std::vector<int> dist(static_cast<size_t>(maze.width) * maze.height, -1);
  auto index = [&](Position p) { return static_cast<size_t>(p.row) * maze.width + p.col; };
  std::deque<Position> frontier{a};
  dist[index(a)] = 0;
  while (!frontier.empty()) {
    const Position cur = frontier.front();
    frontier.pop_front();
    for (Action action : kAllActions) {
      auto [dr, dc] = displacement(action);
      const Position next{cur.row + dr, cur.col + dc};
      if (!maze.in_bounds(next) || dist[index(next)] >= 0) continue;
      dist[index(next)] = dist[index(cur)] + 1;
      if (next == b) return dist[index(next)];
      frontier.push_back(next);
    }
  }
  return -1;  // unreachable on a connected grid
}

double TabularQ::max_q(Position pos) const {
  const auto& row = table[static_cast<size_t>(pos.row) * width + pos.col];
  return *std::max_element(row.begin(), row.end());
}

Action TabularQ::greedy_action(Position pos) const {
  const auto& row = table[static_cast<size_t>(pos.row) * width + pos.col];
  int best = 0;
  for (int i = 1; i < kNumActions; ++i) {
    if (row[i] > row[best]) best = i;
  }
  return static_cast<Action>(best);
}

TabularQ tabular_q_learn(const Maze& maze, const Hyperparams& hyper, int episodes, Rng& rng,
                         const RewardConfig& reward) {
  TabularQ q;
  q.width = maze.width;
  q.height = maze.height;
  q.table.assign(static_cast<size_t>(maze.width) * maze.height, {0.0, 0.0, 0.0, 0.0});

  const int max_steps =
      hyper.max_episode_steps > 0 ? hyper.max_episode_steps : 10 * (maze.width + maze.height);
  auto entry = [&](Position pos) -> std::array<double, kNumActions>& {
    return q.table[static_cast<size_t>(pos.row) * maze.width + pos.col];
  };

  for (int episode = 0; episode < episodes; ++episode) {
    Position pos{rng.next_int(0, maze.height - 1), rng.next_int(0, maze.width - 1)};
    if (pos == maze.goal) continue;
    for (int t = 0; t < max_steps; ++t) {
      Action action;
      if (rng.next_double() < hyper.epsilon_start) {
        action = kAllActions[rng.next_below(kNumActions)];
      } else {
        action = q.greedy_action(pos);
      }
      const StepOutcome outcome = step(maze, pos, action, reward);
      double& cell = entry(pos)[static_cast<int>(action)];
      if (outcome.reached_goal) {
        cell += hyper.alpha * (outcome.reward - cell);
      } else {
        cell += hyper.alpha * (outcome.reward + hyper.gamma * q.max_q(outcome.next_pos) - cell);
      }
      pos = outcome.next_pos;
      if (outcome.reached_goal) break;
    }
  }
  return q;
}

}  // namespace saccade::oracle
