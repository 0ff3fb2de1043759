#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "saccade/qnet.hpp"
#include "saccade/replay.hpp"

namespace saccade {

// Versioned text container for network parameters, hyperparameters, the
// training step counter and an optional replay dump. Doubles are written
// as hexfloats so load(save(theta)) reproduces theta bit-exactly.
struct Checkpoint {
  NetworkParams params;
  Hyperparams hyper;
  int64_t train_steps = 0;

  bool has_replay = false;
  size_t replay_capacity = 0;
  uint64_t replay_insert_count = 0;
  std::vector<Experience> replay_entries;
};

void write_checkpoint(const Checkpoint& ckpt, std::ostream& out);
Checkpoint read_checkpoint(std::istream& in);

// `replay`, when given, is dumped into the container for resumable runs.
void save_checkpoint(const NetworkParams& params, const Hyperparams& hyper, int64_t train_steps,
                     const std::string& path, const ReplayMemory* replay = nullptr);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace saccade
