#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <vector>

#include "saccade/env.hpp"
#include "saccade/rng.hpp"

namespace saccade {

// One transition tuple. `terminal` is true iff next_state was observed at
// the goal; truncated episodes store terminal = false.
struct Experience {
  std::vector<double> state;
  Action action = Action::North;
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

// Fixed-capacity FIFO experience memory with uniform minibatch sampling.
// push and sample are individually atomic so one actor and one learner can
// share an instance.
class ReplayMemory {
 public:
  explicit ReplayMemory(size_t capacity);

  void push(Experience experience);

  // batch_size entries drawn uniformly without replacement.
  std::vector<Experience> sample(size_t batch_size, Rng& rng) const;

  size_t size() const;
  size_t capacity() const { return capacity_; }

  // Total pushes ever, independent of evictions.
  uint64_t insert_count() const;

  // Contents oldest-first, for checkpointing.
  std::vector<Experience> snapshot() const;
  void restore(std::vector<Experience> entries, uint64_t insert_count);

 private:
  size_t capacity_;
  std::deque<Experience> entries_;
  uint64_t insert_count_ = 0;
  mutable std::mutex mutex_;
};

}  // namespace saccade
