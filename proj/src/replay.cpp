#include "saccade/replay.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace saccade {

ReplayMemory::ReplayMemory(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be >= 1");
}

void ReplayMemory::push(Experience experience) {
  if (experience.state.size() != experience.next_state.size()) {
    throw std::invalid_argument("experience state/next_state length mismatch");
  }
  std::lock_guard lock(mutex_);
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.push_back(std::move(experience));
  ++insert_count_;
}

std::vector<Experience> ReplayMemory::sample(size_t batch_size, Rng& rng) const {
  std::lock_guard lock(mutex_);
  const size_t n = entries_.size();
  if (n < batch_size) {
    throw std::runtime_error("insufficient samples: have " + std::to_string(n) +
                             ", need " + std::to_string(batch_size));
  }
  // Partial Fisher-Yates over indices: without replacement, deterministic
  // given the rng state.
  std::vector<size_t> indices(n);
  std::iota(indices.begin(), indices.end(), size_t{0});
  std::vector<Experience> batch;
  batch.reserve(batch_size);
  for (size_t i = 0; i < batch_size; ++i) {
    const size_t j = i + static_cast<size_t>(rng.next_below(n - i));
    std::swap(indices[i], indices[j]);
    batch.push_back(entries_[indices[i]]);
  }
  return batch;
}

size_t ReplayMemory::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

uint64_t ReplayMemory::insert_count() const {
  std::lock_guard lock(mutex_);
  return insert_count_;
}

std::vector<Experience> ReplayMemory::snapshot() const {
  std::lock_guard lock(mutex_);
  return {entries_.begin(), entries_.end()};
}

void ReplayMemory::restore(std::vector<Experience> entries, uint64_t insert_count) {
  if (entries.size() > capacity_) {
    throw std::invalid_argument("restored entries exceed capacity");
  }
  std::lock_guard lock(mutex_);
  entries_.assign(std::make_move_iterator(entries.begin()),
                  std::make_move_iterator(entries.end()));
  insert_count_ = insert_count;
}

}  // namespace saccade
