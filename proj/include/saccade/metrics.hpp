#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "saccade/env.hpp"

namespace saccade {

// Per-episode outcome. ratio is optimal_len / steps_taken for successful
// episodes, 1.0 for a zero-length optimum, and 0.0 when the goal was not
// reached.
struct EpisodeRecord {
  int episode = 0;
  Position start;
  int optimal_len = 0;
  int steps_taken = 0;
  double ratio = 0.0;
  bool reached_goal = false;
  bool truncated = false;
  double epsilon = 0.0;
  double mean_loss = 0.0;
};

double episode_ratio(int optimal_len, int steps_taken, bool reached_goal);

// Arithmetic mean of ratio over the first n records.
double running_average(const std::vector<EpisodeRecord>& records, size_t n);

// Shortest round-trippable decimal form of a double (up to 17 significant
// digits).
std::string format_double(double value);

// Episode log CSV, one row per episode.
extern const char* const kEpisodeCsvHeader;
void write_episode_csv_header(std::ostream& out);
void append_episode_csv(std::ostream& out, const EpisodeRecord& record);
std::vector<EpisodeRecord> read_episode_csv(std::istream& in);

// `episode,current_ratio,average_ratio`; the average column is the exact
// prefix mean of the current column.
void write_convergence_csv(const std::vector<EpisodeRecord>& records, std::ostream& out);
void save_convergence_csv(const std::vector<EpisodeRecord>& records, const std::string& path);

// Ordered agent positions from start to final cell; consecutive entries
// differ by one unit in one coordinate or are equal (clamped moves).
using SaccadePath = std::vector<Position>;

void write_path_csv(const SaccadePath& path, std::ostream& out);
SaccadePath read_path_csv(std::istream& in);

// Binary PPM (P6) rendering: digit colormap cells, red cross on the goal,
// white circle on the final position, green path segments brightening from
// oldest to newest.
inline constexpr int kCellPx = 16;
void render_path(const Maze& maze, const SaccadePath& path, std::ostream& out);
void render_path_file(const Maze& maze, const SaccadePath& path, const std::string& out_path);

}  // namespace saccade
