#include "saccade/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace saccade {

double episode_ratio(int optimal_len, int steps_taken, bool reached_goal) {
  if (!reached_goal) return 0.0;
  if (optimal_len == 0) return 1.0;
  return static_cast<double>(optimal_len) / static_cast<double>(steps_taken);
}

double running_average(const std::vector<EpisodeRecord>& records, size_t n) {
  if (n == 0 || n > records.size()) {
    throw std::invalid_argument("running_average needs 1 <= n <= record count");
  }
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) sum += records[i].ratio;
  return sum / static_cast<double>(n);
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  // Trim to the shortest representation that still round-trips.
  for (int precision = 1; precision < 17; ++precision) {
    char shorter[32];
    std::snprintf(shorter, sizeof(shorter), "%.*g", precision, value);
    if (std::strtod(shorter, nullptr) == value) return shorter;
  }
  return buf;
}

const char* const kEpisodeCsvHeader =
    "episode,start_row,start_col,optimal_len,steps,ratio,reached_goal,truncated,epsilon,mean_loss";

void write_episode_csv_header(std::ostream& out) { out << kEpisodeCsvHeader << '\n'; }

void append_episode_csv(std::ostream& out, const EpisodeRecord& r) {
  out << r.episode << ',' << r.start.row << ',' << r.start.col << ',' << r.optimal_len << ','
      << r.steps_taken << ',' << format_double(r.ratio) << ',' << (r.reached_goal ? 1 : 0) << ','
      << (r.truncated ? 1 : 0) << ',' << format_double(r.epsilon) << ','
      << format_double(r.mean_loss) << '\n';
}

std::vector<EpisodeRecord> read_episode_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kEpisodeCsvHeader) {
    throw std::runtime_error("episode CSV: missing or unexpected header");
  }
  std::vector<EpisodeRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EpisodeRecord r;
    int reached = 0;
    int truncated = 0;
    char ratio_buf[64];
    char eps_buf[64];
    char loss_buf[64];
    const int n = std::sscanf(line.c_str(), "%d,%d,%d,%d,%d,%63[^,],%d,%d,%63[^,],%63s",
                              &r.episode, &r.start.row, &r.start.col, &r.optimal_len,
                              &r.steps_taken, ratio_buf, &reached, &truncated, eps_buf, loss_buf);
    if (n != 10) {
      throw std::runtime_error("episode CSV: malformed row: " + line);
    }
    r.ratio = std::strtod(ratio_buf, nullptr);
    r.epsilon = std::strtod(eps_buf, nullptr);
    r.mean_loss = std::strtod(loss_buf, nullptr);
    r.reached_goal = reached != 0;
    r.truncated = truncated != 0;
    records.push_back(r);
  }
  return records;
}

void write_convergence_csv(const std::vector<EpisodeRecord>& records, std::ostream& out) {
  out << "episode,current_ratio,average_ratio\n";
  double sum = 0.0;
  for (size_t i = 0; i < records.size(); ++i) {
    sum += records[i].ratio;
    out << records[i].episode << ',' << format_double(records[i].ratio) << ','
        << format_double(sum / static_cast<double>(i + 1)) << '\n';
  }
}

void save_convergence_csv(const std::vector<EpisodeRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_convergence_csv(records, out);
}

void write_path_csv(const SaccadePath& path, std::ostream& out) {
  out << "row,col\n";
  for (const Position& p : path) out << p.row << ',' << p.col << '\n';
}

SaccadePath read_path_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "row,col") {
    throw std::runtime_error("path CSV: missing or unexpected header");
  }
  SaccadePath path;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Position p;
    if (std::sscanf(line.c_str(), "%d,%d", &p.row, &p.col) != 2) {
      throw std::runtime_error("path CSV: malformed row: " + line);
    }
    path.push_back(p);
  }
  return path;
}

namespace {

struct Rgb {
  unsigned char r, g, b;
};

// Fixed digit colormap: linear dark-to-warm ramp over digits 0-9.
constexpr Rgb kDigitColors[10] = {
    {30, 30, 30},   {55, 50, 37},   {80, 70, 43},   {105, 90, 50},  {130, 110, 57},
    {155, 130, 63}, {180, 150, 70}, {205, 170, 77}, {230, 190, 83}, {255, 210, 90},
};

constexpr Rgb kGoalCross{230, 40, 40};
constexpr Rgb kAgentCircle{255, 255, 255};

class Canvas {
 public:
  Canvas(int width_px, int height_px)
      : width_(width_px), height_(height_px),
        pixels_(static_cast<size_t>(width_px) * height_px * 3, 0) {}

  void set(int x, int y, Rgb c) {
    if (x < 0 || x >= width_ || y < 0 || y >= height_) return;
    const size_t i = (static_cast<size_t>(y) * width_ + x) * 3;
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }

  void fill_rect(int x0, int y0, int x1, int y1, Rgb c) {
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) set(x, y, c);
    }
  }

  void fill_circle(int cx, int cy, int radius, Rgb c) {
    for (int y = cy - radius; y <= cy + radius; ++y) {
      for (int x = cx - radius; x <= cx + radius; ++x) {
        const int dx = x - cx;
        const int dy = y - cy;
        if (dx * dx + dy * dy <= radius * radius) set(x, y, c);
      }
    }
  }

  void write_ppm(std::ostream& out) const {
    out << "P6\n" << width_ << ' ' << height_ << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels_.data()),
              static_cast<std::streamsize>(pixels_.size()));
  }

 private:
  int width_;
  int height_;
  std::vector<unsigned char> pixels_;
};

}  // namespace

void render_path(const Maze& maze, const SaccadePath& path, std::ostream& out) {
  for (const Position& p : path) {
    if (!maze.in_bounds(p)) {
      throw std::invalid_argument("path position (" + std::to_string(p.row) + "," +
                                  std::to_string(p.col) + ") outside the maze");
    }
  }
  Canvas canvas(maze.width * kCellPx, maze.height * kCellPx);
  for (int r = 0; r < maze.height; ++r) {
    for (int c = 0; c < maze.width; ++c) {
      canvas.fill_rect(c * kCellPx, r * kCellPx, (c + 1) * kCellPx, (r + 1) * kCellPx,
                       kDigitColors[maze.at(r, c)]);
    }
  }

  // Path segments, oldest first so newer strokes overdraw older ones.
  const int half = kCellPx / 2;
  const int num_segments = path.size() > 1 ? static_cast<int>(path.size()) - 1 : 0;
  for (int i = 0; i < num_segments; ++i) {
    const Position a = path[i];
    const Position b = path[i + 1];
    if (a == b) continue;  // clamped boundary move
    const double age = num_segments == 1 ? 1.0 : 0.25 + 0.75 * i / double(num_segments - 1);
    const Rgb green{0, static_cast<unsigned char>(std::lround(255.0 * age)), 0};
    const int ax = a.col * kCellPx + half;
    const int ay = a.row * kCellPx + half;
    const int bx = b.col * kCellPx + half;
    const int by = b.row * kCellPx + half;
    const int thickness = 2;
    canvas.fill_rect(std::min(ax, bx) - thickness, std::min(ay, by) - thickness,
                     std::max(ax, bx) + thickness, std::max(ay, by) + thickness, green);
  }

  // Red cross over the goal cell.
  const int gx = maze.goal.col * kCellPx;
  const int gy = maze.goal.row * kCellPx;
  for (int t = 0; t < kCellPx; ++t) {
    for (int w = -1; w <= 1; ++w) {
      canvas.set(gx + t, gy + t + w, kGoalCross);
      canvas.set(gx + t, gy + kCellPx - 1 - t + w, kGoalCross);
    }
  }

  if (!path.empty()) {
    const Position last = path.back();
    canvas.fill_circle(last.col * kCellPx + half, last.row * kCellPx + half, kCellPx / 3,
                       kAgentCircle);
  }

  canvas.write_ppm(out);
  if (!out) throw std::runtime_error("image write failed");
}

void render_path_file(const Maze& maze, const SaccadePath& path, const std::string& out_path) {
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  render_path(maze, path, out);
}

}  // namespace saccade
