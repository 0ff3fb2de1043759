#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "saccade/env.hpp"
#include "saccade/metrics.hpp"

using namespace saccade;

namespace {

std::vector<EpisodeRecord> synthetic_records(int n) {
  std::vector<EpisodeRecord> records;
  for (int i = 0; i < n; ++i) {
    EpisodeRecord r;
    r.episode = i;
    r.start = {i % 5, (i * 3) % 7};
    r.optimal_len = 3 + i % 9;
    r.reached_goal = i % 4 != 3;
    r.steps_taken = r.reached_goal ? r.optimal_len + i % 13 : 100;
    r.truncated = !r.reached_goal;
    r.ratio = episode_ratio(r.optimal_len, r.steps_taken, r.reached_goal);
    r.epsilon = 1.0 / (1.0 + i);
    r.mean_loss = 0.25 / (1.0 + i);
    records.push_back(r);
  }
  return records;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("episode_ratio: optimal, near-optimal and failed episodes") {
  CHECK(episode_ratio(10, 10, true) == 1.0);
  CHECK(episode_ratio(5, 20, true) == 0.25);
  CHECK(episode_ratio(23, 27, true) == doctest::Approx(0.85).epsilon(0.005));
  CHECK(episode_ratio(23, 27, false) == 0.0);
  CHECK(episode_ratio(0, 0, true) == 1.0);  // start-at-goal degenerate case
  CHECK(episode_ratio(7, 100, false) == 0.0);
}

TEST_CASE("ratio of a successful episode never exceeds 1") {
  const auto records = synthetic_records(200);
  for (const auto& r : records) {
    if (r.reached_goal) {
      CHECK(r.steps_taken >= r.optimal_len);
      CHECK(r.ratio > 0.0);
      CHECK(r.ratio <= 1.0);
    } else {
      CHECK(r.ratio == 0.0);
    }
  }
}

TEST_CASE("running_average: single episode, pair, brute-force recomputation") {
  std::vector<EpisodeRecord> records(1);
  records[0].ratio = 0.5;
  CHECK(running_average(records, 1) == 0.5);

  records.resize(2);
  records[0].ratio = 1.0;
  records[1].ratio = 0.0;
  CHECK(running_average(records, 2) == 0.5);

  CHECK_THROWS_AS(running_average(records, 0), std::invalid_argument);
  CHECK_THROWS_AS(running_average(records, 3), std::invalid_argument);

  const auto longer = synthetic_records(500);
  double sum = 0.0;
  for (const auto& r : longer) sum += r.ratio;
  CHECK(running_average(longer, 500) == doctest::Approx(sum / 500.0).epsilon(1e-15));
}

TEST_CASE("convergence CSV: header-only, small example, exact prefix means") {
  SUBCASE("no records leaves a header-only file") {
    std::ostringstream out;
    write_convergence_csv({}, out);
    CHECK(out.str() == "episode,current_ratio,average_ratio\n");
  }

  SUBCASE("ratios (1.0, 0.0) average to (1.0, 0.5)") {
    std::vector<EpisodeRecord> records(2);
    records[0].episode = 0;
    records[0].ratio = 1.0;
    records[1].episode = 1;
    records[1].ratio = 0.0;
    std::ostringstream out;
    write_convergence_csv(records, out);
    CHECK(out.str() == "episode,current_ratio,average_ratio\n0,1,1\n1,0,0.5\n");
  }

  SUBCASE("the average column is recomputable from the file alone") {
    const auto records = synthetic_records(500);
    std::ostringstream out;
    write_convergence_csv(records, out);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    double sum = 0.0;
    int row = 0;
    while (std::getline(in, line)) {
      const size_t c1 = line.find(',');
      const size_t c2 = line.find(',', c1 + 1);
      const double current = std::strtod(line.substr(c1 + 1, c2 - c1 - 1).c_str(), nullptr);
      const double average = std::strtod(line.substr(c2 + 1).c_str(), nullptr);
      CHECK(current == records[row].ratio);  // parse must be exact
      sum += current;
      CHECK(average == sum / (row + 1));
      ++row;
    }
    CHECK(row == 500);
  }
}

TEST_CASE("episode CSV: exact header, round-trip of all fields") {
  CHECK(std::string(kEpisodeCsvHeader) ==
        "episode,start_row,start_col,optimal_len,steps,ratio,reached_goal,truncated,"
        "epsilon,mean_loss");

  const auto records = synthetic_records(120);
  std::ostringstream out;
  write_episode_csv_header(out);
  for (const auto& r : records) append_episode_csv(out, r);

  std::istringstream in(out.str());
  const auto parsed = read_episode_csv(in);
  REQUIRE(parsed.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i].episode == records[i].episode);
    CHECK(parsed[i].start == records[i].start);
    CHECK(parsed[i].optimal_len == records[i].optimal_len);
    CHECK(parsed[i].steps_taken == records[i].steps_taken);
    CHECK(parsed[i].ratio == records[i].ratio);
    CHECK(parsed[i].reached_goal == records[i].reached_goal);
    CHECK(parsed[i].truncated == records[i].truncated);
    CHECK(parsed[i].epsilon == records[i].epsilon);
    CHECK(parsed[i].mean_loss == records[i].mean_loss);
  }
}

TEST_CASE("path CSV round-trips") {
  const SaccadePath path{{0, 0}, {0, 1}, {1, 1}, {1, 1}, {2, 1}};
  std::ostringstream out;
  write_path_csv(path, out);
  std::istringstream in(out.str());
  CHECK(read_path_csv(in) == path);
}

TEST_CASE("render_path: image geometry, determinism, markers") {
  const Maze maze = generate_random(20, 20, 31);

  SUBCASE("a 20x20 maze renders to a valid 320x320 P6 image") {
    std::ostringstream out(std::ios::binary);
    render_path(maze, {}, out);
    const std::string data = out.str();
    int w = 0;
    int h = 0;
    int maxval = 0;
    int header_len = 0;
    REQUIRE(std::sscanf(data.c_str(), "P6\n%d %d\n%d\n%n", &w, &h, &maxval, &header_len) == 3);
    CHECK(w == 20 * kCellPx);
    CHECK(h == 20 * kCellPx);
    CHECK(maxval == 255);
    CHECK(data.size() == static_cast<size_t>(header_len) + 3u * w * h);
  }

  SUBCASE("rendering is deterministic") {
    const SaccadePath path{{0, 0}, {0, 1}, {1, 1}};
    std::ostringstream a(std::ios::binary);
    std::ostringstream b(std::ios::binary);
    render_path(maze, path, a);
    render_path(maze, path, b);
    CHECK(a.str() == b.str());
  }

  SUBCASE("single-cell path draws the white agent circle") {
    const Position pos = maze.goal == Position{5, 7} ? Position{6, 7} : Position{5, 7};
    std::ostringstream out(std::ios::binary);
    render_path(maze, {pos}, out);
    const std::string data = out.str();
    int w = 0;
    int h = 0;
    int maxval = 0;
    int header_len = 0;
    REQUIRE(std::sscanf(data.c_str(), "P6\n%d %d\n%d\n%n", &w, &h, &maxval, &header_len) == 3);
    const int cx = pos.col * kCellPx + kCellPx / 2;
    const int cy = pos.row * kCellPx + kCellPx / 2;
    const size_t idx = header_len + 3u * (static_cast<size_t>(cy) * w + cx);
    CHECK(static_cast<unsigned char>(data[idx]) == 255);
    CHECK(static_cast<unsigned char>(data[idx + 1]) == 255);
    CHECK(static_cast<unsigned char>(data[idx + 2]) == 255);
  }

  SUBCASE("goal cell carries the red cross") {
    std::ostringstream out(std::ios::binary);
    render_path(maze, {}, out);
    const std::string data = out.str();
    int w = 0;
    int h = 0;
    int maxval = 0;
    int header_len = 0;
    REQUIRE(std::sscanf(data.c_str(), "P6\n%d %d\n%d\n%n", &w, &h, &maxval, &header_len) == 3);
    // center of the goal cell lies on both diagonals of the cross
    const int cx = maze.goal.col * kCellPx + kCellPx / 2;
    const int cy = maze.goal.row * kCellPx + kCellPx / 2;
    const size_t idx = header_len + 3u * (static_cast<size_t>(cy) * w + cx);
    CHECK(static_cast<unsigned char>(data[idx]) == 230);
    CHECK(static_cast<unsigned char>(data[idx + 1]) == 40);
    CHECK(static_cast<unsigned char>(data[idx + 2]) == 40);
  }

  SUBCASE("out-of-bounds path positions are rejected") {
    CHECK_THROWS_AS(
        [&] {
          std::ostringstream out;
          render_path(maze, {{0, 20}}, out);
        }(),
        std::invalid_argument);
  }
}

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.0, 1.0, 0.5, 23.0 / 27.0, 1e-17, -0.851851851851, 1.0 / 3.0}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_SUITE_END();
