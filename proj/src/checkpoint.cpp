#include "saccade/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace saccade {

namespace {

constexpr const char* kMagic = "saccade-checkpoint";
constexpr const char* kVersion = "v1";

void put_double(std::ostream& out, double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%a", value);
  out << buf;
}

void put_vector(std::ostream& out, const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ' ';
    put_double(out, values[i]);
  }
  out << '\n';
}

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string token;
    if (!(in_ >> token)) throw std::runtime_error("checkpoint: unexpected end of file");
    return token;
  }

  void expect(const std::string& expected) {
    const std::string token = next();
    if (token != expected) {
      throw std::runtime_error("checkpoint: expected '" + expected + "', got '" + token + "'");
    }
  }

  double next_double() {
    const std::string token = next();
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
      throw std::runtime_error("checkpoint: bad number '" + token + "'");
    }
    return value;
  }

  long long next_int() {
    const std::string token = next();
    try {
      return std::stoll(token);
    } catch (const std::exception&) {
      throw std::runtime_error("checkpoint: bad integer '" + token + "'");
    }
  }

  uint64_t next_u64() {
    const std::string token = next();
    try {
      return std::stoull(token);
    } catch (const std::exception&) {
      throw std::runtime_error("checkpoint: bad integer '" + token + "'");
    }
  }

  void read_vector(std::vector<double>& out, size_t count) {
    out.resize(count);
    for (size_t i = 0; i < count; ++i) out[i] = next_double();
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_checkpoint(const Checkpoint& ckpt, std::ostream& out) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "layer_dims " << ckpt.params.layer_dims.size();
  for (int d : ckpt.params.layer_dims) out << ' ' << d;
  out << '\n';
  out << "train_steps " << ckpt.train_steps << '\n';

  const Hyperparams& h = ckpt.hyper;
  out << "alpha ";
  put_double(out, h.alpha);
  out << "\ngamma ";
  put_double(out, h.gamma);
  out << "\nepsilon_start ";
  put_double(out, h.epsilon_start);
  out << "\nepsilon_end ";
  put_double(out, h.epsilon_end);
  out << "\nepsilon_decay_steps " << h.epsilon_decay_steps << '\n';
  out << "batch_size " << h.batch_size << '\n';
  out << "replay_capacity " << h.replay_capacity << '\n';
  out << "hidden_size " << h.hidden_size << '\n';
  out << "max_episode_steps " << h.max_episode_steps << '\n';
  out << "warmup_experiences " << h.warmup_experiences << '\n';
  out << "seed " << h.seed << '\n';

  for (size_t l = 0; l < ckpt.params.weights.size(); ++l) {
    out << "weights " << l << ' ' << ckpt.params.weights[l].size() << '\n';
    put_vector(out, ckpt.params.weights[l]);
    out << "biases " << l << ' ' << ckpt.params.biases[l].size() << '\n';
    put_vector(out, ckpt.params.biases[l]);
  }

  if (ckpt.has_replay) {
    out << "replay " << ckpt.replay_entries.size() << ' ' << ckpt.replay_capacity << ' '
        << ckpt.replay_insert_count << '\n';
    for (const Experience& e : ckpt.replay_entries) {
      out << "exp " << e.state.size() << ' ';
      for (double v : e.state) {
        put_double(out, v);
        out << ' ';
      }
      out << static_cast<int>(e.action) << ' ';
      put_double(out, e.reward);
      out << ' ';
      for (double v : e.next_state) {
        put_double(out, v);
        out << ' ';
      }
      out << (e.terminal ? 1 : 0) << '\n';
    }
  }
  out << "end\n";
}

Checkpoint read_checkpoint(std::istream& in) {
  TokenReader reader(in);
  reader.expect(kMagic);
  reader.expect(kVersion);

  Checkpoint ckpt;
  reader.expect("layer_dims");
  const long long dim_count = reader.next_int();
  if (dim_count < 2 || dim_count > 64) throw std::runtime_error("checkpoint: bad layer count");
  for (long long i = 0; i < dim_count; ++i) {
    ckpt.params.layer_dims.push_back(static_cast<int>(reader.next_int()));
  }
  reader.expect("train_steps");
  ckpt.train_steps = reader.next_int();

  Hyperparams& h = ckpt.hyper;
  reader.expect("alpha");
  h.alpha = reader.next_double();
  reader.expect("gamma");
  h.gamma = reader.next_double();
  reader.expect("epsilon_start");
  h.epsilon_start = reader.next_double();
  reader.expect("epsilon_end");
  h.epsilon_end = reader.next_double();
  reader.expect("epsilon_decay_steps");
  h.epsilon_decay_steps = static_cast<int>(reader.next_int());
  reader.expect("batch_size");
  h.batch_size = static_cast<int>(reader.next_int());
  reader.expect("replay_capacity");
  h.replay_capacity = static_cast<int>(reader.next_int());
  reader.expect("hidden_size");
  h.hidden_size = static_cast<int>(reader.next_int());
  reader.expect("max_episode_steps");
  h.max_episode_steps = static_cast<int>(reader.next_int());
  reader.expect("warmup_experiences");
  h.warmup_experiences = static_cast<int>(reader.next_int());
  reader.expect("seed");
  h.seed = reader.next_u64();

  for (size_t l = 0; l + 1 < ckpt.params.layer_dims.size(); ++l) {
    reader.expect("weights");
    if (reader.next_int() != static_cast<long long>(l)) {
      throw std::runtime_error("checkpoint: weight layers out of order");
    }
    const size_t w_count = static_cast<size_t>(reader.next_int());
    const size_t expect_w = static_cast<size_t>(ckpt.params.layer_dims[l]) *
                            static_cast<size_t>(ckpt.params.layer_dims[l + 1]);
    if (w_count != expect_w) throw std::runtime_error("checkpoint: weight count mismatch");
    ckpt.params.weights.emplace_back();
    reader.read_vector(ckpt.params.weights.back(), w_count);

    reader.expect("biases");
    if (reader.next_int() != static_cast<long long>(l)) {
      throw std::runtime_error("checkpoint: bias layers out of order");
    }
    const size_t b_count = static_cast<size_t>(reader.next_int());
    if (b_count != static_cast<size_t>(ckpt.params.layer_dims[l + 1])) {
      throw std::runtime_error("checkpoint: bias count mismatch");
    }
    ckpt.params.biases.emplace_back();
    reader.read_vector(ckpt.params.biases.back(), b_count);
  }

  std::string token = reader.next();
  if (token == "replay") {
    ckpt.has_replay = true;
    const size_t count = static_cast<size_t>(reader.next_int());
    ckpt.replay_capacity = static_cast<size_t>(reader.next_int());
    ckpt.replay_insert_count = reader.next_u64();
    for (size_t i = 0; i < count; ++i) {
      reader.expect("exp");
      Experience e;
      const size_t len = static_cast<size_t>(reader.next_int());
      reader.read_vector(e.state, len);
      e.action = static_cast<Action>(reader.next_int());
      e.reward = reader.next_double();
      reader.read_vector(e.next_state, len);
      e.terminal = reader.next_int() != 0;
      ckpt.replay_entries.push_back(std::move(e));
    }
    token = reader.next();
  }
  if (token != "end") throw std::runtime_error("checkpoint: missing end marker");
  return ckpt;
}

void save_checkpoint(const NetworkParams& params, const Hyperparams& hyper, int64_t train_steps,
                     const std::string& path, const ReplayMemory* replay) {
  Checkpoint ckpt;
  ckpt.params = params;
  ckpt.hyper = hyper;
  ckpt.train_steps = train_steps;
  if (replay != nullptr) {
    ckpt.has_replay = true;
    ckpt.replay_capacity = replay->capacity();
    ckpt.replay_insert_count = replay->insert_count();
    ckpt.replay_entries = replay->snapshot();
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_checkpoint(ckpt, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return read_checkpoint(in);
}

}  // namespace saccade
