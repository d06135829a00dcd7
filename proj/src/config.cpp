#include "amber/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "amber/env.hpp"

namespace amber {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& message) {
  throw std::invalid_argument("config field '" + field + "': " + message);
}

}  // namespace

void TrainConfig::validate() const {
  try {
    make_env(env);
  } catch (const std::invalid_argument& e) {
    bad_field("env", e.what());
  }
  if (horizon < 1) bad_field("horizon", "must be positive");
  if (minibatch < 1) bad_field("minibatch", "must be positive");
  if (horizon % minibatch != 0) bad_field("horizon", "must be divisible by minibatch");
  if (replay_length < 1) bad_field("replay_length", "must be at least 1");
  if (epochs < 1) bad_field("epochs", "must be at least 1");
  if (gamma < 0.0 || gamma > 1.0) bad_field("gamma", "must be in [0, 1]");
  if (lambda < 0.0 || lambda > 1.0) bad_field("lambda", "must be in [0, 1]");
  if (!(step_size >= 0.0) || !std::isfinite(step_size)) {
    bad_field("step_size", "must be a nonnegative finite value");
  }
  if (!(clip >= 0.0) || !std::isfinite(clip)) {
    bad_field("clip", "must be a nonnegative finite value");
  }
  if (!(batch_drop >= 0.0)) bad_field("batch_drop", "must be nonnegative (inf allowed)");
  if (!(c_v > 0.0)) bad_field("c_v", "must be positive");
  if (total_steps < 1) bad_field("total_steps", "must be positive");
  if (total_steps % horizon != 0) bad_field("total_steps", "must be divisible by horizon");
  if (fixed_minibatch && episodic_minibatch) {
    bad_field("episodic_minibatch", "incompatible with fixed_minibatch");
  }
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::vector<std::pair<std::string, std::string>> TrainConfig::items() const {
  return {
      {"env", env},
      {"total_steps", std::to_string(total_steps)},
      {"horizon", std::to_string(horizon)},
      {"minibatch", std::to_string(minibatch)},
      {"replay_length", std::to_string(replay_length)},
      {"epochs", std::to_string(epochs)},
      {"gamma", format_double(gamma)},
      {"lambda", format_double(lambda)},
      {"step_size", format_double(step_size)},
      {"clip", format_double(clip)},
      {"batch_drop", format_double(batch_drop)},
      {"c_v", format_double(c_v)},
      {"adaptive", adaptive ? "true" : "false"},
      {"seed", std::to_string(seed)},
      {"normalize_advantages", normalize_advantages ? "true" : "false"},
      {"bootstrap_on_timeout", bootstrap_on_timeout ? "true" : "false"},
      {"fixed_minibatch", fixed_minibatch ? "true" : "false"},
      {"episodic_minibatch", episodic_minibatch ? "true" : "false"},
  };
}

namespace {

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_field(key, "expected true/false, got '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') {
    bad_field(key, "expected a number, got '" + value + "'");
  }
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') {
    bad_field(key, "expected an integer, got '" + value + "'");
  }
  return v;
}

uint64_t parse_u64(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') {
    bad_field(key, "expected an unsigned integer, got '" + value + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void apply_config_value(TrainConfig& c, const std::string& key, const std::string& value) {
  if (key == "env") c.env = value;
  else if (key == "total_steps") c.total_steps = parse_long(key, value);
  else if (key == "horizon") c.horizon = static_cast<int>(parse_long(key, value));
  else if (key == "minibatch") c.minibatch = static_cast<int>(parse_long(key, value));
  else if (key == "replay_length") c.replay_length = static_cast<int>(parse_long(key, value));
  else if (key == "epochs") c.epochs = static_cast<int>(parse_long(key, value));
  else if (key == "gamma") c.gamma = parse_double(key, value);
  else if (key == "lambda") c.lambda = parse_double(key, value);
  else if (key == "step_size") c.step_size = parse_double(key, value);
  else if (key == "clip") c.clip = parse_double(key, value);
  else if (key == "batch_drop") c.batch_drop = parse_double(key, value);
  else if (key == "c_v") c.c_v = parse_double(key, value);
  else if (key == "adaptive") c.adaptive = parse_bool(key, value);
  else if (key == "seed") c.seed = parse_u64(key, value);
  else if (key == "normalize_advantages") c.normalize_advantages = parse_bool(key, value);
  else if (key == "bootstrap_on_timeout") c.bootstrap_on_timeout = parse_bool(key, value);
  else if (key == "fixed_minibatch") c.fixed_minibatch = parse_bool(key, value);
  else if (key == "episodic_minibatch") c.episodic_minibatch = parse_bool(key, value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

TrainConfig parse_config_text(const std::string& text, TrainConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    apply_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

TrainConfig load_config_file(const std::string& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), std::move(base));
}

}  // namespace amber
