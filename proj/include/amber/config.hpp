#ifndef AMBER_CONFIG_HPP_
#define AMBER_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace amber {

// Full run configuration. Defaults are the adaptive-replay setup: replay
// length 8, initial clip 0.4, initial batch drop factor 0.25, adaptive
// mini-batch sizing.
struct TrainConfig {
  std::string env = "pendulum";
  long total_steps = 307200;        // T, divisible by horizon
  int horizon = 2048;               // N, samples collected per iteration
  int minibatch = 64;               // base mini-batch size M_PPO
  int replay_length = 8;            // L
  int epochs = 10;                  // S
  double gamma = 0.99;
  double lambda = 0.95;
  double step_size = 3e-4;          // initial Adam step size
  double clip = 0.4;                // initial clipping factor
  double batch_drop = 0.25;         // initial batch drop factor; inf never drops
  double c_v = 1.0;                 // value loss coefficient
  bool adaptive = true;
  uint64_t seed = 0;
  bool normalize_advantages = true;
  bool bootstrap_on_timeout = false;
  bool fixed_minibatch = false;     // diagnostic: M = M_PPO, epochs span the pool
  bool episodic_minibatch = false;  // test-only: contiguous segments

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  // Fixed-order key/value view used by the manifest and the config writer.
  std::vector<std::pair<std::string, std::string>> items() const;
};

// Flat key=value text, '#' comments, blank lines ignored. Unknown keys and
// malformed values throw std::invalid_argument naming the key.
TrainConfig parse_config_text(const std::string& text, TrainConfig base = {});
TrainConfig load_config_file(const std::string& path, TrainConfig base = {});
void apply_config_value(TrainConfig& config, const std::string& key, const std::string& value);

std::string format_double(double v);  // shortest round-trip decimal form

}  // namespace amber

#endif  // AMBER_CONFIG_HPP_
