#ifndef AMBER_NET_HPP_
#define AMBER_NET_HPP_

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "amber/rng.hpp"

namespace amber {

inline constexpr int kHiddenWidth = 64;

// Fully connected input -> 64 -> 64 -> output network with tanh hidden
// activations and a linear output layer. All arithmetic is double precision.
struct Mlp {
  Eigen::MatrixXd w1, w2, w3;  // (64, in), (64, 64), (out, 64)
  Eigen::VectorXd b1, b2, b3;

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int output_dim() const { return static_cast<int>(w3.rows()); }
  int param_count() const;

  static Mlp zeros(int input_dim, int output_dim);
};

// Scaled orthogonal initialization: hidden layers use gain sqrt(2), the
// output layer uses output_gain; all biases start at zero.
Mlp make_mlp(int input_dim, int output_dim, double output_gain, Rng& rng);

// Post-activation values kept from a forward pass for the backward pass.
struct MlpCache {
  Eigen::MatrixXd inputs;  // (in, n)
  Eigen::MatrixXd h1, h2;  // (64, n)
};

// Forward passes are pure functions of (params, inputs); columns are samples.
Eigen::MatrixXd mlp_forward(const Mlp& net, const Eigen::MatrixXd& inputs);
Eigen::MatrixXd mlp_forward(const Mlp& net, const Eigen::MatrixXd& inputs, MlpCache& cache);
Eigen::VectorXd mlp_forward(const Mlp& net, const Eigen::VectorXd& input);

// Exact reverse-mode gradients of sum_j <output_j, output_grad_j> with
// respect to the parameters and the inputs.
struct MlpBackward {
  Mlp grads;
  Eigen::MatrixXd input_grads;  // (in, n)
};
MlpBackward mlp_backward(const Mlp& net, const MlpCache& cache,
                         const Eigen::MatrixXd& output_grads);

// Flat parameter order: w1 (column-major), b1, w2, b2, w3, b3.
Eigen::VectorXd mlp_to_flat(const Mlp& net);
void mlp_from_flat(Mlp& net, const Eigen::Ref<const Eigen::VectorXd>& flat);

// Adam with bias correction. The update is a descent step
// p -= step_size * mhat / (sqrt(vhat) + eps); callers wanting ascent pass
// the negated gradient.
struct AdamState {
  Eigen::VectorXd m, v;
  long step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-5;

  explicit AdamState(int n)
      : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}
};

// Throws std::runtime_error if the gradient contains a non-finite entry.
void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad, double step_size);

// Checkpoint format "amber-params 1": named flat arrays of doubles written
// as C hexfloats, one array per section. Round-trips bit-exactly.
using NamedArrays = std::vector<std::pair<std::string, Eigen::VectorXd>>;
void save_named_arrays(std::ostream& out, const NamedArrays& arrays);
NamedArrays load_named_arrays(std::istream& in);

}  // namespace amber

#endif  // AMBER_NET_HPP_
