#include "amber/net.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace amber {

int Mlp::param_count() const {
  return static_cast<int>(w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + b3.size());
}

Mlp Mlp::zeros(int input_dim, int output_dim) {
  Mlp net;
  net.w1 = Eigen::MatrixXd::Zero(kHiddenWidth, input_dim);
  net.b1 = Eigen::VectorXd::Zero(kHiddenWidth);
  net.w2 = Eigen::MatrixXd::Zero(kHiddenWidth, kHiddenWidth);
  net.b2 = Eigen::VectorXd::Zero(kHiddenWidth);
  net.w3 = Eigen::MatrixXd::Zero(output_dim, kHiddenWidth);
  net.b3 = Eigen::VectorXd::Zero(output_dim);
  return net;
}

namespace {

// Orthogonal rows/columns scaled by gain, via QR of a Gaussian matrix with
// the sign of the R diagonal fixed for a unique decomposition.
Eigen::MatrixXd orthogonal_init(int rows, int cols, double gain, Rng& rng) {
  const bool transpose = rows < cols;
  const int r = transpose ? cols : rows;
  const int c = transpose ? rows : cols;
  Eigen::MatrixXd gaussian(r, c);
  for (int j = 0; j < c; ++j) {
    for (int i = 0; i < r; ++i) {
      gaussian(i, j) = rng.normal();
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(r, c);
  const Eigen::MatrixXd rmat = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
  for (int j = 0; j < c; ++j) {
    if (rmat(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  Eigen::MatrixXd result = transpose ? Eigen::MatrixXd(q.transpose()) : q;
  return gain * result;
}

}  // namespace

Mlp make_mlp(int input_dim, int output_dim, double output_gain, Rng& rng) {
  if (input_dim < 1 || output_dim < 1) {
    throw std::invalid_argument("mlp: dimensions must be positive");
  }
  const double hidden_gain = std::sqrt(2.0);
  Mlp net;
  net.w1 = orthogonal_init(kHiddenWidth, input_dim, hidden_gain, rng);
  net.b1 = Eigen::VectorXd::Zero(kHiddenWidth);
  net.w2 = orthogonal_init(kHiddenWidth, kHiddenWidth, hidden_gain, rng);
  net.b2 = Eigen::VectorXd::Zero(kHiddenWidth);
  net.w3 = orthogonal_init(output_dim, kHiddenWidth, output_gain, rng);
  net.b3 = Eigen::VectorXd::Zero(output_dim);
  return net;
}

namespace {

void check_input_dim(const Mlp& net, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() != net.w1.cols()) {
    throw std::invalid_argument("mlp: input has dimension " +
                                std::to_string(inputs.rows()) + ", expected " +
                                std::to_string(net.w1.cols()));
  }
}

}  // namespace

Eigen::MatrixXd mlp_forward(const Mlp& net, const Eigen::MatrixXd& inputs, MlpCache& cache) {
  check_input_dim(net, inputs);
  cache.inputs = inputs;
  cache.h1 = ((net.w1 * inputs).colwise() + net.b1).array().tanh();
  cache.h2 = ((net.w2 * cache.h1).colwise() + net.b2).array().tanh();
  return (net.w3 * cache.h2).colwise() + net.b3;
}

Eigen::MatrixXd mlp_forward(const Mlp& net, const Eigen::MatrixXd& inputs) {
  check_input_dim(net, inputs);
  const Eigen::MatrixXd h1 = ((net.w1 * inputs).colwise() + net.b1).array().tanh();
  const Eigen::MatrixXd h2 = ((net.w2 * h1).colwise() + net.b2).array().tanh();
  return (net.w3 * h2).colwise() + net.b3;
}

Eigen::VectorXd mlp_forward(const Mlp& net, const Eigen::VectorXd& input) {
  return mlp_forward(net, Eigen::MatrixXd(input)).col(0);
}

MlpBackward mlp_backward(const Mlp& net, const MlpCache& cache,
                         const Eigen::MatrixXd& output_grads) {
  if (output_grads.rows() != net.w3.rows() || output_grads.cols() != cache.inputs.cols()) {
    throw std::invalid_argument("mlp: output gradient shape mismatch");
  }
  MlpBackward result;
  // Linear output layer.
  result.grads.w3 = output_grads * cache.h2.transpose();
  result.grads.b3 = output_grads.rowwise().sum();
  // d tanh(x) = 1 - tanh(x)^2, evaluated from the cached activations.
  const Eigen::MatrixXd d2 =
      (net.w3.transpose() * output_grads).array() * (1.0 - cache.h2.array().square());
  result.grads.w2 = d2 * cache.h1.transpose();
  result.grads.b2 = d2.rowwise().sum();
  const Eigen::MatrixXd d1 =
      (net.w2.transpose() * d2).array() * (1.0 - cache.h1.array().square());
  result.grads.w1 = d1 * cache.inputs.transpose();
  result.grads.b1 = d1.rowwise().sum();
  result.input_grads = net.w1.transpose() * d1;
  return result;
}

namespace {

int append_flat(Eigen::VectorXd& flat, int offset, const Eigen::MatrixXd& m) {
  flat.segment(offset, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
  return offset + static_cast<int>(m.size());
}

int read_flat(const Eigen::Ref<const Eigen::VectorXd>& flat, int offset, Eigen::MatrixXd& m) {
  Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) = flat.segment(offset, m.size());
  return offset + static_cast<int>(m.size());
}

int read_flat(const Eigen::Ref<const Eigen::VectorXd>& flat, int offset, Eigen::VectorXd& v) {
  v = flat.segment(offset, v.size());
  return offset + static_cast<int>(v.size());
}

}  // namespace

Eigen::VectorXd mlp_to_flat(const Mlp& net) {
  Eigen::VectorXd flat(net.param_count());
  int offset = 0;
  offset = append_flat(flat, offset, net.w1);
  flat.segment(offset, net.b1.size()) = net.b1;
  offset += static_cast<int>(net.b1.size());
  offset = append_flat(flat, offset, net.w2);
  flat.segment(offset, net.b2.size()) = net.b2;
  offset += static_cast<int>(net.b2.size());
  offset = append_flat(flat, offset, net.w3);
  flat.segment(offset, net.b3.size()) = net.b3;
  return flat;
}

void mlp_from_flat(Mlp& net, const Eigen::Ref<const Eigen::VectorXd>& flat) {
  if (flat.size() != net.param_count()) {
    throw std::invalid_argument("mlp: flat parameter size mismatch");
  }
  int offset = 0;
  offset = read_flat(flat, offset, net.w1);
  offset = read_flat(flat, offset, net.b1);
  offset = read_flat(flat, offset, net.w2);
  offset = read_flat(flat, offset, net.b2);
  offset = read_flat(flat, offset, net.w3);
  offset = read_flat(flat, offset, net.b3);
}

void adam_step(AdamState& state, Eigen::VectorXd& params,
               const Eigen::VectorXd& grad, double step_size) {
  if (params.size() != state.m.size() || grad.size() != state.m.size()) {
    throw std::invalid_argument("adam: parameter/gradient size mismatch");
  }
  if (!grad.allFinite()) {
    throw std::runtime_error("adam: non-finite gradient, aborting update");
  }
  if (step_size < 0.0) {
    throw std::invalid_argument("adam: negative step size");
  }
  state.step += 1;
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * grad.array().square().matrix();
  const double mhat_scale = 1.0 / (1.0 - std::pow(state.beta1, state.step));
  const double vhat_scale = 1.0 / (1.0 - std::pow(state.beta2, state.step));
  params.array() -= step_size * (state.m.array() * mhat_scale) /
                    ((state.v.array() * vhat_scale).sqrt() + state.eps);
}

namespace {
constexpr char kParamsMagic[] = "amber-params";
constexpr int kParamsVersion = 1;
}  // namespace

void save_named_arrays(std::ostream& out, const NamedArrays& arrays) {
  out << kParamsMagic << " " << kParamsVersion << "\n";
  out << arrays.size() << "\n";
  char buf[64];
  for (const auto& [name, values] : arrays) {
    out << name << " " << values.size() << "\n";
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%a", values[i]);
      out << buf << ((i + 1) % 8 == 0 || i + 1 == values.size() ? "\n" : " ");
    }
  }
}

NamedArrays load_named_arrays(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kParamsMagic || version != kParamsVersion) {
    throw std::runtime_error("params file: bad header");
  }
  size_t count = 0;
  if (!(in >> count)) {
    throw std::runtime_error("params file: missing array count");
  }
  NamedArrays arrays;
  arrays.reserve(count);
  for (size_t a = 0; a < count; ++a) {
    std::string name;
    Eigen::Index n = 0;
    if (!(in >> name >> n) || n < 0) {
      throw std::runtime_error("params file: bad array header");
    }
    Eigen::VectorXd values(n);
    std::string token;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(in >> token)) {
        throw std::runtime_error("params file: truncated array " + name);
      }
      char* end = nullptr;
      values[i] = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0') {
        throw std::runtime_error("params file: bad value in array " + name);
      }
    }
    arrays.emplace_back(std::move(name), std::move(values));
  }
  return arrays;
}

}  // namespace amber
