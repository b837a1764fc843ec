#pragma once

// Two-layer perceptron with per-output prediction gradients, eligibility
// traces and the TD(lambda) weight update.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lerpalab::net {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a weight, prediction or TD error stops being finite.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputActivation { kSigmoid, kLinear };

std::string to_string(OutputActivation activation);
OutputActivation parse_activation(const std::string& text);

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Hidden layer is always sigmoid. The last column of each weight matrix is
// the bias, fed by an implicit constant 1 input.
struct Network {
  std::size_t n_in = 0;
  std::size_t n_hidden = 0;
  std::size_t n_out = 0;
  Matrix hidden_weights;  // n_hidden x (n_in + 1)
  Matrix output_weights;  // n_out x (n_hidden + 1)
  OutputActivation output_activation = OutputActivation::kSigmoid;

  bool all_finite() const;
  friend bool operator==(const Network&, const Network&) = default;
};

struct TdParams {
  double alpha = 0.1;
  double lambda = 0.1;
  double epsilon = 0.01;

  // Throws std::invalid_argument when a parameter is out of range.
  void validate() const;
};

struct ActivationCache {
  std::vector<double> inputs;
  std::vector<double> hidden_sums;
  std::vector<double> hidden_outputs;
  std::vector<double> output_sums;
  std::vector<double> outputs;
};

// Prediction gradients, one set per output k. These are dP_k/dw, not loss
// gradients.
struct GradientCache {
  std::vector<double> output_sensitivities;  // dP_k/ds_k, length n_out
  Matrix hidden_sensitivities;               // n_out x n_hidden, dP_k/ds_i
  std::vector<Matrix> hidden_grads;          // per k, shaped like hidden_weights
  std::vector<Matrix> output_grads;          // per k, shaped like output_weights
};

struct TraceSet {
  std::vector<Matrix> hidden;  // per output k
  std::vector<Matrix> output;  // per output k

  static TraceSet zeros_like(const Network& net);
  void reset();
  bool all_zero() const;
  bool matches(const Network& net) const;
};

Network init_network(std::size_t n_in, std::size_t n_hidden, std::size_t n_out,
                     OutputActivation output_activation, std::uint64_t seed);

inline double sigmoid(double x) {
  // exp(-x) overflows to inf for very negative x, which still yields 0.
  return 1.0 / (1.0 + std::exp(-x));
}

ActivationCache forward(const Network& net, std::span<const double> x);

// Buffer-reusing variant for hot loops.
void forward_into(const Network& net, std::span<const double> x, ActivationCache& cache);

GradientCache backprop_sensitivities(const Network& net, const ActivationCache& cache);

// e <- lambda * e + grad, elementwise, for every output k.
void update_traces(TraceSet& traces, const GradientCache& grads, double lambda);

// w <- w + alpha * sum_k (p_next[k] - p_t[k]) * e_k. Throws InstabilityError on
// a non-finite TD error or weight; the network is left untouched in the
// former case.
void td_weight_update(Network& net, const TraceSet& traces, double alpha,
                      std::span<const double> p_t, std::span<const double> p_next);

struct TrainingPair {
  std::vector<double> features;
  std::vector<double> target;
  double weight = 1.0;
};

// Full-batch gradient descent on sum w_i ||target_i - output_i||^2 / (2 sum w_i).
// With unit weights this is the plain 1/(2N) mean.
void supervised_train(Network& net, std::span<const TrainingPair> batch, double alpha,
                      int epochs);

// Mean over pairs and outputs of the squared error.
double mean_squared_error(const Network& net, std::span<const TrainingPair> batch);

// Drives TD(lambda) through one episode. Each observe() takes the forward
// cache of the prediction just made; the previous prediction is moved toward
// it, then the traces absorb the new gradient. finish() moves the last
// prediction toward the terminal target and resets the traces.
class TdLearner {
 public:
  TdLearner() = default;
  TdLearner(const Network& net, double alpha, double lambda);

  void begin_episode();
  void observe(Network& net, const ActivationCache& cache);
  void finish(Network& net, std::span<const double> target);

  bool has_prediction() const { return has_prediction_; }
  const TraceSet& traces() const { return traces_; }
  std::size_t updates() const { return updates_; }
  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }

 private:
  double alpha_ = 0.1;
  double lambda_ = 0.0;
  TraceSet traces_;
  std::vector<double> last_prediction_;
  bool has_prediction_ = false;
  std::size_t updates_ = 0;
};

}  // namespace lerpalab::net
