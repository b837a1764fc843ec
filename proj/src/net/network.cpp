#include "lerpalab/net/network.hpp"

#include <cmath>
#include <random>

namespace lerpalab::net {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

double output_derivative(OutputActivation act, double output) {
  return act == OutputActivation::kSigmoid ? output * (1.0 - output) : 1.0;
}

double activate_output(OutputActivation act, double sum) {
  return act == OutputActivation::kSigmoid ? sigmoid(sum) : sum;
}

bool finite_all(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::string to_string(OutputActivation activation) {
  return activation == OutputActivation::kSigmoid ? "sigmoid" : "linear";
}

OutputActivation parse_activation(const std::string& text) {
  if (text == "sigmoid") return OutputActivation::kSigmoid;
  if (text == "linear") return OutputActivation::kLinear;
  throw std::invalid_argument("unknown output activation '" + text + "'");
}

bool Network::all_finite() const {
  return finite_all(hidden_weights.values()) && finite_all(output_weights.values());
}

void TdParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must lie in [0, 1]");
}

TraceSet TraceSet::zeros_like(const Network& net) {
  TraceSet t;
  t.hidden.assign(net.n_out, Matrix(net.n_hidden, net.n_in + 1));
  t.output.assign(net.n_out, Matrix(net.n_out, net.n_hidden + 1));
  return t;
}

void TraceSet::reset() {
  for (auto& m : hidden) m.fill(0.0);
  for (auto& m : output) m.fill(0.0);
}

bool TraceSet::all_zero() const {
  auto zero = [](const Matrix& m) {
    return std::all_of(m.values().begin(), m.values().end(), [](double v) { return v == 0.0; });
  };
  return std::all_of(hidden.begin(), hidden.end(), zero) &&
         std::all_of(output.begin(), output.end(), zero);
}

bool TraceSet::matches(const Network& net) const {
  if (hidden.size() != net.n_out || output.size() != net.n_out) return false;
  for (std::size_t k = 0; k < net.n_out; ++k) {
    if (!hidden[k].same_shape(net.hidden_weights) || !output[k].same_shape(net.output_weights))
      return false;
  }
  return true;
}

Network init_network(std::size_t n_in, std::size_t n_hidden, std::size_t n_out,
                     OutputActivation output_activation, std::uint64_t seed) {
  if (n_in == 0 || n_hidden == 0 || n_out == 0)
    throw DimensionError("network layer sizes must be at least 1");
  Network net;
  net.n_in = n_in;
  net.n_hidden = n_hidden;
  net.n_out = n_out;
  net.output_activation = output_activation;
  net.hidden_weights = Matrix(n_hidden, n_in + 1);
  net.output_weights = Matrix(n_out, n_hidden + 1);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  for (double& w : net.hidden_weights.values()) w = dist(rng);
  for (double& w : net.output_weights.values()) w = dist(rng);
  return net;
}

void forward_into(const Network& net, std::span<const double> x, ActivationCache& cache) {
  if (x.size() != net.n_in) throw DimensionError("input length does not match network");
  cache.inputs.assign(x.begin(), x.end());
  cache.hidden_sums.resize(net.n_hidden);
  cache.hidden_outputs.resize(net.n_hidden);
  cache.output_sums.resize(net.n_out);
  cache.outputs.resize(net.n_out);

  for (std::size_t i = 0; i < net.n_hidden; ++i) {
    auto w = net.hidden_weights.row(i);
    double s = w[net.n_in];
    for (std::size_t j = 0; j < net.n_in; ++j) {
      if (x[j] != 0.0) s += w[j] * x[j];
    }
    cache.hidden_sums[i] = s;
    cache.hidden_outputs[i] = sigmoid(s);
  }
  for (std::size_t k = 0; k < net.n_out; ++k) {
    auto w = net.output_weights.row(k);
    double s = w[net.n_hidden];
    for (std::size_t i = 0; i < net.n_hidden; ++i) s += w[i] * cache.hidden_outputs[i];
    cache.output_sums[k] = s;
    cache.outputs[k] = activate_output(net.output_activation, s);
  }
}

ActivationCache forward(const Network& net, std::span<const double> x) {
  ActivationCache cache;
  forward_into(net, x, cache);
  return cache;
}

GradientCache backprop_sensitivities(const Network& net, const ActivationCache& cache) {
  require(cache.inputs.size() == net.n_in && cache.hidden_outputs.size() == net.n_hidden &&
              cache.outputs.size() == net.n_out,
          "activation cache does not match network");

  GradientCache g;
  g.output_sensitivities.resize(net.n_out);
  g.hidden_sensitivities = Matrix(net.n_out, net.n_hidden);
  g.hidden_grads.assign(net.n_out, Matrix(net.n_hidden, net.n_in + 1));
  g.output_grads.assign(net.n_out, Matrix(net.n_out, net.n_hidden + 1));

  const auto& y = cache.hidden_outputs;
  const auto& x = cache.inputs;
  for (std::size_t k = 0; k < net.n_out; ++k) {
    const double dk = output_derivative(net.output_activation, cache.outputs[k]);
    g.output_sensitivities[k] = dk;

    auto out_row = g.output_grads[k].row(k);
    for (std::size_t i = 0; i < net.n_hidden; ++i) out_row[i] = dk * y[i];
    out_row[net.n_hidden] = dk;

    Matrix& hg = g.hidden_grads[k];
    for (std::size_t i = 0; i < net.n_hidden; ++i) {
      const double di = dk * net.output_weights(k, i) * y[i] * (1.0 - y[i]);
      g.hidden_sensitivities(k, i) = di;
      auto row = hg.row(i);
      for (std::size_t j = 0; j < net.n_in; ++j) row[j] = di * x[j];
      row[net.n_in] = di;
    }
  }
  return g;
}

void update_traces(TraceSet& traces, const GradientCache& grads, double lambda) {
  require(traces.hidden.size() == grads.hidden_grads.size() &&
              traces.output.size() == grads.output_grads.size(),
          "trace set does not match gradient cache");
  auto decay_add = [lambda](Matrix& e, const Matrix& g) {
    require(e.same_shape(g), "trace set does not match gradient cache");
    auto ev = e.values();
    auto gv = g.values();
    for (std::size_t n = 0; n < ev.size(); ++n) ev[n] = lambda * ev[n] + gv[n];
  };
  for (std::size_t k = 0; k < traces.hidden.size(); ++k) {
    decay_add(traces.hidden[k], grads.hidden_grads[k]);
    decay_add(traces.output[k], grads.output_grads[k]);
  }
}

void td_weight_update(Network& net, const TraceSet& traces, double alpha,
                      std::span<const double> p_t, std::span<const double> p_next) {
  require(p_t.size() == net.n_out && p_next.size() == net.n_out, "prediction length mismatch");
  require(traces.matches(net), "trace set does not match network");

  std::vector<double> td_error(net.n_out);
  for (std::size_t k = 0; k < net.n_out; ++k) {
    td_error[k] = p_next[k] - p_t[k];
    if (!std::isfinite(td_error[k])) throw InstabilityError("non-finite TD error");
  }

  auto apply = [&](Matrix& w, const std::vector<Matrix>& e) {
    auto wv = w.values();
    for (std::size_t n = 0; n < wv.size(); ++n) {
      double sum = 0.0;
      for (std::size_t k = 0; k < net.n_out; ++k) sum += td_error[k] * e[k].values()[n];
      wv[n] += alpha * sum;
    }
  };
  apply(net.hidden_weights, traces.hidden);
  apply(net.output_weights, traces.output);
  if (!net.all_finite()) throw InstabilityError("weights diverged to non-finite values");
}

void supervised_train(Network& net, std::span<const TrainingPair> batch, double alpha,
                      int epochs) {
  if (batch.empty() || epochs <= 0) return;
  double total_weight = 0.0;
  for (const auto& p : batch) {
    require(p.features.size() == net.n_in && p.target.size() == net.n_out,
            "training pair does not match network");
    require(p.weight >= 0.0 && std::isfinite(p.weight), "training pair weight must be finite and >= 0");
    total_weight += p.weight;
  }
  if (total_weight <= 0.0) return;

  const double scale = alpha / total_weight;
  Matrix hidden_acc(net.n_hidden, net.n_in + 1);
  Matrix output_acc(net.n_out, net.n_hidden + 1);
  ActivationCache cache;
  std::vector<double> out_delta(net.n_out);

  for (int epoch = 0; epoch < epochs; ++epoch) {
    hidden_acc.fill(0.0);
    output_acc.fill(0.0);
    for (const auto& pair : batch) {
      forward_into(net, pair.features, cache);
      const auto& y = cache.hidden_outputs;
      for (std::size_t k = 0; k < net.n_out; ++k) {
        out_delta[k] = pair.weight * (pair.target[k] - cache.outputs[k]) *
                       output_derivative(net.output_activation, cache.outputs[k]);
        auto acc = output_acc.row(k);
        for (std::size_t i = 0; i < net.n_hidden; ++i) acc[i] += out_delta[k] * y[i];
        acc[net.n_hidden] += out_delta[k];
      }
      for (std::size_t i = 0; i < net.n_hidden; ++i) {
        double back = 0.0;
        for (std::size_t k = 0; k < net.n_out; ++k) back += out_delta[k] * net.output_weights(k, i);
        const double di = back * y[i] * (1.0 - y[i]);
        auto acc = hidden_acc.row(i);
        for (std::size_t j = 0; j < net.n_in; ++j) {
          if (pair.features[j] != 0.0) acc[j] += di * pair.features[j];
        }
        acc[net.n_in] += di;
      }
    }
    auto hw = net.hidden_weights.values();
    auto ha = hidden_acc.values();
    for (std::size_t n = 0; n < hw.size(); ++n) hw[n] += scale * ha[n];
    auto ow = net.output_weights.values();
    auto oa = output_acc.values();
    for (std::size_t n = 0; n < ow.size(); ++n) ow[n] += scale * oa[n];
  }
  if (!net.all_finite()) throw InstabilityError("supervised training diverged");
}

double mean_squared_error(const Network& net, std::span<const TrainingPair> batch) {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  ActivationCache cache;
  for (const auto& pair : batch) {
    forward_into(net, pair.features, cache);
    for (std::size_t k = 0; k < net.n_out; ++k) {
      const double e = pair.target[k] - cache.outputs[k];
      total += e * e;
    }
  }
  return total / static_cast<double>(batch.size() * net.n_out);
}

TdLearner::TdLearner(const Network& net, double alpha, double lambda)
    : alpha_(alpha), lambda_(lambda), traces_(TraceSet::zeros_like(net)) {}

void TdLearner::begin_episode() {
  traces_.reset();
  has_prediction_ = false;
  last_prediction_.clear();
}

void TdLearner::observe(Network& net, const ActivationCache& cache) {
  if (!finite_all(cache.outputs)) throw InstabilityError("non-finite prediction");
  // Gradient of the new prediction is taken at the weights that produced it.
  GradientCache grads = backprop_sensitivities(net, cache);
  if (has_prediction_) {
    td_weight_update(net, traces_, alpha_, last_prediction_, cache.outputs);
    ++updates_;
  }
  update_traces(traces_, grads, lambda_);
  last_prediction_ = cache.outputs;
  has_prediction_ = true;
}

void TdLearner::finish(Network& net, std::span<const double> target) {
  if (has_prediction_) {
    td_weight_update(net, traces_, alpha_, last_prediction_, target);
    ++updates_;
  }
  begin_episode();
}

}  // namespace lerpalab::net
