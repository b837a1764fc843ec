#include <doctest.h>

#include <cmath>
#include <random>

#include "lerpalab/net/network.hpp"
#include "lerpalab/net/snapshot.hpp"
#include "net_oracles.hpp"

using namespace lerpalab;
using namespace lerpalab::net;

namespace {

std::vector<double> random_binary(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> x(n);
  for (auto& v : x) v = static_cast<double>(rng() & 1);
  return x;
}

std::vector<double> flat_grad(const GradientCache& g, std::size_t k) {
  std::vector<double> v(g.hidden_grads[k].values().begin(), g.hidden_grads[k].values().end());
  v.insert(v.end(), g.output_grads[k].values().begin(), g.output_grads[k].values().end());
  return v;
}

}  // namespace

TEST_CASE("init_network is seeded and bounded") {
  auto a = init_network(18, 30, 3, OutputActivation::kSigmoid, 7);
  auto b = init_network(18, 30, 3, OutputActivation::kSigmoid, 7);
  auto c = init_network(18, 30, 3, OutputActivation::kSigmoid, 8);
  CHECK(a == b);
  CHECK_FALSE(a == c);
  for (double w : testing::flat_weights(a)) {
    CHECK(w >= -0.1);
    CHECK(w <= 0.1);
  }
  CHECK_THROWS_AS(init_network(0, 3, 1, OutputActivation::kLinear, 1), DimensionError);
  CHECK_THROWS_AS(init_network(2, 0, 1, OutputActivation::kLinear, 1), DimensionError);
  CHECK_THROWS_AS(init_network(2, 3, 0, OutputActivation::kLinear, 1), DimensionError);
}

TEST_CASE("sigmoid") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786300049).epsilon(1e-15));
  CHECK(sigmoid(40.0) == doctest::Approx(1.0));
  CHECK(sigmoid(-800.0) == 0.0);
  for (double x : {-5.0, -0.3, 0.7, 3.0}) CHECK(sigmoid(-x) == doctest::Approx(1.0 - sigmoid(x)));
  CHECK(sigmoid(0.1) < sigmoid(0.2));
}

TEST_CASE("forward on zero weights") {
  auto s = init_network(4, 3, 2, OutputActivation::kSigmoid, 1);
  s.hidden_weights.fill(0.0);
  s.output_weights.fill(0.0);
  auto c = forward(s, std::vector<double>{1, 0, 1, 1});
  CHECK(c.outputs == std::vector<double>{0.5, 0.5});

  s.output_activation = OutputActivation::kLinear;
  c = forward(s, std::vector<double>{1, 0, 1, 1});
  CHECK(c.outputs == std::vector<double>{0.0, 0.0});
  CHECK_THROWS_AS(forward(s, std::vector<double>{1, 0}), DimensionError);
}

TEST_CASE("forward matches a naive recomputation") {
  std::mt19937_64 rng(11);
  for (int seed = 0; seed < 10; ++seed) {
    auto act = seed % 2 ? OutputActivation::kLinear : OutputActivation::kSigmoid;
    auto n = init_network(12, 9, 4, act, seed);
    for (double& w : n.hidden_weights.values()) w *= 20;  // leave the near-linear regime
    auto x = random_binary(rng, 12);
    auto c = forward(n, x);
    auto ref = testing::naive_forward(n, x);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(c.outputs[k] - ref[k]) <= 1e-12);
    for (double y : c.hidden_outputs) {
      CHECK(y > 0.0);
      CHECK(y < 1.0);
    }
  }
}

TEST_CASE("backprop sensitivities match finite differences") {
  std::mt19937_64 rng(3);
  for (int seed = 0; seed < 10; ++seed) {
    auto act = seed % 2 ? OutputActivation::kLinear : OutputActivation::kSigmoid;
    auto n = init_network(6, 5, 3, act, 100 + seed);
    for (double& w : n.hidden_weights.values()) w *= 15;
    for (double& w : n.output_weights.values()) w *= 15;
    auto x = random_binary(rng, 6);
    auto g = backprop_sensitivities(n, forward(n, x));
    auto fd = testing::finite_difference_gradients(n, x);
    for (std::size_t k = 0; k < 3; ++k) {
      auto analytic = flat_grad(g, k);
      REQUIRE(analytic.size() == fd[k].size());
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double scale = std::max(1e-3, std::abs(fd[k][i]));
        CHECK(std::abs(analytic[i] - fd[k][i]) / scale <= 1e-5);
      }
    }
  }
}

TEST_CASE("linear output weight gradient equals the hidden activation") {
  auto n = init_network(3, 4, 2, OutputActivation::kLinear, 5);
  auto c = forward(n, std::vector<double>{1, 1, 0});
  auto g = backprop_sensitivities(n, c);
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t j = 0; j < 4; ++j) CHECK(g.output_grads[k](k, j) == c.hidden_outputs[j]);
    CHECK(g.output_grads[k](k, 4) == 1.0);
    CHECK(g.output_grads[k](1 - k, 0) == 0.0);
  }
}

TEST_CASE("zero input leaves only bias columns with hidden gradient") {
  auto n = init_network(5, 4, 2, OutputActivation::kSigmoid, 9);
  auto g = backprop_sensitivities(n, forward(n, std::vector<double>(5, 0.0)));
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 5; ++j) CHECK(g.hidden_grads[k](i, j) == 0.0);
      CHECK(g.hidden_grads[k](i, 5) != 0.0);
    }
  }
}

TEST_CASE("stale cache is rejected") {
  auto a = init_network(3, 4, 2, OutputActivation::kSigmoid, 1);
  auto b = init_network(3, 5, 2, OutputActivation::kSigmoid, 1);
  CHECK_THROWS_AS(backprop_sensitivities(b, forward(a, std::vector<double>{1, 0, 1})),
                  DimensionError);
}

TEST_CASE("update_traces recursion") {
  auto n = init_network(2, 2, 1, OutputActivation::kLinear, 1);
  auto g = backprop_sensitivities(n, forward(n, std::vector<double>{1, 1}));

  SUBCASE("lambda zero copies the gradient") {
    auto t = TraceSet::zeros_like(n);
    t.hidden[0].fill(0.9);
    update_traces(t, g, 0.0);
    CHECK(t.hidden[0] == g.hidden_grads[0]);
    CHECK(t.output[0] == g.output_grads[0]);
  }
  SUBCASE("direct substitution") {
    auto t = TraceSet::zeros_like(n);
    GradientCache unit = g;
    unit.hidden_grads[0].fill(0.1);
    unit.output_grads[0].fill(0.1);
    t.hidden[0].fill(0.2);
    t.output[0].fill(0.2);
    update_traces(t, unit, 0.5);
    CHECK(t.hidden[0](0, 0) == doctest::Approx(0.2));
    CHECK(t.output[0](0, 1) == doctest::Approx(0.2));
  }
  SUBCASE("lambda one telescopes") {
    auto t = TraceSet::zeros_like(n);
    for (int i = 0; i < 7; ++i) update_traces(t, g, 1.0);
    for (std::size_t i = 0; i < t.hidden[0].size(); ++i)
      CHECK(t.hidden[0].values()[i] == doctest::Approx(7 * g.hidden_grads[0].values()[i]));
  }
}

TEST_CASE("trace recursion equals the explicit decayed sum") {
  std::mt19937_64 rng(21);
  auto n = init_network(5, 4, 3, OutputActivation::kSigmoid, 4);
  for (double lambda : {0.0, 0.3, 0.9, 1.0}) {
    auto t = TraceSet::zeros_like(n);
    std::vector<std::vector<double>> history;  // flat grad of output 1 per step
    for (int step = 0; step < 12; ++step) {
      auto x = random_binary(rng, 5);
      auto g = backprop_sensitivities(n, forward(n, x));
      history.push_back(flat_grad(g, 1));
      update_traces(t, g, lambda);
    }
    std::vector<double> trace(t.hidden[1].values().begin(), t.hidden[1].values().end());
    trace.insert(trace.end(), t.output[1].values().begin(), t.output[1].values().end());
    const std::size_t steps = history.size();
    for (std::size_t i = 0; i < trace.size(); ++i) {
      double expect = 0.0;
      for (std::size_t s = 0; s < steps; ++s)
        expect += std::pow(lambda, static_cast<double>(steps - 1 - s)) * history[s][i];
      CHECK(std::abs(trace[i] - expect) <= 1e-10);
    }
  }
}

TEST_CASE("td_weight_update") {
  SUBCASE("zero TD error leaves the network unchanged") {
    auto n = init_network(3, 3, 2, OutputActivation::kSigmoid, 2);
    auto before = n;
    auto t = TraceSet::zeros_like(n);
    update_traces(t, backprop_sensitivities(n, forward(n, std::vector<double>{1, 0, 1})), 0.4);
    std::vector<double> p{0.3, 0.6};
    td_weight_update(n, t, 0.2, p, p);
    CHECK(n == before);
  }
  SUBCASE("single weight substitution") {
    auto n = init_network(1, 1, 1, OutputActivation::kLinear, 2);
    auto t = TraceSet::zeros_like(n);
    t.output[0](0, 0) = 1.0;
    const double w0 = n.output_weights(0, 0);
    td_weight_update(n, t, 0.1, std::vector<double>{0.3}, std::vector<double>{0.8});
    CHECK(n.output_weights(0, 0) - w0 == doctest::Approx(0.05));
  }
  SUBCASE("lambda zero equals the one-step rule exactly") {
    std::mt19937_64 rng(5);
    auto n = init_network(6, 5, 3, OutputActivation::kSigmoid, 12);
    auto x = random_binary(rng, 6);
    auto c = forward(n, x);
    auto g = backprop_sensitivities(n, c);
    auto t = TraceSet::zeros_like(n);
    update_traces(t, g, 0.0);
    std::vector<double> next{0.9, 0.1, 0.4};

    auto expect = testing::flat_weights(n);
    auto ng = testing::naive_gradients(n, x);
    for (std::size_t i = 0; i < expect.size(); ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k < 3; ++k) sum += (next[k] - c.outputs[k]) * ng[k][i];
      expect[i] += 0.25 * sum;
    }
    td_weight_update(n, t, 0.25, c.outputs, next);
    auto got = testing::flat_weights(n);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expect[i]) <= 1e-12);
  }
  SUBCASE("non-finite error raises instability") {
    auto n = init_network(1, 1, 1, OutputActivation::kLinear, 2);
    auto before = n;
    auto t = TraceSet::zeros_like(n);
    CHECK_THROWS_AS(td_weight_update(n, t, 0.1, std::vector<double>{0.0},
                                     std::vector<double>{std::nan("")}),
                    InstabilityError);
    CHECK(n == before);
  }
}

TEST_CASE("TdLearner episode matches the naive sum oracle") {
  std::mt19937_64 rng(77);
  for (double lambda : {0.0, 0.3, 1.0}) {
    for (int seed = 0; seed < 3; ++seed) {
      auto n = init_network(7, 6, 3, OutputActivation::kSigmoid, 40 + seed);
      auto start = n;
      std::vector<std::vector<double>> inputs;
      for (int s = 0; s < 6; ++s) inputs.push_back(random_binary(rng, 7));
      std::vector<double> terminal{0.0, 1.0, 0.0};

      TdLearner learner(n, 0.3, lambda);
      learner.begin_episode();
      for (const auto& x : inputs) learner.observe(n, forward(n, x));
      learner.finish(n, terminal);
      CHECK(learner.updates() == inputs.size());
      CHECK(learner.traces().all_zero());

      auto expect = testing::naive_td_episode(start, inputs, terminal, 0.3, lambda);
      auto got = testing::flat_weights(n);
      for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expect[i]) <= 1e-10);
    }
  }
}

TEST_CASE("supervised_train") {
  SUBCASE("targets equal outputs leaves the network unchanged") {
    auto n = init_network(3, 4, 2, OutputActivation::kSigmoid, 3);
    std::vector<TrainingPair> batch;
    for (auto x : {std::vector<double>{1, 0, 0}, std::vector<double>{0, 1, 1}}) {
      batch.push_back({x, forward(n, x).outputs});
    }
    auto before = n;
    supervised_train(n, batch, 0.5, 3);
    CHECK(n == before);
  }
  SUBCASE("empty batch is a no-op") {
    auto n = init_network(3, 4, 2, OutputActivation::kSigmoid, 3);
    auto before = n;
    supervised_train(n, {}, 0.5, 10);
    CHECK(n == before);
  }
  SUBCASE("one epoch on one pair is the delta rule on the output layer") {
    auto n = init_network(3, 2, 1, OutputActivation::kLinear, 3);
    std::vector<double> x{1, 0, 1};
    auto c = forward(n, x);
    const double target = 0.7;
    auto before = n;
    supervised_train(n, std::vector<TrainingPair>{{x, {target}}}, 0.1, 1);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(n.output_weights(0, j) - before.output_weights(0, j) ==
            doctest::Approx(0.1 * (target - c.outputs[0]) * c.hidden_outputs[j]));
    }
    CHECK(n.output_weights(0, 2) - before.output_weights(0, 2) ==
          doctest::Approx(0.1 * (target - c.outputs[0])));
  }
  SUBCASE("XOR") {
    std::vector<TrainingPair> xor_set{
        {{0, 0}, {0}}, {{0, 1}, {1}}, {{1, 0}, {1}}, {{1, 1}, {0}}};
    for (std::uint64_t seed : {1u, 2024u, 31337u}) {
      auto n = init_network(2, 8, 1, OutputActivation::kLinear, seed);
      supervised_train(n, xor_set, 1.0, 5000);
      CHECK(mean_squared_error(n, xor_set) < 0.05);
    }
  }
}

TEST_CASE("snapshot round-trips bit-exactly") {
  auto n = init_network(5, 4, 3, OutputActivation::kLinear, 99);
  n.hidden_weights(0, 0) = 1.0 / 3.0;
  n.output_weights(1, 2) = -1e-300;
  auto text = serialize_network(n);
  CHECK(text.rfind("LERPALAB-NET v1\n5 4 3 linear\n", 0) == 0);
  auto back = parse_network(text);
  CHECK(back == n);
  CHECK(serialize_network(back) == text);

  CHECK_THROWS_AS(parse_network("nope\n"), SnapshotError);
  CHECK_THROWS_AS(parse_network("LERPALAB-NET v1\n1 1 1 linear\n0 x\n0 0\n"), SnapshotError);
  CHECK_THROWS_AS(parse_network("LERPALAB-NET v1\n1 1 1 linear\n0 0\n"), SnapshotError);
}
