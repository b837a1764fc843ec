#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lerpalab/lerpa/engine.hpp"
#include "lerpalab/lerpa/features.hpp"
#include "lerpalab/net/network.hpp"
#include "lerpalab/random.hpp"

namespace lerpalab::lerpa {

// Return weights on the four predicted outcome probabilities
// A = P(+3), B = P(+2), C = P(+1), D = P(lerpa'd).
struct Personality {
  double a = 3, b = 2, c = 1, d = -3;

  static Personality rational() { return {3, 2, 1, -3}; }
  static Personality aggressive() { return {3, 2, 1, -2}; }
  static Personality conservative() { return {3, 2, 1, -4}; }

  friend bool operator==(const Personality&, const Personality&) = default;
};

// "rational", "aggressive", "conservative" or four comma-separated numbers.
Personality parse_personality(const std::string& text);
std::string to_string(const Personality& p);

// Each probability is clamped to [0, 1] before weighting.
double expected_return(std::span<const double> probs, const Personality& personality);

// One-hot (A, B, C, D) target for a finished hand; all zero for a fold.
std::vector<double> outcome_target(OutcomeClass outcome);

inline constexpr std::size_t kLerpaHidden = 50;
inline constexpr std::size_t kLerpaOutputs = 4;

struct LerpaAgentConfig {
  net::TdParams params{0.1, 0.1, 0.01};
  Personality personality;
  int forced_play_hands = 200;
  std::size_t hidden = kLerpaHidden;
};

// TD(lambda) learner that values the table right after each of its own
// choices. Folding is worth 0; a knock or card is worth the expected return
// of the network's prediction for the resulting view.
class LerpaAgent : public Player {
 public:
  LerpaAgent(const LerpaAgentConfig& config, std::uint64_t seed);

  void begin_hand(int seat) override;
  bool decide_knock(const AgentView& view) override;
  Card choose_card(const AgentView& view, const std::vector<Card>& legal) override;
  void end_hand(const AgentView& final_view, const SeatResult& result) override;

  // Evaluation mode: no learning, optional exploration override.
  void set_learning(bool on) { learning_ = on; }
  bool learning() const { return learning_; }
  void set_epsilon_override(std::optional<double> eps) { epsilon_override_ = eps; }

  // Value of the view as the agent would score it.
  double value_of(const AgentView& view) const;

  const net::Network& net() const { return net_; }
  void set_net(const net::Network& net);
  const net::TdLearner& learner() const { return learner_; }
  const LerpaAgentConfig& config() const { return config_; }
  int hands_seen() const { return hands_seen_; }
  void set_hands_seen(int n) { hands_seen_ = n; }

  // Set once a TD step destabilizes the network; the weights are rolled back
  // to the start of that hand and learning stops.
  bool frozen() const { return frozen_; }
  const std::string& instability() const { return instability_; }

 private:
  double epsilon() const;
  void learn(const net::ActivationCache& cache);

  LerpaAgentConfig config_;
  net::Network net_;
  net::Network hand_start_;
  net::TdLearner learner_;
  Rng rng_;
  int hands_seen_ = 0;
  bool learning_ = true;
  bool frozen_ = false;
  std::string instability_;
  std::optional<double> epsilon_override_;
};

// Always knocks; plays a uniformly random legal card.
class RandomAgent : public Player {
 public:
  explicit RandomAgent(std::uint64_t seed) : rng_(seed) {}
  bool decide_knock(const AgentView&) override { return true; }
  Card choose_card(const AgentView&, const std::vector<Card>& legal) override {
    return legal[uniform_index(rng_, legal.size())];
  }

 private:
  Rng rng_;
};

}  // namespace lerpalab::lerpa
