#include "lerpalab/lerpa/agents.hpp"

#include <algorithm>
#include <sstream>

namespace lerpalab::lerpa {

Personality parse_personality(const std::string& text) {
  if (text == "rational") return Personality::rational();
  if (text == "aggressive") return Personality::aggressive();
  if (text == "conservative") return Personality::conservative();
  std::istringstream in(text);
  Personality p;
  char c1 = 0, c2 = 0, c3 = 0;
  if (in >> p.a >> c1 >> p.b >> c2 >> p.c >> c3 >> p.d && c1 == ',' && c2 == ',' && c3 == ',') {
    std::string rest;
    if (!(in >> rest)) return p;
  }
  throw std::invalid_argument("personality must be rational, aggressive, conservative or a,b,c,d; got '" +
                              text + "'");
}

std::string to_string(const Personality& p) {
  if (p == Personality::rational()) return "rational";
  if (p == Personality::aggressive()) return "aggressive";
  if (p == Personality::conservative()) return "conservative";
  std::ostringstream out;
  out << p.a << ',' << p.b << ',' << p.c << ',' << p.d;
  return out.str();
}

double expected_return(std::span<const double> probs, const Personality& personality) {
  if (probs.size() != kLerpaOutputs) throw std::invalid_argument("expected four outcome probabilities");
  auto p = [&](std::size_t i) { return std::clamp(probs[i], 0.0, 1.0); };
  return personality.a * p(0) + personality.b * p(1) + personality.c * p(2) + personality.d * p(3);
}

std::vector<double> outcome_target(OutcomeClass outcome) {
  std::vector<double> t(kLerpaOutputs, 0.0);
  switch (outcome) {
    case OutcomeClass::kWin3: t[0] = 1.0; break;
    case OutcomeClass::kWin2: t[1] = 1.0; break;
    case OutcomeClass::kWin1: t[2] = 1.0; break;
    case OutcomeClass::kLerpa: t[3] = 1.0; break;
    case OutcomeClass::kFold: break;
  }
  return t;
}

LerpaAgent::LerpaAgent(const LerpaAgentConfig& config, std::uint64_t seed)
    : config_(config),
      net_(net::init_network(kLerpaFeatureCount, config.hidden, kLerpaOutputs,
                             net::OutputActivation::kLinear, derive_seed(seed, 1))),
      learner_(net_, config.params.alpha, config.params.lambda),
      rng_(derive_seed(seed, 2)) {
  config_.params.validate();
}

void LerpaAgent::set_net(const net::Network& net) {
  if (net.n_in != kLerpaFeatureCount || net.n_out != kLerpaOutputs)
    throw net::DimensionError("agent network must be 79 in, 4 out");
  net_ = net;
  learner_ = net::TdLearner(net_, config_.params.alpha, config_.params.lambda);
}

double LerpaAgent::epsilon() const { return epsilon_override_.value_or(config_.params.epsilon); }

double LerpaAgent::value_of(const AgentView& view) const {
  return expected_return(net::forward(net_, encode_view(view)).outputs, config_.personality);
}

void LerpaAgent::begin_hand(int) {
  learner_.begin_episode();
  if (learning_ && !frozen_) hand_start_ = net_;
}

void LerpaAgent::learn(const net::ActivationCache& cache) {
  if (!learning_ || frozen_) return;
  try {
    learner_.observe(net_, cache);
  } catch (const net::InstabilityError& e) {
    frozen_ = true;
    instability_ = e.what();
    net_ = hand_start_;
    learner_.begin_episode();
  }
}

bool LerpaAgent::decide_knock(const AgentView& view) {
  net::ActivationCache cache;
  net::forward_into(net_, encode_view(view), cache);
  bool knock;
  if (learning_ && hands_seen_ < config_.forced_play_hands) {
    knock = true;
  } else if (chance(rng_, epsilon())) {
    knock = chance(rng_, 0.5);
  } else {
    // Folding is worth exactly 0; a tie goes to knocking.
    knock = expected_return(cache.outputs, config_.personality) >= 0.0;
  }
  // Knock or fold, this prediction is the one the hand's outcome corrects.
  learn(cache);
  return knock;
}

Card LerpaAgent::choose_card(const AgentView& view, const std::vector<Card>& legal) {
  if (legal.empty()) throw RuleError("no legal card offered");
  if (legal.size() == 1) return legal.front();

  std::vector<net::ActivationCache> caches(legal.size());
  std::size_t best = 0;
  double best_value = 0.0;
  for (std::size_t i = 0; i < legal.size(); ++i) {
    net::forward_into(net_, encode_view(with_play(view, legal[i])), caches[i]);
    const double v = expected_return(caches[i].outputs, config_.personality);
    if (i == 0 || v > best_value) {
      best = i;
      best_value = v;
    }
  }
  const std::size_t pick = chance(rng_, epsilon()) ? uniform_index(rng_, legal.size()) : best;
  learn(caches[pick]);
  return legal[pick];
}

void LerpaAgent::end_hand(const AgentView&, const SeatResult& result) {
  if (learning_ && !frozen_ && learner_.has_prediction()) {
    try {
      learner_.finish(net_, outcome_target(result.outcome));
    } catch (const net::InstabilityError& e) {
      frozen_ = true;
      instability_ = e.what();
      net_ = hand_start_;
      learner_.begin_episode();
    }
  }
  if (learning_) ++hands_seen_;
}

}  // namespace lerpalab::lerpa
