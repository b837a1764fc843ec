#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lerpalab/lerpa/agents.hpp"
#include "lerpalab/lerpa/engine.hpp"

namespace lerpalab::sim {

// Parse or validation failure; line is 0 when the problem is not tied to one.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

enum class AgentKind { kTd, kRandom };

// What lerpa-scenario does with the table beyond playing it.
enum class Analysis { kTable, kCowardice, kTournament, kStatic, kDynamic, kBluff, kPersonalities };

std::string to_string(Analysis a);
Analysis parse_analysis(const std::string& text);

struct SeatSpec {
  std::string name;
  AgentKind kind = AgentKind::kTd;
  lerpa::LerpaAgentConfig agent;
  std::vector<lerpa::Card> hand;  // pre-dealt, empty for random
  std::string snapshot_in;        // optional network to start from
  std::string snapshot_out;       // optional extra copy of the final network
};

struct Scenario {
  std::string name = "unnamed";
  Analysis analysis = Analysis::kTable;
  std::array<SeatSpec, lerpa::kSeats> seats;
  int n_hands = 1000;
  std::uint64_t seed = 1;
  bool seed_in_file = false;  // set by the parser when the file names a seed
  int dealer = 0;
  std::optional<bool> dealer_rotation;  // unset: rotate unless hands are pre-dealt
  bool dealer_deals_in = false;
  lerpa::VoidRule void_rule = lerpa::VoidRule::kPermissive;
  std::optional<lerpa::Suit> trump_suit;
  std::optional<lerpa::Card> trump_card;
  int metrics_window = 40;
  int stability_window = 50;
  int eval_hands = 500;
  int target_seat = 0;
  std::vector<lerpa::Personality> contrast;  // opponent personalities to compare

  Scenario();

  bool rotates() const;
  bool any_pre_deal() const;
  lerpa::PreDeal pre_deal() const;
  // Throws ScenarioError(0, ...) on an inconsistent scenario.
  void validate() const;
};

// INI-style text: a [scenario] section and [seat N] sections (N = 0..3),
// "key = value" lines, '#' or ';' comments.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace lerpalab::sim
