#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lerpalab/sim/scenario.hpp"
#include "lerpalab/sim/table.hpp"

namespace lerpalab::sim {

// Share of folds per consecutive window of hands (length floor(n / window)).
std::vector<double> fold_rate_series(const TimeSeries& series, int seat, int window);

// Fold share over hands first..last, 1-based and inclusive.
double fold_rate(const TimeSeries& series, int seat, int first, int last);

// Seats ordered by final cumulative chips, best first; ties keep seat order.
std::array<int, lerpa::kSeats> ranking(const TimeSeries& series);

// How every seat played one hand: knock or fold, then its cards in order.
struct Decisions {
  std::array<bool, lerpa::kSeats> knocked{};
  std::array<std::vector<lerpa::Card>, lerpa::kSeats> cards;
  friend bool operator==(const Decisions&, const Decisions&) = default;
};

Decisions decisions_of(const lerpa::HandRecord& record);

struct ConvergenceReport {
  bool stabilized = false;
  std::optional<int> stabilization_hand;  // 1-based first hand of the stable run
  int hands_played = 0;
  Decisions terminal_decisions;
  std::array<int, lerpa::kSeats> terminal_payout{};
  std::vector<std::string> terminal_log;  // the last greedy hand, replayable
  TimeSeries series;                      // learning hands
  std::array<std::optional<net::Network>, lerpa::kSeats> nets;
  std::vector<InstabilityEvent> events;
};

// Repeats the fully pre-dealt hand with learning on. After every hand a
// greedy copy of the table plays it once; the table has stabilized when
// those greedy hands agree in decisions and payout stability_window times
// running. Stops at stabilization or after n_hands.
ConvergenceReport static_analysis(const Scenario& scenario);

struct DynamicReport {
  int seat = 0;
  std::vector<lerpa::Card> hand;
  TimeSeries series;  // learning hands
  int eval_hands = 0;
  int eval_knocks = 0;
  double knock_rate = 0.0;   // greedy evaluation after training
  double mean_return = 0.0;  // greedy evaluation, folds count 0
  std::map<std::string, int> actions;  // "fold", "knock", "play <card>"
  std::array<std::optional<net::Network>, lerpa::kSeats> nets;
  std::vector<InstabilityEvent> events;
  bool non_negative() const { return mean_return >= 0.0; }
};

// Trains on n_hands with the target seat's hand fixed and everything else
// dealt fresh, then measures eval_hands greedy hands on fresh deals.
DynamicReport dynamic_analysis(const Scenario& scenario);

struct TwoProportion {
  double p1 = 0.0, p2 = 0.0, z = 0.0, p_value = 1.0;
};

// Pooled two-sided two-proportion z-test.
TwoProportion two_proportion_test(int k1, int n1, int k2, int n2);

struct PersonalityArm {
  lerpa::Personality opponents;
  std::vector<DynamicReport> runs;  // one per seed
  int knocks = 0;
  int hands = 0;
};

struct PersonalityReport {
  std::vector<PersonalityArm> arms;
  TwoProportion first_two;  // arms[0] against arms[1]
};

// Dynamic analysis of the target seat once per contrast personality; all
// other td seats take that personality. Seeds scenario.seed .. seed+seeds-1.
PersonalityReport personality_contrast(const Scenario& scenario, int seeds);

// hand_index then one 1/0 knock column per seat, headed by seat names.
std::string knock_matrix_csv(const TimeSeries& series, const Scenario& scenario);

// hand_index (end of window) then per-seat knock rates per metrics_window.
std::string knock_rate_csv(const TimeSeries& series, const Scenario& scenario);

}  // namespace lerpalab::sim
