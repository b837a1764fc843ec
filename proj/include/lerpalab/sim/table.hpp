#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lerpalab/lerpa/agents.hpp"
#include "lerpalab/lerpa/engine.hpp"
#include "lerpalab/sim/scenario.hpp"

namespace lerpalab::sim {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeatHand {
  bool knocked = false;
  int tricks_won = 0;
  int chip_delta = 0;
  long cumulative = 0;
};

// One row of four seats per hand played.
struct TimeSeries {
  std::vector<std::array<SeatHand, lerpa::kSeats>> hands;

  std::size_t size() const { return hands.size(); }
  void append(const lerpa::HandRecord& record);
  std::vector<double> deltas(int seat) const;
  std::vector<double> cumulative(int seat) const;
  std::vector<double> knocks(int seat) const;  // 1 knocked, 0 folded
  long final_chips(int seat) const;
};

struct InstabilityEvent {
  int seat = 0;
  int hand_index = 0;  // 1-based
  std::string message;
};

// Four players, their deal schedule and their learning state.
class Table {
 public:
  explicit Table(const Scenario& scenario);

  // Plays hand `hand_index` (0-based) with learning on.
  lerpa::HandRecord play(int hand_index);

  // Greedy, non-learning hand on the given deal seed. Learners are left
  // exactly as they were; random players act on copies.
  lerpa::HandRecord evaluate(int hand_index, std::uint64_t deal_seed);

  lerpa::LerpaAgent* td(int seat);
  const lerpa::LerpaAgent* td(int seat) const;
  const Scenario& scenario() const { return scenario_; }
  const std::vector<InstabilityEvent>& events() const { return events_; }

  std::uint64_t deal_seed(int hand_index) const;
  lerpa::HandConfig hand_config(int hand_index) const;

 private:
  using Agent = std::variant<lerpa::LerpaAgent, lerpa::RandomAgent>;

  Scenario scenario_;
  std::vector<Agent> agents_;
  std::vector<InstabilityEvent> events_;
};

struct RunResult {
  TimeSeries series;
  std::vector<std::vector<std::string>> logs;  // one event log per hand
  std::vector<InstabilityEvent> events;
  std::array<std::optional<net::Network>, lerpa::kSeats> nets;  // td seats only
};

RunResult run_table(const Scenario& scenario, bool keep_logs = true);

// Trailing mean emitted every window-th element; empty when window > size.
std::vector<double> moving_average(const std::vector<double>& series, int window);

// hand_index (1-based), seat, knock, tricks_won, chip_delta, cumulative.
std::string to_csv(const TimeSeries& series);
void export_csv(const TimeSeries& series, const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace lerpalab::sim
