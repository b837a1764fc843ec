#include "lerpalab/sim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lerpalab/random.hpp"

namespace lerpalab::sim {

using namespace lerpalab::lerpa;

namespace {

constexpr std::uint64_t kEvalStream = 2;

}  // namespace

std::vector<double> fold_rate_series(const TimeSeries& series, int seat, int window) {
  auto rates = moving_average(series.knocks(seat), window);
  for (double& r : rates) r = 1.0 - r;
  return rates;
}

double fold_rate(const TimeSeries& series, int seat, int first, int last) {
  if (first < 1 || last < first || static_cast<std::size_t>(last) > series.size())
    throw std::out_of_range("hand range outside the series");
  int folds = 0;
  for (int h = first; h <= last; ++h) {
    if (!series.hands[static_cast<std::size_t>(h - 1)][static_cast<std::size_t>(seat)].knocked) ++folds;
  }
  return static_cast<double>(folds) / (last - first + 1);
}

std::array<int, kSeats> ranking(const TimeSeries& series) {
  std::array<int, kSeats> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return series.final_chips(a) > series.final_chips(b); });
  return order;
}

Decisions decisions_of(const HandRecord& record) {
  Decisions d;
  for (int s = 0; s < kSeats; ++s) d.knocked[static_cast<std::size_t>(s)] = record.statuses[static_cast<std::size_t>(s)] == Status::kKnocked;
  for (const auto& trick : record.tricks) {
    for (const auto& play : trick.plays) d.cards[static_cast<std::size_t>(play.seat)].push_back(play.card);
  }
  return d;
}

ConvergenceReport static_analysis(const Scenario& scenario) {
  Table table(scenario);
  ConvergenceReport report;
  std::optional<Decisions> last;
  std::array<int, kSeats> last_payout{};
  int run = 0;
  for (int h = 0; h < scenario.n_hands; ++h) {
    report.series.append(table.play(h));
    report.hands_played = h + 1;
    const HandRecord greedy = table.evaluate(h, table.deal_seed(h));
    const Decisions d = decisions_of(greedy);
    std::array<int, kSeats> payout{};
    for (int s = 0; s < kSeats; ++s)
      payout[static_cast<std::size_t>(s)] = greedy.result.seats[static_cast<std::size_t>(s)].chip_delta;
    run = (last && *last == d && last_payout == payout) ? run + 1 : 1;
    last = d;
    last_payout = payout;
    report.terminal_decisions = d;
    report.terminal_payout = payout;
    report.terminal_log = greedy.log;
    if (run >= scenario.stability_window) {
      report.stabilized = true;
      report.stabilization_hand = h + 2 - run;
      break;
    }
  }
  for (int s = 0; s < kSeats; ++s) {
    if (const auto* t = table.td(s)) report.nets[static_cast<std::size_t>(s)] = t->net();
  }
  report.events = table.events();
  return report;
}

DynamicReport dynamic_analysis(const Scenario& scenario) {
  Table table(scenario);
  DynamicReport report;
  report.seat = scenario.target_seat;
  report.hand = scenario.seats[static_cast<std::size_t>(scenario.target_seat)].hand;
  for (int h = 0; h < scenario.n_hands; ++h) report.series.append(table.play(h));

  const auto seat = static_cast<std::size_t>(scenario.target_seat);
  const std::uint64_t eval_base = derive_seed(scenario.seed, kEvalStream);
  long total = 0;
  for (int i = 0; i < scenario.eval_hands; ++i) {
    const HandRecord r = table.evaluate(scenario.n_hands + i, derive_seed(eval_base, static_cast<std::uint64_t>(i)));
    const bool knocked = r.statuses[seat] == Status::kKnocked;
    ++report.actions[knocked ? "knock" : "fold"];
    if (knocked) ++report.eval_knocks;
    total += r.result.seats[seat].chip_delta;
    for (const auto& trick : r.tricks) {
      for (const auto& play : trick.plays) {
        if (static_cast<std::size_t>(play.seat) == seat) ++report.actions["play " + to_string(play.card)];
      }
    }
  }
  report.eval_hands = scenario.eval_hands;
  if (report.eval_hands > 0) {
    report.knock_rate = static_cast<double>(report.eval_knocks) / report.eval_hands;
    report.mean_return = static_cast<double>(total) / report.eval_hands;
  }
  for (int s = 0; s < kSeats; ++s) {
    if (const auto* t = table.td(s)) report.nets[static_cast<std::size_t>(s)] = t->net();
  }
  report.events = table.events();
  return report;
}

TwoProportion two_proportion_test(int k1, int n1, int k2, int n2) {
  if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("two-proportion test needs non-empty samples");
  TwoProportion t;
  t.p1 = static_cast<double>(k1) / n1;
  t.p2 = static_cast<double>(k2) / n2;
  const double pooled = static_cast<double>(k1 + k2) / (n1 + n2);
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
  if (se == 0.0) {
    t.z = 0.0;
    t.p_value = t.p1 == t.p2 ? 1.0 : 0.0;
    return t;
  }
  t.z = (t.p1 - t.p2) / se;
  t.p_value = std::erfc(std::abs(t.z) / std::sqrt(2.0));
  return t;
}

PersonalityReport personality_contrast(const Scenario& scenario, int seeds) {
  if (seeds < 1) throw std::invalid_argument("need at least one seed");
  PersonalityReport report;
  for (const Personality& p : scenario.contrast) {
    PersonalityArm arm;
    arm.opponents = p;
    for (int k = 0; k < seeds; ++k) {
      Scenario sc = scenario;
      sc.seed = scenario.seed + static_cast<std::uint64_t>(k);
      for (int s = 0; s < kSeats; ++s) {
        if (s != sc.target_seat) sc.seats[static_cast<std::size_t>(s)].agent.personality = p;
      }
      DynamicReport r = dynamic_analysis(sc);
      arm.knocks += r.eval_knocks;
      arm.hands += r.eval_hands;
      arm.runs.push_back(std::move(r));
    }
    report.arms.push_back(std::move(arm));
  }
  if (report.arms.size() >= 2 && report.arms[0].hands > 0 && report.arms[1].hands > 0) {
    report.first_two = two_proportion_test(report.arms[0].knocks, report.arms[0].hands, report.arms[1].knocks,
                                           report.arms[1].hands);
  }
  return report;
}

std::string knock_matrix_csv(const TimeSeries& series, const Scenario& scenario) {
  std::ostringstream out;
  out << "hand_index";
  for (const auto& seat : scenario.seats) out << ',' << seat.name;
  out << '\n';
  for (std::size_t h = 0; h < series.size(); ++h) {
    out << h + 1;
    for (const auto& cell : series.hands[h]) out << ',' << (cell.knocked ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

std::string knock_rate_csv(const TimeSeries& series, const Scenario& scenario) {
  std::array<std::vector<double>, kSeats> rates;
  for (int s = 0; s < kSeats; ++s) rates[static_cast<std::size_t>(s)] = moving_average(series.knocks(s), scenario.metrics_window);
  std::ostringstream out;
  out << "hand_index";
  for (const auto& seat : scenario.seats) out << ',' << seat.name;
  out << '\n';
  for (std::size_t w = 0; w < rates[0].size(); ++w) {
    out << (w + 1) * static_cast<std::size_t>(scenario.metrics_window);
    for (const auto& r : rates) out << ',' << r[w];
    out << '\n';
  }
  return out.str();
}

}  // namespace lerpalab::sim
