#include "lerpalab/sim/table.hpp"

#include <fstream>
#include <sstream>

#include "lerpalab/net/snapshot.hpp"
#include "lerpalab/random.hpp"

namespace lerpalab::sim {

using namespace lerpalab::lerpa;

namespace {

constexpr std::uint64_t kDealStream = 1;
constexpr std::uint64_t kAgentStream = 16;

}  // namespace

void TimeSeries::append(const HandRecord& record) {
  std::array<SeatHand, kSeats> row;
  for (int s = 0; s < kSeats; ++s) {
    const auto i = static_cast<std::size_t>(s);
    const auto& r = record.result.seats[i];
    row[i].knocked = record.statuses[i] == Status::kKnocked;
    row[i].tricks_won = r.tricks_won;
    row[i].chip_delta = r.chip_delta;
    row[i].cumulative = (hands.empty() ? 0 : hands.back()[i].cumulative) + r.chip_delta;
  }
  hands.push_back(row);
}

std::vector<double> TimeSeries::deltas(int seat) const {
  std::vector<double> out;
  for (const auto& h : hands) out.push_back(h[static_cast<std::size_t>(seat)].chip_delta);
  return out;
}

std::vector<double> TimeSeries::cumulative(int seat) const {
  std::vector<double> out;
  for (const auto& h : hands) out.push_back(static_cast<double>(h[static_cast<std::size_t>(seat)].cumulative));
  return out;
}

std::vector<double> TimeSeries::knocks(int seat) const {
  std::vector<double> out;
  for (const auto& h : hands) out.push_back(h[static_cast<std::size_t>(seat)].knocked ? 1.0 : 0.0);
  return out;
}

long TimeSeries::final_chips(int seat) const {
  return hands.empty() ? 0 : hands.back()[static_cast<std::size_t>(seat)].cumulative;
}

Table::Table(const Scenario& scenario) : scenario_(scenario) {
  scenario_.validate();
  for (int s = 0; s < kSeats; ++s) {
    const auto& spec = scenario_.seats[static_cast<std::size_t>(s)];
    const std::uint64_t seed = derive_seed(scenario_.seed, kAgentStream + static_cast<std::uint64_t>(s));
    if (spec.kind == AgentKind::kRandom) {
      agents_.emplace_back(RandomAgent(seed));
      continue;
    }
    LerpaAgent agent(spec.agent, seed);
    if (!spec.snapshot_in.empty()) agent.set_net(net::load_network(spec.snapshot_in));
    agents_.emplace_back(std::move(agent));
  }
}

LerpaAgent* Table::td(int seat) { return std::get_if<LerpaAgent>(&agents_.at(static_cast<std::size_t>(seat))); }

const LerpaAgent* Table::td(int seat) const {
  return std::get_if<LerpaAgent>(&agents_.at(static_cast<std::size_t>(seat)));
}

std::uint64_t Table::deal_seed(int hand_index) const {
  return derive_seed(derive_seed(scenario_.seed, kDealStream), static_cast<std::uint64_t>(hand_index));
}

HandConfig Table::hand_config(int hand_index) const {
  HandConfig hc;
  hc.dealer = scenario_.rotates() ? (scenario_.dealer + hand_index) % kSeats : scenario_.dealer;
  hc.pre_deal = scenario_.pre_deal();
  hc.dealer_deals_in = scenario_.dealer_deals_in;
  hc.void_rule = scenario_.void_rule;
  return hc;
}

HandRecord Table::play(int hand_index) {
  std::array<Player*, kSeats> players{};
  std::array<bool, kSeats> was_frozen{};
  for (int s = 0; s < kSeats; ++s) {
    auto& a = agents_[static_cast<std::size_t>(s)];
    players[static_cast<std::size_t>(s)] = std::visit([](auto& x) -> Player* { return &x; }, a);
    if (auto* t = td(s)) was_frozen[static_cast<std::size_t>(s)] = t->frozen();
  }
  HandRecord record = play_hand(players, hand_config(hand_index), deal_seed(hand_index));
  for (int s = 0; s < kSeats; ++s) {
    const auto* t = td(s);
    if (t && t->frozen() && !was_frozen[static_cast<std::size_t>(s)])
      events_.push_back({s, hand_index + 1, t->instability()});
  }
  return record;
}

HandRecord Table::evaluate(int hand_index, std::uint64_t seed) {
  std::vector<RandomAgent> randoms;
  randoms.reserve(kSeats);
  std::array<Player*, kSeats> players{};
  std::array<bool, kSeats> was_learning{};
  for (int s = 0; s < kSeats; ++s) {
    const auto i = static_cast<std::size_t>(s);
    if (auto* t = td(s)) {
      was_learning[i] = t->learning();
      t->set_learning(false);
      t->set_epsilon_override(0.0);
      players[i] = t;
    } else {
      randoms.push_back(std::get<RandomAgent>(agents_[i]));
      players[i] = &randoms.back();
    }
  }
  HandRecord record = play_hand(players, hand_config(hand_index), seed);
  for (int s = 0; s < kSeats; ++s) {
    if (auto* t = td(s)) {
      t->set_learning(was_learning[static_cast<std::size_t>(s)]);
      t->set_epsilon_override(std::nullopt);
    }
  }
  return record;
}

RunResult run_table(const Scenario& scenario, bool keep_logs) {
  Table table(scenario);
  RunResult out;
  for (int h = 0; h < scenario.n_hands; ++h) {
    HandRecord record = table.play(h);
    out.series.append(record);
    if (keep_logs) out.logs.push_back(std::move(record.log));
  }
  out.events = table.events();
  for (int s = 0; s < kSeats; ++s) {
    if (const auto* t = table.td(s)) out.nets[static_cast<std::size_t>(s)] = t->net();
  }
  return out;
}

std::vector<double> moving_average(const std::vector<double>& series, int window) {
  if (window < 1) throw std::invalid_argument("moving average window must be at least 1");
  const auto w = static_cast<std::size_t>(window);
  std::vector<double> out;
  for (std::size_t end = w; end <= series.size(); end += w) {
    double sum = 0.0;
    for (std::size_t i = end - w; i < end; ++i) sum += series[i];
    out.push_back(sum / static_cast<double>(w));
  }
  return out;
}

std::string to_csv(const TimeSeries& series) {
  std::ostringstream out;
  out << "hand_index,seat,knock,tricks_won,chip_delta,cumulative\n";
  for (std::size_t h = 0; h < series.hands.size(); ++h) {
    for (int s = 0; s < kSeats; ++s) {
      const auto& r = series.hands[h][static_cast<std::size_t>(s)];
      out << h + 1 << ',' << s << ',' << (r.knocked ? 1 : 0) << ',' << r.tricks_won << ',' << r.chip_delta
          << ',' << r.cumulative << '\n';
    }
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

void export_csv(const TimeSeries& series, const std::filesystem::path& path) { write_text(path, to_csv(series)); }

}  // namespace lerpalab::sim
