#include "lerpalab/sim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace lerpalab::sim {

using namespace lerpalab::lerpa;

ScenarioError::ScenarioError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string to_string(Analysis a) {
  switch (a) {
    case Analysis::kTable: return "table";
    case Analysis::kCowardice: return "cowardice";
    case Analysis::kTournament: return "tournament";
    case Analysis::kStatic: return "static";
    case Analysis::kDynamic: return "dynamic";
    case Analysis::kBluff: return "bluff";
    case Analysis::kPersonalities: return "personalities";
  }
  return "?";
}

Analysis parse_analysis(const std::string& text) {
  for (Analysis a : {Analysis::kTable, Analysis::kCowardice, Analysis::kTournament, Analysis::kStatic,
                     Analysis::kDynamic, Analysis::kBluff, Analysis::kPersonalities}) {
    if (to_string(a) == text) return a;
  }
  throw std::invalid_argument("unknown analysis '" + text + "'");
}

Scenario::Scenario() {
  for (int s = 0; s < kSeats; ++s) seats[static_cast<std::size_t>(s)].name = "seat" + std::to_string(s);
}

bool Scenario::any_pre_deal() const {
  if (trump_card || trump_suit) return true;
  return std::any_of(seats.begin(), seats.end(), [](const SeatSpec& s) { return !s.hand.empty(); });
}

bool Scenario::rotates() const { return dealer_rotation.value_or(!any_pre_deal()); }

PreDeal Scenario::pre_deal() const {
  PreDeal p;
  for (std::size_t s = 0; s < seats.size(); ++s) p.hands[s] = seats[s].hand;
  p.trump_card = trump_card;
  p.trump_suit = trump_suit;
  return p;
}

void Scenario::validate() const {
  if (n_hands < 1) throw ScenarioError(0, "hands must be at least 1");
  if (dealer < 0 || dealer >= kSeats) throw ScenarioError(0, "dealer must be a seat 0..3");
  if (metrics_window < 1) throw ScenarioError(0, "metrics_window must be at least 1");
  if (stability_window < 1) throw ScenarioError(0, "stability_window must be at least 1");
  if (eval_hands < 0) throw ScenarioError(0, "eval_hands must not be negative");
  if (target_seat < 0 || target_seat >= kSeats) throw ScenarioError(0, "target_seat must be a seat 0..3");
  std::set<Card> seen;
  for (const auto& seat : seats) {
    if (!seat.hand.empty() && seat.hand.size() != static_cast<std::size_t>(kHandSize))
      throw ScenarioError(0, seat.name + ": a pre-dealt hand needs exactly 3 cards");
    for (Card c : seat.hand) {
      if (!seen.insert(c).second) throw ScenarioError(0, "card " + to_string(c) + " is pre-dealt twice");
    }
    try {
      seat.agent.params.validate();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(0, seat.name + ": " + e.what());
    }
    if (seat.agent.forced_play_hands < 0) throw ScenarioError(0, seat.name + ": forced_play_hands < 0");
  }
  if (trump_card && seen.count(*trump_card)) throw ScenarioError(0, "trump card is also pre-dealt");
  if (trump_card && trump_suit && trump_card->suit != *trump_suit)
    throw ScenarioError(0, "trump card and trump suit disagree");
  if (analysis == Analysis::kStatic || analysis == Analysis::kBluff) {
    for (const auto& seat : seats) {
      if (seat.hand.empty()) throw ScenarioError(0, to_string(analysis) + " analysis needs all four hands");
    }
    if (!trump_card && !trump_suit) throw ScenarioError(0, to_string(analysis) + " analysis needs a trump");
  }
  if (analysis == Analysis::kDynamic || analysis == Analysis::kPersonalities) {
    if (seats[static_cast<std::size_t>(target_seat)].hand.empty())
      throw ScenarioError(0, "target seat has no pre-dealt hand");
    if (seats[static_cast<std::size_t>(target_seat)].kind != AgentKind::kTd)
      throw ScenarioError(0, "target seat must be a td agent");
  }
  if (analysis == Analysis::kPersonalities && contrast.size() < 2)
    throw ScenarioError(0, "personalities analysis needs at least two contrast personalities");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

template <typename T>
T parse_number(const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw std::invalid_argument("'" + v + "' is not a valid number");
  return out;
}

bool parse_bool(const std::string& v) {
  const std::string l = lower(v);
  if (l == "true" || l == "yes" || l == "on" || l == "1") return true;
  if (l == "false" || l == "no" || l == "off" || l == "0") return false;
  throw std::invalid_argument("'" + v + "' is not a boolean");
}

void apply_scenario_key(Scenario& sc, const std::string& key, const std::string& v) {
  if (key == "name") sc.name = v;
  else if (key == "analysis") sc.analysis = parse_analysis(lower(v));
  else if (key == "hands") sc.n_hands = parse_number<int>(v);
  else if (key == "seed") {
    sc.seed = parse_number<std::uint64_t>(v);
    sc.seed_in_file = true;
  }
  else if (key == "dealer") sc.dealer = parse_number<int>(v);
  else if (key == "dealer_rotation") sc.dealer_rotation = parse_bool(v);
  else if (key == "dealer_deals_in") sc.dealer_deals_in = parse_bool(v);
  else if (key == "void_rule") sc.void_rule = parse_void_rule(lower(v));
  else if (key == "trump") sc.trump_suit = parse_suit(v);
  else if (key == "trump_card") sc.trump_card = parse_card(v);
  else if (key == "metrics_window") sc.metrics_window = parse_number<int>(v);
  else if (key == "stability_window") sc.stability_window = parse_number<int>(v);
  else if (key == "eval_hands") sc.eval_hands = parse_number<int>(v);
  else if (key == "target_seat") sc.target_seat = parse_number<int>(v);
  else if (key == "contrast") {
    sc.contrast.clear();
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, '|')) sc.contrast.push_back(parse_personality(trim(item)));
  } else {
    throw std::invalid_argument("unknown scenario key '" + key + "'");
  }
}

void apply_seat_key(SeatSpec& seat, const std::string& key, const std::string& v) {
  if (key == "name") seat.name = v;
  else if (key == "kind") {
    const std::string l = lower(v);
    if (l == "td") seat.kind = AgentKind::kTd;
    else if (l == "random") seat.kind = AgentKind::kRandom;
    else throw std::invalid_argument("kind must be td or random");
  } else if (key == "personality") seat.agent.personality = parse_personality(v);
  else if (key == "alpha") seat.agent.params.alpha = parse_number<double>(v);
  else if (key == "lambda") seat.agent.params.lambda = parse_number<double>(v);
  else if (key == "epsilon") seat.agent.params.epsilon = parse_number<double>(v);
  else if (key == "forced_play_hands") seat.agent.forced_play_hands = parse_number<int>(v);
  else if (key == "hidden") seat.agent.hidden = parse_number<std::size_t>(v);
  else if (key == "hand") seat.hand = parse_cards(v);
  else if (key == "snapshot_in") seat.snapshot_in = v;
  else if (key == "snapshot_out") seat.snapshot_out = v;
  else throw std::invalid_argument("unknown seat key '" + key + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  int section = -2;  // -2 none yet, -1 [scenario], 0..3 seats
  bool saw_scenario = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ScenarioError(line_no, "unterminated section header");
      const std::string name = lower(trim(line.substr(1, line.size() - 2)));
      if (name == "scenario") {
        section = -1;
        saw_scenario = true;
      } else if (name.rfind("seat", 0) == 0) {
        const std::string idx = trim(name.substr(4));
        if (idx.size() != 1 || idx[0] < '0' || idx[0] > '3')
          throw ScenarioError(line_no, "seat sections are [seat 0] .. [seat 3]");
        section = idx[0] - '0';
      } else {
        throw ScenarioError(line_no, "unknown section [" + name + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ScenarioError(line_no, "expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ScenarioError(line_no, "missing key");
    if (section == -2) throw ScenarioError(line_no, "key outside of any section");
    try {
      if (section == -1) apply_scenario_key(sc, key, value);
      else apply_seat_key(sc.seats[static_cast<std::size_t>(section)], key, value);
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScenarioError(line_no, e.what());
    }
  }
  if (!saw_scenario) throw ScenarioError(0, "missing [scenario] section");
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(0, "cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace lerpalab::sim
