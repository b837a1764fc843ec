#include "lerpalab/lerpa/engine.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lerpalab/random.hpp"

namespace lerpalab::lerpa {

std::string to_string(Status s) {
  switch (s) {
    case Status::kUndecided: return "undecided";
    case Status::kKnocked: return "knocked";
    case Status::kFolded: return "folded";
  }
  return "?";
}

std::string to_string(OutcomeClass o) {
  switch (o) {
    case OutcomeClass::kWin3: return "win3";
    case OutcomeClass::kWin2: return "win2";
    case OutcomeClass::kWin1: return "win1";
    case OutcomeClass::kLerpa: return "lerpa";
    case OutcomeClass::kFold: return "fold";
  }
  return "?";
}

std::string to_string(VoidRule r) { return r == VoidRule::kPermissive ? "permissive" : "must_trump"; }

VoidRule parse_void_rule(const std::string& text) {
  if (text == "permissive") return VoidRule::kPermissive;
  if (text == "must_trump" || text == "strict") return VoidRule::kMustTrump;
  throw std::invalid_argument("unknown void rule '" + text + "'");
}

bool PreDeal::any() const {
  return trump_card || trump_suit ||
         std::any_of(hands.begin(), hands.end(), [](const auto& h) { return !h.empty(); });
}

Deal deal(std::uint64_t seed, const PreDeal& pre, int dealer, bool dealer_deals_in) {
  if (dealer < 0 || dealer >= kSeats) throw RuleError("dealer seat out of range");
  std::set<Card> fixed;
  auto claim = [&](Card c) {
    if (!fixed.insert(c).second) throw RuleError("card " + to_string(c) + " pre-dealt twice");
  };
  for (int s = 0; s < kSeats; ++s) {
    const auto& h = pre.hands[static_cast<std::size_t>(s)];
    if (!h.empty() && h.size() != kHandSize)
      throw RuleError("pre-dealt hand for seat " + std::to_string(s) + " must hold 3 cards");
    for (Card c : h) claim(c);
  }
  if (pre.trump_card) {
    claim(*pre.trump_card);
    if (pre.trump_suit && *pre.trump_suit != pre.trump_card->suit)
      throw RuleError("fixed trump card and trump suit disagree");
  }

  std::vector<Card> deck;
  for (Card c : full_deck()) {
    if (!fixed.contains(c)) deck.push_back(c);
  }
  Rng rng(seed);
  std::shuffle(deck.begin(), deck.end(), rng);
  std::size_t next = 0;

  Deal d;
  const bool dealer_random = pre.hands[static_cast<std::size_t>(dealer)].empty();
  for (int s = 0; s < kSeats; ++s) {
    auto& hand = d.hands[static_cast<std::size_t>(s)];
    const auto& fixed_hand = pre.hands[static_cast<std::size_t>(s)];
    if (!fixed_hand.empty()) {
      hand = fixed_hand;
      continue;
    }
    const int n = dealer_deals_in && s == dealer ? kHandSize - 1 : kHandSize;
    for (int i = 0; i < n; ++i) hand.push_back(deck[next++]);
  }

  if (pre.trump_card) {
    d.trump_card = *pre.trump_card;
  } else if (pre.trump_suit) {
    auto it = std::find_if(deck.begin() + static_cast<std::ptrdiff_t>(next), deck.end(),
                           [&](Card c) { return c.suit == *pre.trump_suit; });
    if (it == deck.end()) throw RuleError("no " + to_string(*pre.trump_suit) + " left to flip");
    std::rotate(deck.begin() + static_cast<std::ptrdiff_t>(next), it, it + 1);
    d.trump_card = deck[next++];
  } else {
    d.trump_card = deck[next++];
  }
  d.trump = d.trump_card.suit;
  if (dealer_deals_in && dealer_random) d.hands[static_cast<std::size_t>(dealer)].push_back(d.trump_card);
  d.stock.assign(deck.begin() + static_cast<std::ptrdiff_t>(next), deck.end());
  return d;
}

std::vector<Card> legal_plays(const std::vector<Card>& hand, std::span<const Play> trick, Suit trump,
                              VoidRule rule) {
  if (hand.empty()) throw RuleError("no cards left to play");
  std::vector<Card> out;
  if (trick.empty()) {
    out = hand;
  } else {
    const Suit led = trick.front().card.suit;
    for (Card c : hand) {
      if (c.suit == led) out.push_back(c);
    }
    if (out.empty() && rule == VoidRule::kMustTrump) {
      for (Card c : hand) {
        if (c.suit == trump) out.push_back(c);
      }
    }
    if (out.empty()) out = hand;
  }
  for (Card c : out) {
    if (is_trump_ace(c, trump)) return {c};
  }
  std::sort(out.begin(), out.end());
  return out;
}

int resolve_trick(std::span<const Play> trick, Suit trump) {
  if (trick.empty()) throw RuleError("cannot resolve an empty trick");
  const Suit led = trick.front().card.suit;
  Play best = trick.front();
  for (const Play& p : trick.subspan(1)) {
    if (card_beats(p.card, best.card, led, trump)) best = p;
  }
  return best.seat;
}

HandResult settle(const std::array<int, kSeats>& tricks, const std::array<Status, kSeats>& statuses) {
  HandResult r;
  int total = 0;
  bool any = false;
  for (int s = 0; s < kSeats; ++s) {
    const auto i = static_cast<std::size_t>(s);
    if (tricks[i] < 0 || tricks[i] > kHandSize) throw RuleError("trick count out of range");
    if (statuses[i] == Status::kUndecided) throw RuleError("cannot settle an undecided seat");
    if (statuses[i] == Status::kFolded) {
      if (tricks[i] != 0) throw RuleError("folded seat cannot win tricks");
      r.seats[i] = {0, 0, OutcomeClass::kFold};
      continue;
    }
    any = true;
    total += tricks[i];
    static constexpr OutcomeClass by_tricks[] = {OutcomeClass::kLerpa, OutcomeClass::kWin1,
                                                 OutcomeClass::kWin2, OutcomeClass::kWin3};
    r.seats[i] = {tricks[i], tricks[i] == 0 ? -kPot : tricks[i], by_tricks[tricks[i]]};
  }
  if (any && total != kHandSize) throw RuleError("knocked seats must share exactly 3 tricks");
  return r;
}

AgentView with_play(const AgentView& view, Card card) {
  AgentView next = view;
  auto it = std::find(next.own_cards.begin(), next.own_cards.end(), card);
  if (it == next.own_cards.end()) throw RuleError("card " + to_string(card) + " is not in hand");
  next.own_cards.erase(it);
  next.played.push_back({0, card});
  return next;
}

HandState::HandState(Deal deal, const HandConfig& config) : deal_(std::move(deal)), config_(config) {
  if (config_.dealer < 0 || config_.dealer >= kSeats) throw RuleError("dealer seat out of range");
  std::set<Card> seen;
  for (int s = 0; s < kSeats; ++s) {
    const auto& h = deal_.hands[static_cast<std::size_t>(s)];
    if (h.size() != kHandSize) throw RuleError("every seat must hold 3 cards");
    for (Card c : h) {
      if (!seen.insert(c).second) throw RuleError("card " + to_string(c) + " dealt twice");
    }
  }
  if (deal_.trump != deal_.trump_card.suit) throw RuleError("trump suit must match the trump card");
  const bool trump_in_dealer_hand = [&] {
    const auto& h = deal_.hands[static_cast<std::size_t>(config_.dealer)];
    return std::find(h.begin(), h.end(), deal_.trump_card) != h.end();
  }();
  if (seen.contains(deal_.trump_card) && !(config_.dealer_deals_in && trump_in_dealer_hand))
    throw RuleError("trump card " + to_string(deal_.trump_card) + " is also in a hand");
  hands_ = deal_.hands;
  if (config_.dealer_deals_in) statuses_[static_cast<std::size_t>(config_.dealer)] = Status::kKnocked;
  while (knock_turn_ < kSeats &&
         statuses_[static_cast<std::size_t>((config_.dealer + 1 + knock_turn_) % kSeats)] !=
             Status::kUndecided) {
    ++knock_turn_;
  }
  if (knock_turn_ == kSeats) start_play();
}

int HandState::to_act() const {
  switch (phase_) {
    case Phase::kKnocking: return (config_.dealer + 1 + knock_turn_) % kSeats;
    case Phase::kPlaying: return turn_;
    case Phase::kDone: break;
  }
  return -1;
}

void HandState::decide(int seat, bool knock) {
  if (phase_ != Phase::kKnocking || seat != to_act())
    throw ProtocolViolation(seat, "seat " + std::to_string(seat) + " decided out of turn");
  statuses_[static_cast<std::size_t>(seat)] = knock ? Status::kKnocked : Status::kFolded;
  do {
    ++knock_turn_;
  } while (knock_turn_ < kSeats &&
           statuses_[static_cast<std::size_t>((config_.dealer + 1 + knock_turn_) % kSeats)] !=
               Status::kUndecided);
  if (knock_turn_ == kSeats) start_play();
}

int HandState::next_knocked(int seat) const {
  for (int i = 1; i <= kSeats; ++i) {
    const int s = (seat + i) % kSeats;
    if (statuses_[static_cast<std::size_t>(s)] == Status::kKnocked) return s;
  }
  return -1;
}

void HandState::start_play() {
  knocked_ = static_cast<int>(std::count(statuses_.begin(), statuses_.end(), Status::kKnocked));
  if (knocked_ == 0) {
    phase_ = Phase::kDone;
    return;
  }
  phase_ = Phase::kPlaying;
  leader_ = next_knocked(config_.dealer);
  turn_ = leader_;
}

std::vector<Card> HandState::legal_for(int seat) const {
  return legal_plays(hands_[static_cast<std::size_t>(seat)], current_, deal_.trump, config_.void_rule);
}

void HandState::play(int seat, Card card) {
  if (phase_ != Phase::kPlaying || seat != turn_)
    throw ProtocolViolation(seat, "seat " + std::to_string(seat) + " played out of turn");
  const auto legal = legal_for(seat);
  if (std::find(legal.begin(), legal.end(), card) == legal.end()) {
    throw ProtocolViolation(seat, "seat " + std::to_string(seat) + " played illegal card " +
                                      to_string(card) + " (legal: " + join_cards(legal) + ")");
  }
  auto& hand = hands_[static_cast<std::size_t>(seat)];
  hand.erase(std::find(hand.begin(), hand.end(), card));
  current_.push_back({seat, card});
  played_abs_.push_back({seat, card});

  if (static_cast<int>(current_.size()) < knocked_) {
    turn_ = next_knocked(seat);
    return;
  }
  TrickRecord t;
  t.plays = current_;
  t.led = current_.front().card.suit;
  t.winner = resolve_trick(current_, deal_.trump);
  tricks_.push_back(t);
  current_.clear();
  leader_ = turn_ = t.winner;
  if (tricks_.size() == kHandSize) phase_ = Phase::kDone;
}

AgentView HandState::view_for(int seat) const {
  AgentView v;
  v.own_cards = hands_[static_cast<std::size_t>(seat)];
  std::sort(v.own_cards.begin(), v.own_cards.end());
  v.trump = deal_.trump;
  for (int r = 1; r < kSeats; ++r) {
    v.statuses[static_cast<std::size_t>(r - 1)] = statuses_[static_cast<std::size_t>((seat + r) % kSeats)];
  }
  for (const RelPlay& p : played_abs_) v.played.push_back({(p.rel - seat + kSeats) % kSeats, p.card});
  if (!tricks_.empty()) v.first_trick_winner = (tricks_.front().winner - seat + kSeats) % kSeats;
  return v;
}

HandResult HandState::result() const {
  if (phase_ != Phase::kDone) throw RuleError("hand is not finished");
  std::array<int, kSeats> won{};
  for (const auto& t : tricks_) ++won[static_cast<std::size_t>(t.winner)];
  return settle(won, statuses_);
}

namespace {

std::string deal_line(int seat, const std::vector<Card>& hand) {
  return "DEAL " + std::to_string(seat) + " " + join_cards(hand);
}

HandRecord finish_record(const HandState& state, std::vector<std::string> log) {
  HandRecord rec;
  rec.result = state.result();
  rec.deal = state.deal();
  rec.dealer = state.dealer();
  rec.void_rule = state.config().void_rule;
  rec.statuses = state.statuses();
  rec.tricks = state.tricks();
  for (int s = 0; s < kSeats; ++s) {
    log.push_back("SETTLE " + std::to_string(s) + " " +
                  std::to_string(rec.result.seats[static_cast<std::size_t>(s)].chip_delta));
  }
  rec.log = std::move(log);
  return rec;
}

}  // namespace

HandRecord play_hand(const std::array<Player*, kSeats>& players, const HandConfig& config,
                     std::uint64_t seed) {
  HandState state(deal(seed, config.pre_deal, config.dealer, config.dealer_deals_in), config);
  std::vector<std::string> log;
  log.push_back("DEALER " + std::to_string(config.dealer));
  log.push_back("RULES " + to_string(config.void_rule) + " dealin " +
                (config.dealer_deals_in ? "1" : "0"));
  for (int s = 0; s < kSeats; ++s) log.push_back(deal_line(s, state.deal().hands[static_cast<std::size_t>(s)]));
  log.push_back("TRUMP " + to_string(state.deal().trump_card));

  for (int s = 0; s < kSeats; ++s) players[static_cast<std::size_t>(s)]->begin_hand(s);
  while (state.phase() == HandState::Phase::kKnocking) {
    const int s = state.to_act();
    const bool knock = players[static_cast<std::size_t>(s)]->decide_knock(state.view_for(s));
    state.decide(s, knock);
    log.push_back("STATUS " + std::to_string(s) + (knock ? " knocked" : " folded"));
  }
  while (state.phase() == HandState::Phase::kPlaying) {
    const int s = state.to_act();
    const auto legal = state.legal_for(s);
    const Card c = players[static_cast<std::size_t>(s)]->choose_card(state.view_for(s), legal);
    state.play(s, c);
    log.push_back("PLAY " + std::to_string(s) + " " + to_string(c));
    if (state.current_trick().empty()) {
      log.push_back("TRICK " + std::to_string(state.tricks().size()) + " " +
                    std::to_string(state.tricks().back().winner));
    }
  }
  HandRecord rec = finish_record(state, std::move(log));
  for (int s = 0; s < kSeats; ++s) {
    players[static_cast<std::size_t>(s)]->end_hand(state.view_for(s), rec.result.seats[static_cast<std::size_t>(s)]);
  }
  return rec;
}

HandRecord replay_hand(const std::vector<std::string>& log) {
  HandConfig config;
  Deal d;
  std::array<bool, kSeats> dealt{};
  bool have_trump = false;
  std::optional<HandState> state;
  std::vector<std::string> settles;
  int line_no = 0;

  auto fail = [&](const std::string& what) {
    throw RuleError("log line " + std::to_string(line_no) + ": " + what);
  };
  auto seat_of = [&](const std::string& token) {
    if (token.size() != 1 || token[0] < '0' || token[0] > '3') fail("bad seat '" + token + "'");
    return token[0] - '0';
  };
  auto ensure_state = [&] {
    if (state) return;
    if (!have_trump || !std::all_of(dealt.begin(), dealt.end(), [](bool b) { return b; }))
      fail("deal incomplete before play");
    d.trump = d.trump_card.suit;
    std::set<Card> used{d.trump_card};
    for (const auto& h : d.hands) used.insert(h.begin(), h.end());
    for (Card c : full_deck()) {
      if (!used.contains(c)) d.stock.push_back(c);
    }
    state.emplace(d, config);
  };

  for (const std::string& raw : log) {
    ++line_no;
    std::istringstream in(raw);
    std::string kind;
    if (!(in >> kind)) continue;
    try {
      if (kind == "DEALER") {
        std::string s;
        in >> s;
        config.dealer = seat_of(s);
      } else if (kind == "RULES") {
        std::string rule, word, flag;
        in >> rule >> word >> flag;
        config.void_rule = parse_void_rule(rule);
        config.dealer_deals_in = flag == "1";
      } else if (kind == "DEAL") {
        std::string s, rest;
        in >> s;
        std::getline(in, rest);
        const int seat = seat_of(s);
        d.hands[static_cast<std::size_t>(seat)] = parse_cards(rest);
        dealt[static_cast<std::size_t>(seat)] = true;
      } else if (kind == "TRUMP") {
        std::string c;
        in >> c;
        d.trump_card = parse_card(c);
        have_trump = true;
      } else if (kind == "STATUS") {
        ensure_state();
        std::string s, what;
        in >> s >> what;
        if (what != "knocked" && what != "folded") fail("bad status '" + what + "'");
        state->decide(seat_of(s), what == "knocked");
      } else if (kind == "PLAY") {
        ensure_state();
        std::string s, c;
        in >> s >> c;
        state->play(seat_of(s), parse_card(c));
      } else if (kind == "TRICK") {
        ensure_state();
        std::size_t n = 0;
        std::string w;
        in >> n >> w;
        if (n != state->tricks().size() || !state->current_trick().empty())
          fail("trick " + std::to_string(n) + " logged out of order");
        if (state->tricks().back().winner != seat_of(w)) fail("logged trick winner disagrees with the rules");
      } else if (kind == "SETTLE") {
        settles.push_back(raw);
      } else {
        fail("unknown event '" + kind + "'");
      }
    } catch (const CardError& e) {
      fail(e.what());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    } catch (const RuleError& e) {
      if (std::string(e.what()).rfind("log line", 0) == 0) throw;
      fail(e.what());
    }
  }
  ensure_state();
  if (state->phase() != HandState::Phase::kDone) throw RuleError("log ends before the hand is over");
  HandRecord rec = finish_record(*state, {});
  std::vector<std::string> expect(rec.log.begin(), rec.log.end());
  if (!settles.empty() && settles != expect) throw RuleError("logged settlement disagrees with the rules");
  rec.log = log;
  return rec;
}

std::vector<std::string> check_hand(const HandRecord& record) {
  std::vector<std::string> problems;
  const Deal& d = record.deal;

  // Card conservation.
  std::array<int, kDeckSize> count{};
  for (int s = 0; s < kSeats; ++s) {
    for (Card c : d.hands[static_cast<std::size_t>(s)]) ++count[static_cast<std::size_t>(index_of(c))];
  }
  const auto& dealer_hand = d.hands[static_cast<std::size_t>(record.dealer)];
  if (std::find(dealer_hand.begin(), dealer_hand.end(), d.trump_card) == dealer_hand.end())
    ++count[static_cast<std::size_t>(index_of(d.trump_card))];
  for (Card c : d.stock) ++count[static_cast<std::size_t>(index_of(c))];
  for (int i = 0; i < kDeckSize; ++i) {
    if (count[static_cast<std::size_t>(i)] > 1) problems.push_back("card " + to_string(card_at(i)) + " appears twice");
  }

  // Trick structure, legality and the forced ace, replayed from the deal.
  auto hands = d.hands;
  const int knocked = static_cast<int>(std::count(record.statuses.begin(), record.statuses.end(), Status::kKnocked));
  std::array<int, kSeats> won{};
  for (std::size_t t = 0; t < record.tricks.size(); ++t) {
    const auto& trick = record.tricks[t];
    if (static_cast<int>(trick.plays.size()) != knocked) problems.push_back("trick size differs from knocked seats");
    std::vector<Play> so_far;
    for (const Play& p : trick.plays) {
      if (record.statuses[static_cast<std::size_t>(p.seat)] != Status::kKnocked)
        problems.push_back("folded seat " + std::to_string(p.seat) + " played");
      auto& hand = hands[static_cast<std::size_t>(p.seat)];
      const bool had_ace = std::any_of(hand.begin(), hand.end(), [&](Card c) { return is_trump_ace(c, d.trump); });
      const auto legal = legal_plays(hand, so_far, d.trump, record.void_rule);
      if (std::find(legal.begin(), legal.end(), p.card) == legal.end())
        problems.push_back("seat " + std::to_string(p.seat) + " played illegal card " + to_string(p.card));
      if (had_ace && legal.size() == 1 && is_trump_ace(legal.front(), d.trump) && !is_trump_ace(p.card, d.trump))
        problems.push_back("seat " + std::to_string(p.seat) + " held back the ace of trumps");
      auto it = std::find(hand.begin(), hand.end(), p.card);
      if (it == hand.end()) problems.push_back("seat " + std::to_string(p.seat) + " played a card it did not hold");
      else hand.erase(it);
      so_far.push_back(p);
    }
    if (!trick.plays.empty() && resolve_trick(trick.plays, d.trump) != trick.winner)
      problems.push_back("trick " + std::to_string(t + 1) + " winner is wrong");
    ++won[static_cast<std::size_t>(trick.winner)];
  }
  if (knocked > 0 && record.tricks.size() != kHandSize) problems.push_back("hand did not play three tricks");
  if (knocked == 0 && !record.tricks.empty()) problems.push_back("tricks played with no knockers");

  // Settlement balance.
  int positive = 0;
  for (int s = 0; s < kSeats; ++s) {
    const auto& r = record.result.seats[static_cast<std::size_t>(s)];
    if (r.chip_delta > 0) positive += r.chip_delta;
    if (r.tricks_won != won[static_cast<std::size_t>(s)]) problems.push_back("trick tally mismatch");
    const bool folded = record.statuses[static_cast<std::size_t>(s)] == Status::kFolded;
    if (folded && r.chip_delta != 0) problems.push_back("folded seat has a non-zero delta");
    if (!folded && r.tricks_won == 0 && r.chip_delta != -kPot) problems.push_back("lerpa'd seat not charged 3");
    if ((r.outcome == OutcomeClass::kLerpa) != (r.chip_delta == -kPot)) problems.push_back("lerpa class mismatch");
  }
  if (positive != (knocked > 0 ? kPot : 0)) problems.push_back("positive deltas do not sum to the pot");
  return problems;
}

}  // namespace lerpalab::lerpa
