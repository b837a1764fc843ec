#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "lerpalab/lerpa/cards.hpp"
#include "lerpalab/lerpa/engine.hpp"
#include "lerpalab/random.hpp"

using namespace lerpalab;
using namespace lerpalab::lerpa;

namespace {

Card C(const char* text) { return parse_card(text); }

// Strength table read straight off the rules: trumps above the led suit,
// everything else worthless.
int strength(Card c, Suit led, Suit trump) {
  static const std::string order = "23456JQK7A";
  const int r = static_cast<int>(order.find(rank_char(c.rank))) + 1;
  if (c.suit == trump) return 200 + r;
  if (c.suit == led) return 100 + r;
  return 0;
}

struct ScriptedPlayer : Player {
  bool knock = true;
  Rng rng{1};
  bool decide_knock(const AgentView&) override { return knock; }
  Card choose_card(const AgentView&, const std::vector<Card>& legal) override {
    return legal[uniform_index(rng, legal.size())];
  }
};

struct CheatingPlayer : Player {
  bool decide_knock(const AgentView&) override { return true; }
  Card choose_card(const AgentView& view, const std::vector<Card>& legal) override {
    for (Card c : view.own_cards) {
      if (std::find(legal.begin(), legal.end(), c) == legal.end()) return c;
    }
    return legal.front();
  }
};

struct Table {
  std::array<ScriptedPlayer, 4> p;
  Table(std::uint64_t seed = 1) {
    for (int i = 0; i < 4; ++i) p[static_cast<std::size_t>(i)].rng.seed(seed * 10 + static_cast<std::uint64_t>(i));
  }
  std::array<Player*, 4> seats() { return {&p[0], &p[1], &p[2], &p[3]}; }
};

}  // namespace

TEST_CASE("deck and rank order") {
  const auto deck = full_deck();
  CHECK(deck.size() == 40);
  CHECK(std::set<Card>(deck.begin(), deck.end()).size() == 40);
  for (Card c : deck) {
    CHECK(parse_card(to_string(c)) == c);
    CHECK(card_at(index_of(c)) == c);
  }
  CHECK(ordinal(Rank::k2) == 1);
  CHECK(ordinal(Rank::k6) == 5);
  CHECK(ordinal(Rank::kJ) == 6);
  CHECK(ordinal(Rank::kK) == 8);
  CHECK(ordinal(Rank::k7) == 9);
  CHECK(ordinal(Rank::kA) == 10);
  CHECK_THROWS_AS(parse_card("8h"), CardError);
  CHECK_THROWS_AS(parse_card("Ax"), CardError);
  CHECK(parse_cards("Ad, 7h 2c") == std::vector<Card>{C("Ad"), C("7h"), C("2c")});
}

TEST_CASE("card_beats examples") {
  CHECK(card_beats(C("7h"), C("Kh"), Suit::kHearts, Suit::kClubs));
  CHECK(card_beats(C("Ah"), C("7h"), Suit::kHearts, Suit::kClubs));
  CHECK(card_beats(C("2c"), C("Ah"), Suit::kHearts, Suit::kClubs));
  CHECK_FALSE(card_beats(C("As"), C("2h"), Suit::kHearts, Suit::kClubs));
  CHECK_FALSE(card_beats(C("Kh"), C("3c"), Suit::kHearts, Suit::kClubs));
}

TEST_CASE("card_beats agrees with the strength table on every pair") {
  for (Suit led : kSuits) {
    for (Suit trump : kSuits) {
      for (Card a : full_deck()) {
        for (Card b : full_deck()) {
          if (a == b) continue;
          const int sa = strength(a, led, trump);
          const int sb = strength(b, led, trump);
          CHECK(card_beats(a, b, led, trump) == (sa > 0 && sa > sb));
        }
      }
    }
  }
}

TEST_CASE("deal") {
  Deal d = deal(42);
  std::set<Card> seen;
  for (const auto& h : d.hands) {
    CHECK(h.size() == 3);
    seen.insert(h.begin(), h.end());
  }
  seen.insert(d.trump_card);
  CHECK(seen.size() == 13);
  CHECK(d.stock.size() == 27);
  CHECK(d.trump == d.trump_card.suit);

  Deal again = deal(42);
  CHECK(again.hands == d.hands);
  CHECK(again.trump_card == d.trump_card);
  CHECK_FALSE(deal(43).hands == d.hands);

  PreDeal all;
  all.hands = {std::vector<Card>{C("2d"), C("3h"), C("4c")}, {C("2h"), C("3s"), C("5c")},
               {C("Kd"), C("Ah"), C("6c")}, {C("Ad"), C("Qd"), C("Js")}};
  Deal fixed = deal(7, all);
  CHECK(fixed.hands == all.hands);
  std::vector<Card> rest;
  for (Card c : full_deck()) {
    bool used = false;
    for (const auto& h : all.hands) used |= std::find(h.begin(), h.end(), c) != h.end();
    if (!used) rest.push_back(c);
  }
  REQUIRE(rest.size() == 28);
  Rng rng(7);
  std::shuffle(rest.begin(), rest.end(), rng);
  CHECK(fixed.trump_card == rest.front());

  all.trump_suit = Suit::kDiamonds;
  CHECK(deal(7, all).trump == Suit::kDiamonds);
  all.trump_card = C("5d");
  CHECK(deal(7, all).trump_card == C("5d"));

  PreDeal dup;
  dup.hands[0] = {C("2d"), C("3h"), C("4c")};
  dup.hands[1] = {C("2d"), C("3s"), C("5c")};
  CHECK_THROWS_AS(deal(1, dup), RuleError);
  PreDeal short_hand;
  short_hand.hands[2] = {C("2d")};
  CHECK_THROWS_AS(deal(1, short_hand), RuleError);

  PreDeal one;
  one.hands[2] = {C("Ad"), C("7d"), C("Kd")};
  for (std::uint64_t s = 0; s < 50; ++s) {
    Deal p = deal(s, one);
    CHECK(p.hands[2] == one.hands[2]);
    for (int seat : {0, 1, 3}) {
      for (Card c : p.hands[static_cast<std::size_t>(seat)])
        CHECK(std::find(one.hands[2].begin(), one.hands[2].end(), c) == one.hands[2].end());
    }
  }
}

TEST_CASE("dealer dealing in holds the trump card and is knocked") {
  HandConfig cfg;
  cfg.dealer = 2;
  cfg.dealer_deals_in = true;
  Deal d = deal(5, {}, 2, true);
  const auto& h = d.hands[2];
  REQUIRE(h.size() == 3);
  CHECK(h.back() == d.trump_card);
  HandState st(d, cfg);
  CHECK(st.statuses()[2] == Status::kKnocked);
  CHECK(st.to_act() == 3);
  Table t;
  for (auto& p : t.p) p.knock = false;
  auto rec = play_hand(t.seats(), cfg, 5);
  CHECK(rec.result.seats[2].chip_delta == 3);
  CHECK(check_hand(rec).empty());
  CHECK(replay_hand(rec.log).result == rec.result);
}

TEST_CASE("legal_plays") {
  const std::vector<Play> hearts_led{{0, C("5h")}};
  CHECK(legal_plays({C("Kh"), C("2c"), C("4d")}, hearts_led, Suit::kDiamonds) == std::vector<Card>{C("Kh")});
  CHECK(legal_plays({C("2c"), C("4d")}, hearts_led, Suit::kDiamonds) == std::vector<Card>{C("2c"), C("4d")});
  CHECK(legal_plays({C("2c"), C("4d")}, hearts_led, Suit::kDiamonds, VoidRule::kMustTrump) ==
        std::vector<Card>{C("4d")});
  CHECK(legal_plays({C("2c"), C("4s")}, hearts_led, Suit::kDiamonds, VoidRule::kMustTrump) ==
        std::vector<Card>{C("2c"), C("4s")});
  CHECK(legal_plays({C("Ad"), C("Kh"), C("2c")}, {}, Suit::kDiamonds) == std::vector<Card>{C("Ad")});
  // The ace only forces itself when it is playable.
  CHECK(legal_plays({C("Ad"), C("Kh")}, hearts_led, Suit::kDiamonds) == std::vector<Card>{C("Kh")});
  CHECK(legal_plays({C("Ad"), C("2c")}, hearts_led, Suit::kDiamonds) == std::vector<Card>{C("Ad")});
  CHECK_THROWS_AS(legal_plays({}, {}, Suit::kDiamonds), RuleError);
}

TEST_CASE("resolve_trick") {
  CHECK(resolve_trick(std::vector<Play>{{0, C("Kh")}, {1, C("Ah")}, {2, C("3h")}}, Suit::kClubs) == 1);
  CHECK(resolve_trick(std::vector<Play>{{3, C("Kh")}, {0, C("2c")}}, Suit::kClubs) == 0);
  CHECK(resolve_trick(std::vector<Play>{{2, C("4s")}}, Suit::kClubs) == 2);
  CHECK(resolve_trick(std::vector<Play>{{1, C("3h")}, {2, C("As")}, {3, C("2h")}}, Suit::kClubs) == 1);
  CHECK_THROWS_AS(resolve_trick(std::vector<Play>{}, Suit::kClubs), RuleError);
}

TEST_CASE("settle") {
  using S = Status;
  auto r = settle({3, 0, 0, 0}, {S::kKnocked, S::kFolded, S::kFolded, S::kFolded});
  CHECK(r.seats[0] == SeatResult{3, 3, OutcomeClass::kWin3});
  CHECK(r.seats[1] == SeatResult{0, 0, OutcomeClass::kFold});
  r = settle({2, 1, 0, 0}, {S::kKnocked, S::kKnocked, S::kKnocked, S::kFolded});
  CHECK(r.seats[0].chip_delta == 2);
  CHECK(r.seats[1].chip_delta == 1);
  CHECK(r.seats[2] == SeatResult{0, -3, OutcomeClass::kLerpa});
  CHECK(r.seats[3].chip_delta == 0);
  r = settle({0, 0, 0, 0}, {S::kFolded, S::kFolded, S::kFolded, S::kFolded});
  for (const auto& s : r.seats) CHECK(s.chip_delta == 0);
  CHECK_THROWS_AS(settle({2, 0, 0, 0}, {S::kKnocked, S::kKnocked, S::kFolded, S::kFolded}), RuleError);
  CHECK_THROWS_AS(settle({2, 1, 0, 0}, {S::kKnocked, S::kFolded, S::kFolded, S::kFolded}), RuleError);
}

TEST_CASE("play_hand basics") {
  SUBCASE("all fold") {
    Table t;
    for (auto& p : t.p) p.knock = false;
    auto rec = play_hand(t.seats(), {}, 3);
    CHECK(rec.tricks.empty());
    for (const auto& s : rec.result.seats) CHECK(s == SeatResult{0, 0, OutcomeClass::kFold});
    CHECK(check_hand(rec).empty());
  }
  SUBCASE("one knocker takes the pot") {
    Table t;
    for (auto& p : t.p) p.knock = false;
    t.p[3].knock = true;
    auto rec = play_hand(t.seats(), {}, 4);
    CHECK(rec.result.seats[3].chip_delta == 3);
    CHECK(rec.tricks.size() == 3);
    for (const auto& tr : rec.tricks) CHECK(tr.plays.size() == 1);
  }
  SUBCASE("illegal card is a protocol violation naming the seat") {
    std::array<CheatingPlayer, 4> c;
    bool thrown = false;
    for (std::uint64_t seed = 0; seed < 50 && !thrown; ++seed) {
      try {
        play_hand({&c[0], &c[1], &c[2], &c[3]}, {}, seed);
      } catch (const ProtocolViolation& e) {
        thrown = true;
        CHECK(e.seat() >= 0);
        CHECK(std::string(e.what()).find("illegal card") != std::string::npos);
      }
    }
    CHECK(thrown);
  }
}

TEST_CASE("knock order, lead and views") {
  struct Recorder : Player {
    std::vector<AgentView> views;
    bool decide_knock(const AgentView& v) override {
      views.push_back(v);
      return true;
    }
    Card choose_card(const AgentView& v, const std::vector<Card>& legal) override {
      views.push_back(v);
      return legal.front();
    }
  };
  std::array<Recorder, 4> r;
  HandConfig cfg;
  cfg.dealer = 1;
  auto rec = play_hand({&r[0], &r[1], &r[2], &r[3]}, cfg, 9);
  // Dealer's left decides first and sees everyone undecided.
  std::vector<std::string> status_lines;
  for (const auto& l : rec.log) {
    if (l.rfind("STATUS", 0) == 0) status_lines.push_back(l.substr(7, 1));
  }
  CHECK(status_lines == std::vector<std::string>{"2", "3", "0", "1"});
  CHECK(r[2].views.front().statuses == std::array<Status, 3>{Status::kUndecided, Status::kUndecided, Status::kUndecided});
  // The dealer decides last; its left (seat 2) is its first relative seat.
  CHECK(r[1].views.front().statuses == std::array<Status, 3>{Status::kKnocked, Status::kKnocked, Status::kKnocked});
  CHECK(rec.tricks.front().plays.front().seat == 2);
  for (std::size_t t = 1; t < rec.tricks.size(); ++t)
    CHECK(rec.tricks[t].plays.front().seat == rec.tricks[t - 1].winner);
  for (const auto& rr : r) {
    for (const auto& v : rr.views) CHECK(v.played.size() <= 11);
  }
}

TEST_CASE("replay reproduces hands and rejects tampering") {
  Table t(5);
  auto rec = play_hand(t.seats(), {}, 77);
  auto again = replay_hand(rec.log);
  CHECK(again.result == rec.result);
  CHECK(again.tricks.size() == rec.tricks.size());

  auto bad_settle = rec.log;
  for (auto& l : bad_settle) {
    if (l.rfind("SETTLE 0", 0) == 0) l = "SETTLE 0 99";
  }
  CHECK_THROWS_AS(replay_hand(bad_settle), RuleError);

  auto truncated = rec.log;
  truncated.resize(truncated.size() - 6);
  CHECK_THROWS_AS(replay_hand(truncated), RuleError);

  std::vector<std::string> dup = rec.log;
  for (auto& l : dup) {
    if (l.rfind("DEAL 1", 0) == 0) l = "DEAL 1 " + to_string(rec.deal.hands[0][0]) + " " + to_string(rec.deal.hands[1][1]) + " " + to_string(rec.deal.hands[1][2]);
  }
  CHECK_THROWS_AS(replay_hand(dup), RuleError);
}

TEST_CASE("random hands keep every invariant") {
  Rng table_rng(2024);
  int knocked_hands = 0;
  for (int h = 0; h < 20000; ++h) {
    Table t(static_cast<std::uint64_t>(h));
    for (auto& p : t.p) p.knock = chance(table_rng, 0.7);
    HandConfig cfg;
    cfg.dealer = h % 4;
    cfg.void_rule = h % 3 == 0 ? VoidRule::kMustTrump : VoidRule::kPermissive;
    auto rec = play_hand(t.seats(), cfg, static_cast<std::uint64_t>(h));
    const auto problems = check_hand(rec);
    CHECK_MESSAGE(problems.empty(), h);
    knocked_hands += !rec.tricks.empty();
    if (h % 10 == 0) CHECK(replay_hand(rec.log).result == rec.result);
  }
  CHECK(knocked_hands > 19000);
}
