#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lerpalab/lerpa/cards.hpp"

namespace lerpalab::lerpa {

inline constexpr int kSeats = 4;
inline constexpr int kHandSize = 3;
inline constexpr int kPot = 3;

enum class Status : std::uint8_t { kUndecided, kKnocked, kFolded };
enum class OutcomeClass : std::uint8_t { kWin3, kWin2, kWin1, kLerpa, kFold };
// Whether a player void in the led suit but holding trumps must trump.
enum class VoidRule : std::uint8_t { kPermissive, kMustTrump };

std::string to_string(Status s);
std::string to_string(OutcomeClass o);
std::string to_string(VoidRule r);
VoidRule parse_void_rule(const std::string& text);

// An agent or driver broke the rules: wrong turn, illegal card, bad deal.
class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProtocolViolation : public RuleError {
 public:
  ProtocolViolation(int seat, const std::string& what) : RuleError(what), seat_(seat) {}
  int seat() const { return seat_; }

 private:
  int seat_;
};

struct Play {
  int seat = 0;
  Card card;
  friend bool operator==(const Play&, const Play&) = default;
};

struct TrickRecord {
  std::vector<Play> plays;
  Suit led = Suit::kClubs;
  int winner = 0;
};

struct SeatResult {
  int tricks_won = 0;
  int chip_delta = 0;
  OutcomeClass outcome = OutcomeClass::kFold;
  friend bool operator==(const SeatResult&, const SeatResult&) = default;
};

struct HandResult {
  std::array<SeatResult, kSeats> seats{};
  friend bool operator==(const HandResult&, const HandResult&) = default;
};

// Fixed cards for a deal. A seat with an empty hand is dealt at random.
struct PreDeal {
  std::array<std::vector<Card>, kSeats> hands;
  std::optional<Card> trump_card;
  std::optional<Suit> trump_suit;  // flips the first card of this suit left in the deck

  bool any() const;
};

struct Deal {
  std::array<std::vector<Card>, kSeats> hands;
  Card trump_card;
  Suit trump = Suit::kClubs;
  std::vector<Card> stock;  // undealt cards after the trump flip
};

// Seeded shuffle of the cards not fixed by `pre`; random seats are filled in
// seat order, then the next card is flipped for trumps. When the dealer deals
// in, the dealer takes two cards and the trump card.
Deal deal(std::uint64_t seed, const PreDeal& pre = {}, int dealer = 0, bool dealer_deals_in = false);

// Cards `hand` may play onto `trick`. Follow suit when possible; a void
// player may play anything (or must trump, under kMustTrump). If the ace of
// trumps is among the options it is the only option.
std::vector<Card> legal_plays(const std::vector<Card>& hand, std::span<const Play> trick, Suit trump,
                              VoidRule rule = VoidRule::kPermissive);

// Seat of the winning play.
int resolve_trick(std::span<const Play> trick, Suit trump);

// Knocked seats win one chip per trick, or lose 3 with no tricks; folded
// seats are untouched.
HandResult settle(const std::array<int, kSeats>& tricks, const std::array<Status, kSeats>& statuses);

// Everything one seat can see, with other seats given relative to it:
// 1 = left (next clockwise), 2 = across, 3 = right, 0 = self.
struct RelPlay {
  int rel = 0;
  Card card;
  friend bool operator==(const RelPlay&, const RelPlay&) = default;
};

struct AgentView {
  std::vector<Card> own_cards;
  Suit trump = Suit::kClubs;
  std::array<Status, 3> statuses{};  // left, across, right
  std::vector<RelPlay> played;        // every card played this hand, in order
  std::optional<int> first_trick_winner;
};

// The view after this seat plays `card`.
AgentView with_play(const AgentView& view, Card card);

struct HandConfig {
  int dealer = 0;
  PreDeal pre_deal;
  bool dealer_deals_in = false;
  VoidRule void_rule = VoidRule::kPermissive;
};

// Rules state machine for one hand. Knock decisions run clockwise from the
// dealer's left; the first knocker in that order leads; trick winners lead.
class HandState {
 public:
  HandState(Deal deal, const HandConfig& config);

  enum class Phase { kKnocking, kPlaying, kDone };
  Phase phase() const { return phase_; }
  int to_act() const;  // seat whose decision is due

  void decide(int seat, bool knock);
  void play(int seat, Card card);
  std::vector<Card> legal_for(int seat) const;

  AgentView view_for(int seat) const;
  HandResult result() const;

  const Deal& deal() const { return deal_; }
  int dealer() const { return config_.dealer; }
  const HandConfig& config() const { return config_; }
  const std::array<Status, kSeats>& statuses() const { return statuses_; }
  const std::array<std::vector<Card>, kSeats>& hands() const { return hands_; }
  const std::vector<TrickRecord>& tricks() const { return tricks_; }
  const std::vector<Play>& current_trick() const { return current_; }
  int pot() const { return kPot; }

 private:
  void start_play();
  int next_knocked(int seat) const;

  Deal deal_;
  HandConfig config_;
  Phase phase_ = Phase::kKnocking;
  std::array<std::vector<Card>, kSeats> hands_;
  std::array<Status, kSeats> statuses_{};
  int knock_turn_ = 0;  // 0..3 offset from the dealer's left
  int leader_ = 0;
  int turn_ = 0;
  int knocked_ = 0;
  std::vector<Play> current_;
  std::vector<TrickRecord> tricks_;
  std::vector<RelPlay> played_abs_;  // rel holds the absolute seat here
};

class Player {
 public:
  virtual ~Player() = default;
  virtual void begin_hand(int /*seat*/) {}
  virtual bool decide_knock(const AgentView& view) = 0;
  virtual Card choose_card(const AgentView& view, const std::vector<Card>& legal) = 0;
  virtual void end_hand(const AgentView& /*final_view*/, const SeatResult& /*result*/) {}
};

struct HandRecord {
  HandResult result;
  Deal deal;
  int dealer = 0;
  VoidRule void_rule = VoidRule::kPermissive;
  std::array<Status, kSeats> statuses{};
  std::vector<TrickRecord> tricks;
  std::vector<std::string> log;
};

// Plays one hand. Throws ProtocolViolation when an agent picks a card outside
// its legal set.
HandRecord play_hand(const std::array<Player*, kSeats>& players, const HandConfig& config,
                     std::uint64_t seed);

// Re-runs a logged hand through the rules, checking every decision and the
// logged settlement. Throws RuleError naming the offending line.
HandRecord replay_hand(const std::vector<std::string>& log);

// Invariant violations of a finished hand; empty when sound.
std::vector<std::string> check_hand(const HandRecord& record);

}  // namespace lerpalab::lerpa
