#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lerpalab::lerpa {

class CardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Suit : std::uint8_t { kClubs, kDiamonds, kHearts, kSpades };
inline constexpr std::array<Suit, 4> kSuits{Suit::kClubs, Suit::kDiamonds, Suit::kHearts,
                                            Suit::kSpades};

// Declared in playing strength order: 2 lowest, then 7 just under the ace.
enum class Rank : std::uint8_t { k2, k3, k4, k5, k6, kJ, kQ, kK, k7, kA };
inline constexpr std::array<Rank, 10> kRanks{Rank::k2, Rank::k3, Rank::k4, Rank::k5, Rank::k6,
                                             Rank::kJ, Rank::kQ, Rank::kK, Rank::k7, Rank::kA};

// 2 -> 1 ... A -> 10.
inline int ordinal(Rank r) { return static_cast<int>(r) + 1; }

struct Card {
  Suit suit = Suit::kClubs;
  Rank rank = Rank::k2;

  // Canonical order: by suit, then by rank.
  friend auto operator<=>(const Card&, const Card&) = default;
};

inline constexpr int kDeckSize = 40;

// 0..39, suit-major.
inline int index_of(Card c) { return static_cast<int>(c.suit) * 10 + static_cast<int>(c.rank); }
inline Card card_at(int index) {
  return {static_cast<Suit>(index / 10), static_cast<Rank>(index % 10)};
}

std::vector<Card> full_deck();

char suit_char(Suit s);
char rank_char(Rank r);
Suit parse_suit(std::string_view text);
std::string to_string(Card c);
std::string to_string(Suit s);
// "Ad", "7h", "2c"; case-insensitive suit, rank chars 2-7 J Q K A.
Card parse_card(std::string_view text);
// Whitespace- or comma-separated list of cards.
std::vector<Card> parse_cards(std::string_view text);
std::string join_cards(const std::vector<Card>& cards);

inline bool is_trump_ace(Card c, Suit trump) { return c.suit == trump && c.rank == Rank::kA; }

// Whether `challenger` takes the trick from the current `incumbent` winner.
// Trumps beat everything else, led-suit cards beat off-suit discards, and
// within one suit the higher rank wins. An off-suit non-trump never wins.
bool card_beats(Card challenger, Card incumbent, Suit led, Suit trump);

}  // namespace lerpalab::lerpa
