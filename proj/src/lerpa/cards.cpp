#include "lerpalab/lerpa/cards.hpp"

#include <cctype>

namespace lerpalab::lerpa {

std::vector<Card> full_deck() {
  std::vector<Card> deck;
  deck.reserve(kDeckSize);
  for (int i = 0; i < kDeckSize; ++i) deck.push_back(card_at(i));
  return deck;
}

char suit_char(Suit s) { return "cdhs"[static_cast<int>(s)]; }
char rank_char(Rank r) { return "23456JQK7A"[static_cast<int>(r)]; }

Suit parse_suit(std::string_view text) {
  if (text.size() == 1) {
    switch (std::tolower(static_cast<unsigned char>(text[0]))) {
      case 'c': return Suit::kClubs;
      case 'd': return Suit::kDiamonds;
      case 'h': return Suit::kHearts;
      case 's': return Suit::kSpades;
    }
  }
  if (text == "clubs") return Suit::kClubs;
  if (text == "diamonds") return Suit::kDiamonds;
  if (text == "hearts") return Suit::kHearts;
  if (text == "spades") return Suit::kSpades;
  throw CardError("unknown suit '" + std::string(text) + "'");
}

std::string to_string(Suit s) {
  static const char* names[] = {"clubs", "diamonds", "hearts", "spades"};
  return names[static_cast<int>(s)];
}

std::string to_string(Card c) { return {rank_char(c.rank), suit_char(c.suit)}; }

Card parse_card(std::string_view text) {
  if (text.size() != 2) throw CardError("bad card '" + std::string(text) + "'");
  const char r = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  for (Rank rank : kRanks) {
    if (rank_char(rank) == r) return {parse_suit(text.substr(1)), rank};
  }
  throw CardError("bad card rank in '" + std::string(text) + "'");
}

std::vector<Card> parse_cards(std::string_view text) {
  std::vector<Card> out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.push_back(parse_card(token));
    token.clear();
  };
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') flush();
    else token += ch;
  }
  flush();
  return out;
}

std::string join_cards(const std::vector<Card>& cards) {
  std::string out;
  for (const Card& c : cards) {
    if (!out.empty()) out += ' ';
    out += to_string(c);
  }
  return out;
}

bool card_beats(Card challenger, Card incumbent, Suit led, Suit trump) {
  auto tier = [&](Card c) { return c.suit == trump ? 2 : c.suit == led ? 1 : 0; };
  const int a = tier(challenger);
  const int b = tier(incumbent);
  if (a == 0) return false;
  if (a != b) return a > b;
  return ordinal(challenger.rank) > ordinal(incumbent.rank);
}

}  // namespace lerpalab::lerpa
