#include "lerpalab/lerpa/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace lerpalab::lerpa {

std::string to_string(SuitClass c) {
  switch (c) {
    case SuitClass::kTrump: return "trump";
    case SuitClass::kMulti: return "multi";
    case SuitClass::kSingletonHigh: return "singleton_high";
    case SuitClass::kSingletonSecond: return "singleton_second";
    case SuitClass::kSingletonThird: return "singleton_third";
    case SuitClass::kVoid: return "void";
  }
  return "?";
}

std::string to_string(RelativeValue v) {
  switch (v) {
    case RelativeValue::kAboveAll: return "above_all";
    case RelativeValue::kAboveSecond: return "above_second";
    case RelativeValue::kAboveThird: return "above_third";
    case RelativeValue::kBelowAll: return "below_all";
    case RelativeValue::kVoidMember: return "void_member";
    case RelativeValue::kTrumpAce: return "trump_ace";
  }
  return "?";
}

std::array<SuitClass, 4> classify_suits(const std::vector<Card>& hand, Suit trump,
                                        const std::vector<RelPlay>& played) {
  std::array<int, 4> held{};
  std::array<int, 4> top{};
  for (Card c : hand) {
    const auto s = static_cast<std::size_t>(c.suit);
    ++held[s];
    top[s] = std::max(top[s], ordinal(c.rank));
  }
  std::array<std::size_t, 4> first_seen;
  first_seen.fill(kMaxPlayed * 2);
  for (std::size_t i = played.size(); i-- > 0;) first_seen[static_cast<std::size_t>(played[i].card.suit)] = i;

  std::array<SuitClass, 4> out;
  out.fill(SuitClass::kVoid);
  std::vector<Suit> singles;
  for (Suit s : kSuits) {
    const auto i = static_cast<std::size_t>(s);
    if (s == trump) out[i] = SuitClass::kTrump;
    else if (held[i] >= 2) out[i] = SuitClass::kMulti;
    else if (held[i] == 1) singles.push_back(s);
  }
  std::stable_sort(singles.begin(), singles.end(), [&](Suit a, Suit b) {
    const auto ia = static_cast<std::size_t>(a);
    const auto ib = static_cast<std::size_t>(b);
    if (top[ia] != top[ib]) return top[ia] > top[ib];
    return first_seen[ia] < first_seen[ib];
  });
  static constexpr SuitClass ranks[] = {SuitClass::kSingletonHigh, SuitClass::kSingletonSecond,
                                        SuitClass::kSingletonThird};
  for (std::size_t k = 0; k < singles.size(); ++k) out[static_cast<std::size_t>(singles[k])] = ranks[k];
  return out;
}

RelativeValue relative_value(Card card, const AgentView& view) {
  if (is_trump_ace(card, view.trump)) return RelativeValue::kTrumpAce;
  std::vector<int> same;
  for (Card c : view.own_cards) {
    if (c.suit == card.suit) same.push_back(ordinal(c.rank));
  }
  if (same.empty()) return RelativeValue::kVoidMember;
  std::sort(same.rbegin(), same.rend());
  const int r = ordinal(card.rank);
  if (r > same[0]) return RelativeValue::kAboveAll;
  if (same.size() > 1 && r > same[1]) return RelativeValue::kAboveSecond;
  if (same.size() > 2 && r > same[2]) return RelativeValue::kAboveThird;
  return RelativeValue::kBelowAll;
}

namespace {

void put_bits(std::vector<double>& bits, std::size_t offset, unsigned value, int width) {
  for (int b = 0; b < width; ++b) {
    bits[offset + static_cast<std::size_t>(b)] = (value >> (width - 1 - b)) & 1u ? 1.0 : 0.0;
  }
}

unsigned status_code(Status s) {
  switch (s) {
    case Status::kUndecided: return 0;
    case Status::kKnocked: return 1;
    case Status::kFolded: return 2;
  }
  return 0;
}

}  // namespace

std::vector<double> encode_view(const AgentView& view) {
  if (view.played.size() > kMaxPlayed) throw std::invalid_argument("more than 8 played cards to encode");
  if (view.own_cards.size() > kHandSize) throw std::invalid_argument("more than 3 own cards to encode");
  std::vector<double> bits(kLerpaFeatureCount, 0.0);
  const auto classes = classify_suits(view.own_cards, view.trump, view.played);
  auto class_of = [&](Card c) { return static_cast<unsigned>(classes[static_cast<std::size_t>(c.suit)]); };

  std::vector<std::pair<unsigned, unsigned>> own;
  for (Card c : view.own_cards) own.emplace_back(class_of(c), static_cast<unsigned>(ordinal(c.rank)));
  std::sort(own.begin(), own.end());
  for (std::size_t i = 0; i < own.size(); ++i) {
    put_bits(bits, kOwnOffset + 7 * i, own[i].first, 3);
    put_bits(bits, kOwnOffset + 7 * i + 3, own[i].second, 4);
  }

  for (std::size_t i = 0; i < view.played.size(); ++i) {
    const Card c = view.played[i].card;
    put_bits(bits, kPlayedOffset + 6 * i, class_of(c), 3);
    put_bits(bits, kPlayedOffset + 6 * i + 3, static_cast<unsigned>(relative_value(c, view)), 3);
  }

  for (std::size_t r = 0; r < 3; ++r) put_bits(bits, kStatusOffset + 2 * r, status_code(view.statuses[r]), 2);
  if (view.first_trick_winner) {
    const int w = *view.first_trick_winner;
    if (w < 0 || w > 3) throw std::invalid_argument("first trick winner must be a relative seat 0..3");
    bits[kFirstTrickOffset + static_cast<std::size_t>(w)] = 1.0;
  }
  return bits;
}

}  // namespace lerpalab::lerpa
