#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lerpalab/lerpa/engine.hpp"

namespace lerpalab::lerpa {

// Suits named by their role in the viewer's hand rather than by label.
// Codes start at 1 so an occupied slot is never all-zero.
enum class SuitClass : std::uint8_t {
  kTrump = 1,
  kMulti,
  kSingletonHigh,
  kSingletonSecond,
  kSingletonThird,
  kVoid,
};

// A played card's rank relative to the viewer's cards of the same suit.
enum class RelativeValue : std::uint8_t {
  kAboveAll = 1,
  kAboveSecond,
  kAboveThird,
  kBelowAll,
  kVoidMember,
  kTrumpAce,
};

std::string to_string(SuitClass c);
std::string to_string(RelativeValue v);

inline constexpr std::size_t kLerpaFeatureCount = 79;
inline constexpr std::size_t kOwnOffset = 0;         // 3 cards x 7 bits
inline constexpr std::size_t kPlayedOffset = 21;     // 8 cards x 6 bits
inline constexpr std::size_t kStatusOffset = 69;     // 3 seats x 2 bits
inline constexpr std::size_t kFirstTrickOffset = 75; // one-hot self/left/across/right
inline constexpr std::size_t kMaxPlayed = 8;

// Class of every suit, indexed by Suit. The trump suit is always kTrump;
// other suits with two or more cards are kMulti; singletons are ranked by
// card rank, equal ranks broken by which suit shows up first in `played`
// (then by whether it shows up at all), which keeps the result independent
// of suit labels wherever the labels could matter.
std::array<SuitClass, 4> classify_suits(const std::vector<Card>& hand, Suit trump,
                                        const std::vector<RelPlay>& played = {});

RelativeValue relative_value(Card card, const AgentView& view);

// 79 binary inputs; multi-bit codes are written most significant bit first.
// Status codes: 00 undecided, 01 knocked, 10 folded.
std::vector<double> encode_view(const AgentView& view);

}  // namespace lerpalab::lerpa
