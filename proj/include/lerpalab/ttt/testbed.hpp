#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lerpalab/net/network.hpp"
#include "lerpalab/ttt/board.hpp"
#include "lerpalab/ttt/oracle.hpp"
#include "lerpalab/ttt/player.hpp"

namespace lerpalab::ttt {

enum class PositionKind { kImmediateWin, kForcedBlock, kForkCreation, kForkBlock };

std::string to_string(PositionKind kind);

struct TestPosition {
  Board board;
  std::vector<int> correct_moves;  // ascending
  std::string description;
};

// Classifies a position for the side to move. Returns the kind and its
// correct moves only when those moves are exactly the minimax-optimal set and
// at least one legal move is strictly worse.
struct Classification {
  PositionKind kind;
  std::vector<int> correct_moves;
};
std::optional<Classification> classify_position(const Board& board, MinimaxOracle& oracle);

// Every correct move is optimal, every other legal move strictly worse.
bool verify_position(const TestPosition& position, MinimaxOracle& oracle);

struct TestbedOptions {
  int min_empty = 5;  // skip near-finished positions
};

// Ten positions: 3 immediate wins, 3 forced blocks, 2 fork creations and
// 2 fork blocks, distinct up to symmetry, drawn from the reachable positions.
std::vector<TestPosition> make_testbed(std::uint64_t seed, TestbedOptions options = {});

// One position per line: "<9 cells> <side to move> <c1,c2,...>".
std::string serialize_testbed(std::span<const TestPosition> testbed);
std::vector<TestPosition> parse_testbed(std::string_view text);
std::vector<TestPosition> load_testbed(const std::filesystem::path& path);
void save_testbed(std::span<const TestPosition> testbed, const std::filesystem::path& path);

// Number of positions where the greedy move is one of the correct moves.
int evaluate_player(const net::Network& net, std::span<const TestPosition> testbed);

// Same scoring for an arbitrary move policy.
int evaluate_policy(const Policy& policy, std::span<const TestPosition> testbed);

// Per-position result of the greedy move, for reporting.
std::vector<bool> evaluate_positions(const net::Network& net, std::span<const TestPosition> testbed);

}  // namespace lerpalab::ttt
