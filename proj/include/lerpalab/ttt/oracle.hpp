#pragma once

#include <unordered_map>
#include <vector>

#include "lerpalab/ttt/board.hpp"

namespace lerpalab::ttt {

struct OracleResult {
  Outcome value = Outcome::kDraw;  // game-theoretic value under perfect play
  int plies = 0;                   // game length under that play
  std::vector<int> optimal_moves;  // ascending; empty for finished games
};

// Exact minimax over the full game tree, memoized per (cells, side to move).
// Moves are ranked by value first; among equal values a win is better the
// sooner it comes and a loss the later, so a forced loss still has a best
// (delaying) move.
class MinimaxOracle {
 public:
  OracleResult solve(const Board& board);
  Outcome value(const Board& board) { return entry(board).value; }
  // Minimax value of playing `cell` from `board`.
  Outcome value_after(const Board& board, int cell) { return value(board.play(cell)); }

 private:
  struct Entry {
    Outcome value;
    int plies;
  };
  Entry entry(const Board& board);

  std::unordered_map<std::uint32_t, Entry> memo_;
};

// Every position reachable from the empty board with O moving first,
// including finished ones.
std::vector<Board> reachable_positions();

}  // namespace lerpalab::ttt
