#include "lerpalab/ttt/oracle.hpp"

#include <unordered_set>

namespace lerpalab::ttt {
namespace {

// Higher is better for the side.
int rank_for(Side side, Outcome o, int plies) {
  if (o == Outcome::kDraw) return 0;
  const bool o_wins = o == Outcome::kOWin;
  return (side == Side::kO) == o_wins ? 100 - plies : plies - 100;
}

}  // namespace

MinimaxOracle::Entry MinimaxOracle::entry(const Board& board) {
  const Outcome w = winner(board);
  if (w != Outcome::kOngoing) return {w, 0};
  const auto key = board.key();
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  const Side side = board.to_move();
  Entry best{Outcome::kOngoing, 0};
  int best_rank = -1000;
  for (int move : legal_moves(board)) {
    const Entry e = entry(board.play(move));
    const int r = rank_for(side, e.value, e.plies + 1);
    if (r > best_rank) {
      best_rank = r;
      best = {e.value, e.plies + 1};
    }
  }
  memo_.emplace(key, best);
  return best;
}

OracleResult MinimaxOracle::solve(const Board& board) {
  OracleResult r;
  const Entry top = entry(board);
  r.value = top.value;
  r.plies = top.plies;
  if (winner(board) != Outcome::kOngoing) return r;
  const Side side = board.to_move();
  const int target = rank_for(side, top.value, top.plies);
  for (int move : legal_moves(board)) {
    const Entry e = entry(board.play(move));
    if (rank_for(side, e.value, e.plies + 1) == target) r.optimal_moves.push_back(move);
  }
  return r;
}

std::vector<Board> reachable_positions() {
  std::vector<Board> out;
  std::unordered_set<std::uint32_t> seen;
  std::vector<Board> frontier{Board{}};
  seen.insert(Board{}.key());
  while (!frontier.empty()) {
    Board b = frontier.back();
    frontier.pop_back();
    out.push_back(b);
    for (int move : legal_moves(b)) {
      Board next = b.play(move);
      if (seen.insert(next.key()).second) frontier.push_back(next);
    }
  }
  return out;
}

}  // namespace lerpalab::ttt
