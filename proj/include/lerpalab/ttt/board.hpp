#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lerpalab::ttt {

class InvalidBoard : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Cell : std::uint8_t { kEmpty, kO, kX };
enum class Side : std::uint8_t { kO, kX };
enum class Outcome : std::uint8_t { kOWin, kDraw, kXWin, kOngoing };

inline constexpr int kCells = 9;
inline constexpr std::size_t kFeatureCount = 18;
inline constexpr std::size_t kTargetCount = 3;  // [o_win, draw, x_win]

inline Side opponent(Side s) { return s == Side::kO ? Side::kX : Side::kO; }
inline Cell mark_of(Side s) { return s == Side::kO ? Cell::kO : Cell::kX; }
// Index of the side's win in the [o_win, draw, x_win] target layout.
inline std::size_t win_index(Side s) { return s == Side::kO ? 0 : 2; }

char side_char(Side s);
Side parse_side(std::string_view text);
std::string to_string(Outcome o);

class Board {
 public:
  Board() = default;

  // Parses a 9-character ".OX" string (row-major). When to_move is omitted it
  // is inferred from the mark counts, O moving first.
  static Board from_string(std::string_view cells);
  static Board from_string(std::string_view cells, Side to_move);

  Cell at(int i) const { return cells_[static_cast<std::size_t>(i)]; }
  Side to_move() const { return to_move_; }
  int count(Cell c) const;
  int empty_count() const { return count(Cell::kEmpty); }

  // Places the mover's mark on an empty cell and passes the turn.
  Board play(int cell) const;

  // Mark counts differ by at most one and the side to move is not ahead.
  bool is_well_formed() const;

  std::string to_string() const;
  // Base-3 cell code plus a side bit; unique per (cells, to_move).
  std::uint32_t key() const;

  friend bool operator==(const Board&, const Board&) = default;

 private:
  std::array<Cell, kCells> cells_{};
  Side to_move_ = Side::kO;
};

// The eight lines of three.
inline constexpr std::array<std::array<int, 3>, 8> kLines{{
    {0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}}};

// Throws InvalidBoard when both sides have a line.
Outcome winner(const Board& board);

// Empty cells in ascending order; empty when the game is over.
std::vector<int> legal_moves(const Board& board);

// Bit i set iff cell i holds O; bit 9+i set iff cell i holds X.
std::vector<double> encode(const Board& board);
// Inverse of encode; the side to move is inferred from the mark counts.
Board decode(std::span<const double> features);

// One-hot [o_win, draw, x_win] for a finished game.
std::vector<double> outcome_target(Outcome outcome);

// Cells the side could fill to complete a line right now.
std::vector<int> winning_cells(const Board& board, Side side);

// The eight symmetries of the square, as cell permutations.
const std::array<std::array<int, kCells>, 8>& symmetries();
Board transform(const Board& board, const std::array<int, kCells>& perm);

}  // namespace lerpalab::ttt
