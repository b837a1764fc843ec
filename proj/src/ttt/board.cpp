#include "lerpalab/ttt/board.hpp"

#include <algorithm>

namespace lerpalab::ttt {

char side_char(Side s) { return s == Side::kO ? 'O' : 'X'; }

Side parse_side(std::string_view text) {
  if (text == "O" || text == "o") return Side::kO;
  if (text == "X" || text == "x") return Side::kX;
  throw InvalidBoard("side must be O or X, got '" + std::string(text) + "'");
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kOWin: return "o_win";
    case Outcome::kDraw: return "draw";
    case Outcome::kXWin: return "x_win";
    case Outcome::kOngoing: return "ongoing";
  }
  return "?";
}

Board Board::from_string(std::string_view cells) {
  const auto o = std::count_if(cells.begin(), cells.end(), [](char c) { return c == 'O' || c == 'o'; });
  const auto x = std::count_if(cells.begin(), cells.end(), [](char c) { return c == 'X' || c == 'x'; });
  return from_string(cells, o > x ? Side::kX : Side::kO);
}

Board Board::from_string(std::string_view cells, Side to_move) {
  if (cells.size() != kCells) throw InvalidBoard("board string must have 9 cells");
  Board b;
  for (std::size_t i = 0; i < kCells; ++i) {
    switch (cells[i]) {
      case '.': b.cells_[i] = Cell::kEmpty; break;
      case 'O': case 'o': b.cells_[i] = Cell::kO; break;
      case 'X': case 'x': b.cells_[i] = Cell::kX; break;
      default: throw InvalidBoard("bad board character '" + std::string(1, cells[i]) + "'");
    }
  }
  b.to_move_ = to_move;
  if (!b.is_well_formed()) throw InvalidBoard("inconsistent mark counts in " + std::string(cells));
  return b;
}

int Board::count(Cell c) const {
  return static_cast<int>(std::count(cells_.begin(), cells_.end(), c));
}

Board Board::play(int cell) const {
  if (cell < 0 || cell >= kCells || at(cell) != Cell::kEmpty)
    throw InvalidBoard("move to occupied or missing cell " + std::to_string(cell));
  Board next = *this;
  next.cells_[static_cast<std::size_t>(cell)] = mark_of(to_move_);
  next.to_move_ = opponent(to_move_);
  return next;
}

bool Board::is_well_formed() const {
  const int o = count(Cell::kO);
  const int x = count(Cell::kX);
  if (o - x > 1 || x - o > 1) return false;
  if (o > x && to_move_ != Side::kX) return false;
  if (x > o && to_move_ != Side::kO) return false;
  return true;
}

std::string Board::to_string() const {
  std::string s(kCells, '.');
  for (std::size_t i = 0; i < kCells; ++i) {
    if (cells_[i] == Cell::kO) s[i] = 'O';
    if (cells_[i] == Cell::kX) s[i] = 'X';
  }
  return s;
}

std::uint32_t Board::key() const {
  std::uint32_t k = 0;
  for (Cell c : cells_) k = k * 3 + static_cast<std::uint32_t>(c);
  return k * 2 + (to_move_ == Side::kX ? 1 : 0);
}

namespace {

bool has_line(const Board& b, Cell mark) {
  return std::any_of(kLines.begin(), kLines.end(), [&](const auto& line) {
    return b.at(line[0]) == mark && b.at(line[1]) == mark && b.at(line[2]) == mark;
  });
}

}  // namespace

Outcome winner(const Board& board) {
  const bool o = has_line(board, Cell::kO);
  const bool x = has_line(board, Cell::kX);
  if (o && x) throw InvalidBoard("both sides have a line: " + board.to_string());
  if (o) return Outcome::kOWin;
  if (x) return Outcome::kXWin;
  return board.empty_count() == 0 ? Outcome::kDraw : Outcome::kOngoing;
}

std::vector<int> legal_moves(const Board& board) {
  std::vector<int> moves;
  if (winner(board) != Outcome::kOngoing) return moves;
  for (int i = 0; i < kCells; ++i) {
    if (board.at(i) == Cell::kEmpty) moves.push_back(i);
  }
  return moves;
}

std::vector<double> encode(const Board& board) {
  std::vector<double> bits(kFeatureCount, 0.0);
  for (int i = 0; i < kCells; ++i) {
    if (board.at(i) == Cell::kO) bits[static_cast<std::size_t>(i)] = 1.0;
    if (board.at(i) == Cell::kX) bits[static_cast<std::size_t>(9 + i)] = 1.0;
  }
  return bits;
}

Board decode(std::span<const double> features) {
  if (features.size() != kFeatureCount) throw InvalidBoard("feature vector must have 18 bits");
  std::string cells(kCells, '.');
  for (std::size_t i = 0; i < kCells; ++i) {
    const bool o = features[i] != 0.0;
    const bool x = features[9 + i] != 0.0;
    if (o && x) throw InvalidBoard("cell holds both marks");
    if (o) cells[i] = 'O';
    if (x) cells[i] = 'X';
  }
  return Board::from_string(cells);
}

std::vector<double> outcome_target(Outcome outcome) {
  switch (outcome) {
    case Outcome::kOWin: return {1.0, 0.0, 0.0};
    case Outcome::kDraw: return {0.0, 1.0, 0.0};
    case Outcome::kXWin: return {0.0, 0.0, 1.0};
    case Outcome::kOngoing: break;
  }
  throw InvalidBoard("no target for an unfinished game");
}

std::vector<int> winning_cells(const Board& board, Side side) {
  const Cell mark = mark_of(side);
  std::vector<int> cells;
  for (const auto& line : kLines) {
    int mine = 0;
    int empty = -1;
    for (int c : line) {
      if (board.at(c) == mark) ++mine;
      else if (board.at(c) == Cell::kEmpty) empty = c;
    }
    if (mine == 2 && empty >= 0) cells.push_back(empty);
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

const std::array<std::array<int, kCells>, 8>& symmetries() {
  static const auto perms = [] {
    std::array<std::array<int, kCells>, 8> out{};
    // rot maps (r, c) -> (c, 2 - r); mirror maps (r, c) -> (r, 2 - c).
    auto rot = [](int i) { return (i % 3) * 3 + (2 - i / 3); };
    auto mirror = [](int i) { return (i / 3) * 3 + (2 - i % 3); };
    for (int s = 0; s < 8; ++s) {
      for (int i = 0; i < kCells; ++i) {
        int j = s >= 4 ? mirror(i) : i;
        for (int r = 0; r < s % 4; ++r) j = rot(j);
        out[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] = j;
      }
    }
    return out;
  }();
  return perms;
}

Board transform(const Board& board, const std::array<int, kCells>& perm) {
  std::string src = board.to_string();
  std::string dst(kCells, '.');
  for (std::size_t i = 0; i < kCells; ++i) dst[static_cast<std::size_t>(perm[i])] = src[i];
  return Board::from_string(dst, board.to_move());
}

}  // namespace lerpalab::ttt
