#include "lerpalab/ttt/testbed.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "lerpalab/random.hpp"
#include "lerpalab/ttt/player.hpp"

namespace lerpalab::ttt {
namespace {

// Number of distinct cells where `mark` would complete a line.
std::size_t open_wins(const std::string& cells, char mark) {
  std::vector<int> found;
  for (const auto& line : kLines) {
    int mine = 0;
    int empty = -1;
    for (int c : line) {
      const char v = cells[static_cast<std::size_t>(c)];
      if (v == mark) ++mine;
      else if (v == '.') empty = c;
    }
    if (mine == 2 && empty >= 0 && std::find(found.begin(), found.end(), empty) == found.end())
      found.push_back(empty);
  }
  return found.size();
}

// Moves after which `side` threatens two lines at once.
std::vector<int> fork_moves(const Board& board, Side side) {
  const std::string cells = board.to_string();
  std::vector<int> forks;
  for (int c = 0; c < kCells; ++c) {
    if (board.at(c) != Cell::kEmpty) continue;
    std::string next = cells;
    next[static_cast<std::size_t>(c)] = side_char(side);
    if (open_wins(next, side_char(side)) >= 2) forks.push_back(c);
  }
  return forks;
}

std::uint32_t canonical_key(const Board& board) {
  std::uint32_t best = board.key();
  for (const auto& perm : symmetries()) best = std::min(best, transform(board, perm).key());
  return best;
}

std::string describe(PositionKind kind, Side side) {
  return to_string(kind) + " for " + std::string(1, side_char(side));
}

}  // namespace

std::string to_string(PositionKind kind) {
  switch (kind) {
    case PositionKind::kImmediateWin: return "immediate win";
    case PositionKind::kForcedBlock: return "forced block";
    case PositionKind::kForkCreation: return "fork creation";
    case PositionKind::kForkBlock: return "fork block";
  }
  return "?";
}

std::optional<Classification> classify_position(const Board& board, MinimaxOracle& oracle) {
  if (winner(board) != Outcome::kOngoing) return std::nullopt;
  const Side side = board.to_move();
  const auto legal = legal_moves(board);
  const auto solved = oracle.solve(board);
  if (solved.optimal_moves.size() == legal.size()) return std::nullopt;

  Classification c{};
  const auto wins = winning_cells(board, side);
  const auto threats = winning_cells(board, opponent(side));
  if (!wins.empty()) {
    c = {PositionKind::kImmediateWin, wins};
  } else if (threats.size() == 1) {
    c = {PositionKind::kForcedBlock, threats};
  } else if (threats.empty()) {
    if (auto forks = fork_moves(board, side); !forks.empty()) {
      c = {PositionKind::kForkCreation, forks};
    } else if (!fork_moves(board, opponent(side)).empty()) {
      c = {PositionKind::kForkBlock, solved.optimal_moves};
    } else {
      return std::nullopt;
    }
  } else {
    return std::nullopt;
  }
  if (c.correct_moves != solved.optimal_moves) return std::nullopt;
  return c;
}

bool verify_position(const TestPosition& position, MinimaxOracle& oracle) {
  if (position.correct_moves.empty()) return false;
  const auto solved = oracle.solve(position.board);
  auto correct = position.correct_moves;
  std::sort(correct.begin(), correct.end());
  return correct == solved.optimal_moves &&
         solved.optimal_moves.size() < legal_moves(position.board).size();
}

std::vector<TestPosition> make_testbed(std::uint64_t seed, TestbedOptions options) {
  MinimaxOracle oracle;
  std::map<PositionKind, std::map<std::uint32_t, TestPosition>> buckets;
  for (const Board& b : reachable_positions()) {
    if (b.empty_count() < options.min_empty) continue;
    auto c = classify_position(b, oracle);
    if (!c) continue;
    auto& bucket = buckets[c->kind];
    const auto key = canonical_key(b);
    if (bucket.contains(key)) continue;
    bucket.emplace(key, TestPosition{b, c->correct_moves, describe(c->kind, b.to_move())});
  }

  const std::pair<PositionKind, int> wanted[] = {{PositionKind::kImmediateWin, 3},
                                                 {PositionKind::kForcedBlock, 3},
                                                 {PositionKind::kForkCreation, 2},
                                                 {PositionKind::kForkBlock, 2}};
  Rng rng(seed);
  std::vector<TestPosition> testbed;
  for (const auto& [kind, count] : wanted) {
    std::vector<TestPosition> pool;
    for (auto& [key, pos] : buckets[kind]) pool.push_back(pos);
    if (pool.size() < static_cast<std::size_t>(count)) {
      throw std::runtime_error("not enough " + to_string(kind) + " positions for the testbed");
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int i = 0; i < count; ++i) {
      if (!verify_position(pool[static_cast<std::size_t>(i)], oracle)) {
        throw std::runtime_error("testbed position failed oracle verification");
      }
      testbed.push_back(pool[static_cast<std::size_t>(i)]);
    }
  }
  return testbed;
}

std::string serialize_testbed(std::span<const TestPosition> testbed) {
  std::string out;
  for (const auto& p : testbed) {
    out += p.board.to_string();
    out += ' ';
    out += side_char(p.board.to_move());
    out += ' ';
    for (std::size_t i = 0; i < p.correct_moves.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(p.correct_moves[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<TestPosition> parse_testbed(std::string_view text) {
  std::vector<TestPosition> out;
  MinimaxOracle oracle;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string cells, side, moves;
    if (!(fields >> cells >> side >> moves)) {
      throw InvalidBoard("testbed line " + std::to_string(line_no) + ": expected 3 fields");
    }
    TestPosition p;
    p.board = Board::from_string(cells, parse_side(side));
    std::istringstream list(moves);
    std::string item;
    while (std::getline(list, item, ',')) {
      try {
        p.correct_moves.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw InvalidBoard("testbed line " + std::to_string(line_no) + ": bad cell '" + item + "'");
      }
    }
    std::sort(p.correct_moves.begin(), p.correct_moves.end());
    auto c = classify_position(p.board, oracle);
    p.description = c ? describe(c->kind, p.board.to_move()) : "unclassified";
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<TestPosition> load_testbed(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open testbed '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_testbed(ss.str());
}

void save_testbed(std::span<const TestPosition> testbed, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write testbed '" + path.string() + "'");
  out << serialize_testbed(testbed);
}

std::vector<bool> evaluate_positions(const net::Network& net,
                                     std::span<const TestPosition> testbed) {
  Rng unused(0);
  std::vector<bool> ok;
  ok.reserve(testbed.size());
  for (const auto& p : testbed) {
    const int move = select_move(net, p.board, 0.0, unused);
    ok.push_back(std::find(p.correct_moves.begin(), p.correct_moves.end(), move) !=
                 p.correct_moves.end());
  }
  return ok;
}

int evaluate_policy(const Policy& policy, std::span<const TestPosition> testbed) {
  Rng rng(0);
  int score = 0;
  for (const auto& p : testbed) {
    const int move = policy(p.board, rng);
    if (std::find(p.correct_moves.begin(), p.correct_moves.end(), move) != p.correct_moves.end())
      ++score;
  }
  return score;
}

int evaluate_player(const net::Network& net, std::span<const TestPosition> testbed) {
  auto ok = evaluate_positions(net, testbed);
  return static_cast<int>(std::count(ok.begin(), ok.end(), true));
}

}  // namespace lerpalab::ttt
