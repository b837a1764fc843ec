#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "lerpalab/random.hpp"
#include "lerpalab/ttt/board.hpp"
#include "lerpalab/ttt/experience_db.hpp"
#include "lerpalab/ttt/oracle.hpp"
#include "lerpalab/ttt/player.hpp"
#include "lerpalab/ttt/testbed.hpp"

using namespace lerpalab;
using namespace lerpalab::ttt;

namespace {

// Independent line check on raw strings.
char line_winner(const std::string& s) {
  static const int lines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                                  {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
  char found = 0;
  for (const auto& l : lines) {
    if (s[l[0]] != '.' && s[l[0]] == s[l[1]] && s[l[1]] == s[l[2]]) found = s[l[0]];
  }
  return found;
}

// Exact outcome probabilities of uniformly random play from `s`, O to move
// when the counts are equal.
std::array<double, 3> random_play_odds(std::string s) {
  const char w = line_winner(s);
  if (w == 'O') return {1, 0, 0};
  if (w == 'X') return {0, 0, 1};
  const auto empties = std::count(s.begin(), s.end(), '.');
  if (empties == 0) return {0, 1, 0};
  const char mover = empties % 2 == 1 ? 'O' : 'X';
  std::array<double, 3> acc{};
  for (std::size_t i = 0; i < 9; ++i) {
    if (s[i] != '.') continue;
    s[i] = mover;
    auto sub = random_play_odds(s);
    s[i] = '.';
    for (int k = 0; k < 3; ++k) acc[k] += sub[k] / static_cast<double>(empties);
  }
  return acc;
}

net::Network zero_net() {
  auto n = initial_network(1, 4);
  n.hidden_weights.fill(0.0);
  n.output_weights.fill(0.0);
  return n;
}

std::vector<double> features_of(const char* cells) { return encode(Board::from_string(cells)); }

}  // namespace

TEST_CASE("board encoding") {
  auto x_centre = encode(Board::from_string("....X....", Side::kO));
  for (std::size_t i = 0; i < kFeatureCount; ++i) CHECK(x_centre[i] == (i == 13 ? 1.0 : 0.0));
  auto o_corner = features_of("O........");
  CHECK(o_corner[0] == 1.0);
  CHECK(std::count(o_corner.begin(), o_corner.end(), 1.0) == 1);
  CHECK(encode(Board{}) == std::vector<double>(18, 0.0));
}

TEST_CASE("board strings and moves") {
  Board b;
  CHECK(b.to_move() == Side::kO);
  b = b.play(4);
  CHECK(b.to_string() == "....O....");
  CHECK(b.to_move() == Side::kX);
  CHECK_THROWS_AS(b.play(4), InvalidBoard);
  CHECK_THROWS_AS(b.play(9), InvalidBoard);
  CHECK_THROWS_AS(Board::from_string("OO......."), InvalidBoard);
  CHECK_THROWS_AS(Board::from_string("O.......", Side::kX), InvalidBoard);
  CHECK_THROWS_AS(Board::from_string("O.......Z"), InvalidBoard);
  CHECK_THROWS_AS(Board::from_string("O........", Side::kO), InvalidBoard);
  CHECK(Board::from_string("XX.OO....", Side::kX).to_move() == Side::kX);
  CHECK(legal_moves(Board::from_string("OX.OX.O..")).empty());
  CHECK(legal_moves(Board::from_string("OX.......")) == std::vector<int>{2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("reachable positions: count, decode bijection, winner oracle") {
  const auto all = reachable_positions();
  CHECK(all.size() == 5478);
  std::set<std::string> seen;
  for (const Board& b : all) {
    const std::string s = b.to_string();
    seen.insert(s);
    CHECK(decode(encode(b)) == b);

    const char w = line_winner(s);
    const Outcome got = winner(b);
    if (w == 'O') CHECK(got == Outcome::kOWin);
    else if (w == 'X') CHECK(got == Outcome::kXWin);
    else if (s.find('.') == std::string::npos) CHECK(got == Outcome::kDraw);
    else CHECK(got == Outcome::kOngoing);
    if (got != Outcome::kOngoing) CHECK(legal_moves(b).empty());
  }
  CHECK(seen.size() == all.size());
}

TEST_CASE("decode rejects malformed features") {
  std::vector<double> both(18, 0.0);
  both[0] = both[9] = 1.0;
  CHECK_THROWS_AS(decode(both), InvalidBoard);
  CHECK_THROWS_AS(decode(std::vector<double>(17, 0.0)), InvalidBoard);
}

TEST_CASE("winner on specific boards") {
  CHECK(winner(Board::from_string("OXOXXOOOX")) == Outcome::kDraw);
  CHECK(winner(Board::from_string("OOOXX....")) == Outcome::kOWin);
  CHECK(winner(Board::from_string("XXXOO.O..", Side::kO)) == Outcome::kXWin);
  CHECK(outcome_target(Outcome::kDraw) == std::vector<double>{0, 1, 0});
  CHECK_THROWS_AS(outcome_target(Outcome::kOngoing), InvalidBoard);
}

TEST_CASE("symmetries are the dihedral group") {
  const auto& perms = symmetries();
  std::set<std::array<int, 9>> distinct(perms.begin(), perms.end());
  CHECK(distinct.size() == 8);
  const Board b = Board::from_string("OX..O...X");
  for (const auto& p : perms) {
    Board t = transform(b, p);
    CHECK(t.count(Cell::kO) == 2);
    CHECK(winner(t) == winner(b));
  }
}

TEST_CASE("select_move: greedy over resultant positions") {
  Rng rng(3);
  auto net = zero_net();
  // Zero weights score every resultant equally; the lowest cell wins the tie.
  CHECK(select_move(net, Board{}, 0.0, rng) == 0);
  CHECK(select_move(net, Board::from_string("O........"), 0.0, rng) == 1);

  // Output bias favours o_win and a hidden unit lights up on O in cell 7.
  net.output_weights(0, 0) = 5.0;
  net.hidden_weights(0, 7) = 10.0;
  net.hidden_weights(0, net.n_in) = -5.0;
  CHECK(select_move(net, Board{}, 0.0, rng) == 7);
  // No X move touches the weighted unit, so X falls back to the lowest cell.
  CHECK(select_move(net, Board::from_string("O........"), 0.0, rng) == 1);

  auto cache = choose_move(net, Board{}, 0.0, rng).resultant;
  CHECK(cache.outputs.size() == 3);
}

TEST_CASE("select_move explores uniformly at epsilon 1") {
  Rng rng(11);
  auto net = zero_net();
  const Board b = Board::from_string("O...X....");
  const auto legal = legal_moves(b);
  std::map<int, int> counts;
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[select_move(net, b, 1.0, rng)];
  double chi2 = 0.0;
  const double expect = static_cast<double>(n) / static_cast<double>(legal.size());
  for (int m : legal) chi2 += std::pow(counts[m] - expect, 2) / expect;
  CHECK(counts.size() == legal.size());
  // 6 degrees of freedom, p = 0.001 critical value.
  CHECK(chi2 < 22.46);
}

TEST_CASE("random self-play matches exact outcome odds") {
  const auto odds = random_play_odds(std::string(9, '.'));
  CHECK(odds[1] == doctest::Approx(0.127).epsilon(0.01));
  Rng rng(99);
  const auto policy = random_policy();
  std::array<int, 3> tally{};
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    auto t = self_play_game(policy, rng);
    CHECK(t.moves() >= 5);
    CHECK(t.moves() <= 9);
    CHECK(t.boards.front() == Board{});
    ++tally[static_cast<std::size_t>(t.result)];
  }
  for (int k = 0; k < 3; ++k) CHECK(std::abs(tally[k] / double(n) - odds[k]) < 0.02);
}

TEST_CASE("minimax oracle") {
  MinimaxOracle oracle;
  CHECK(oracle.value(Board{}) == Outcome::kDraw);
  CHECK(oracle.solve(Board{}).optimal_moves.size() == 9);

  // X completes a fork: only the fork move wins.
  const Board fork = Board::from_string("..X..OOXO", Side::kX);
  auto r = oracle.solve(fork);
  CHECK(r.value == Outcome::kXWin);
  CHECK(r.optimal_moves == std::vector<int>{1});

  const Board win = Board::from_string("OO.X..X..", Side::kO);
  CHECK(oracle.value(win) == Outcome::kOWin);
  CHECK(oracle.value_after(win, 2) == Outcome::kOWin);

  // Values are invariant under every symmetry.
  int checked = 0;
  for (const Board& b : reachable_positions()) {
    if (++checked % 7) continue;
    for (const auto& p : symmetries()) CHECK(oracle.value(transform(b, p)) == oracle.value(b));
  }
}

TEST_CASE("testbed classification examples") {
  MinimaxOracle oracle;
  auto win = classify_position(Board::from_string("XX.OO....", Side::kX), oracle);
  REQUIRE(win);
  CHECK(win->kind == PositionKind::kImmediateWin);
  CHECK(win->correct_moves == std::vector<int>{2});

  auto must_block = classify_position(Board::from_string("OO.X..X..", Side::kX), oracle);
  REQUIRE(must_block);
  CHECK(must_block->kind == PositionKind::kForcedBlock);
  CHECK(must_block->correct_moves == std::vector<int>{2});

  // A position where every move draws is not a test position.
  CHECK_FALSE(classify_position(Board{}, oracle));
}

TEST_CASE("make_testbed is seeded, balanced and oracle-verified") {
  const auto a = make_testbed(2);
  const auto b = make_testbed(2);
  REQUIRE(a.size() == 10);
  CHECK(serialize_testbed(a) == serialize_testbed(b));
  MinimaxOracle oracle;
  std::map<PositionKind, int> kinds;
  std::set<std::string> canon;
  for (const auto& p : a) {
    CHECK(verify_position(p, oracle));
    CHECK(p.board.empty_count() >= 5);
    auto c = classify_position(p.board, oracle);
    REQUIRE(c);
    ++kinds[c->kind];
    std::string best = "~";
    for (const auto& perm : symmetries()) best = std::min(best, transform(p.board, perm).to_string());
    canon.insert(best);
  }
  CHECK(kinds[PositionKind::kImmediateWin] == 3);
  CHECK(kinds[PositionKind::kForcedBlock] == 3);
  CHECK(kinds[PositionKind::kForkCreation] == 2);
  CHECK(kinds[PositionKind::kForkBlock] == 2);
  CHECK(canon.size() == 10);

  const auto round = parse_testbed(serialize_testbed(a));
  REQUIRE(round.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(round[i].board == a[i].board);
    CHECK(round[i].correct_moves == a[i].correct_moves);
  }
  CHECK_THROWS_AS(parse_testbed("XX.OO.... X"), InvalidBoard);
  CHECK_THROWS_AS(parse_testbed("XX.OO.... X two"), InvalidBoard);
}

TEST_CASE("fixture testbed verifies against the oracle") {
  const auto fixture = load_testbed(std::string(LERPALAB_DATA_DIR) + "/ttt_testbed.txt");
  REQUIRE(fixture.size() == 10);
  MinimaxOracle oracle;
  for (const auto& p : fixture) CHECK_MESSAGE(verify_position(p, oracle), p.board.to_string());
}

TEST_CASE("evaluate_player counts correct greedy moves") {
  const auto tb = make_testbed(2);
  auto net = zero_net();
  Rng rng(0);
  int expect = 0;
  for (const auto& p : tb) {
    const int m = select_move(net, p.board, 0.0, rng);
    expect += std::count(p.correct_moves.begin(), p.correct_moves.end(), m) > 0;
  }
  CHECK(evaluate_player(net, tb) == expect);
  CHECK(evaluate_policy(network_policy(net, 0.0), tb) == expect);

  // A perfect policy scores ten.
  MinimaxOracle oracle;
  Policy perfect = [&](const Board& b, Rng&) { return oracle.solve(b).optimal_moves.front(); };
  CHECK(evaluate_policy(perfect, tb) == 10);
}

TEST_CASE("ExperienceDB invariants") {
  ExperienceDB db(3);
  CHECK_THROWS(ExperienceDB(0));
  db.insert(features_of("O........"), {1, 0, 0});
  db.insert(features_of(".O......."), {0, 1, 0});
  db.insert(features_of("O........"), {0, 0, 1}, true);
  CHECK(db.size() == 2);
  CHECK(db.entries().back().target == std::vector<double>{0, 0, 1});
  CHECK(db.fact_count() == 1);
  db.insert(features_of("..O......"), {0, 1, 0});
  db.insert(features_of("...O....."), {0, 1, 0});
  CHECK(db.size() == 3);
  // The oldest entry (".O.......") was evicted.
  CHECK(db.entries().front().features == features_of("O........"));

  Rng rng(5);
  ExperienceDB big(50);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> f(18, 0.0);
    f[uniform_index(rng, 18)] = 1.0;
    f[uniform_index(rng, 18)] = 1.0;
    big.insert(f, {uniform_unit(rng), 0, 0});
    CHECK(big.size() <= 50);
  }
  std::set<std::vector<double>> keys;
  for (const auto& e : big.entries()) keys.insert(e.features);
  CHECK(keys.size() == big.size());
}

TEST_CASE("FactOpinionDB batch weights follow the fact share") {
  FactOpinionDB db(4, 16);
  db.facts.insert(features_of("OOOXX...."), {1, 0, 0}, true);
  for (const char* s : {"O........", ".O.......", "..O......", "...O....."}) db.opinions.insert(features_of(s), {0.3, 0.4, 0.3});
  const auto batch = db.batch(0.2);
  REQUIRE(batch.size() == 5);
  double facts = 0.0, total = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    total += batch[i].weight;
    if (i == 0) facts += batch[i].weight;
  }
  CHECK(facts / total == doctest::Approx(0.2));
  CHECK(total == doctest::Approx(5.0));
}

TEST_CASE("train_player: zero games returns the initial network") {
  TrainingConfig c;
  c.regime = Regime::kHybrid;
  c.games = 0;
  c.seed = 17;
  CHECK(train_player(c).net == initial_network(17));
}

TEST_CASE("train_player: one td game makes one update per move") {
  TrainingConfig c;
  c.regime = Regime::kTd;
  c.games = 1;
  c.seed = 4;
  c.params.lambda = 0.0;
  auto res = train_player(c);
  // Replay the same game with the untrained net to count its moves.
  auto net = initial_network(4);
  Rng rng(derive_seed(4, 2));
  auto t = self_play_game(network_policy(net, c.params.epsilon), rng);
  CHECK(res.td_updates == static_cast<std::size_t>(t.moves()));
  CHECK_FALSE(res.net == net);
}

TEST_CASE("train_player: database regimes respect capacity and targets") {
  TrainingConfig c;
  c.games = 300;
  c.seed = 8;
  c.db.capacity = 120;
  c.db.retrain_every = 25;
  c.db.epochs = 2;

  c.regime = Regime::kDb;
  auto db = train_player(c);
  CHECK(db.final_facts.size() <= 120);
  std::set<std::vector<double>> keys;
  for (const auto& e : db.final_facts) keys.insert(e.features);
  CHECK(keys.size() == db.final_facts.size());

  c.regime = Regime::kFactOpinion;
  auto fo = train_player(c);
  CHECK(fo.final_facts.size() <= 24);
  CHECK(fo.final_opinions.size() <= 96);
  for (const auto& e : fo.final_facts) CHECK(e.fact);
  for (const auto& e : fo.final_opinions) CHECK_FALSE(e.fact);

  c.regime = Regime::kWidrowHoff;
  auto wh = train_player(c);
  CHECK_FALSE(wh.final_facts.empty());
  for (const auto& e : wh.final_facts) {
    CHECK(std::count(e.target.begin(), e.target.end(), 1.0) == 1);
    CHECK(std::count(e.target.begin(), e.target.end(), 0.0) == 2);
  }
}

TEST_CASE("train_player is deterministic and records a curve") {
  const auto tb = make_testbed(2);
  TrainingConfig c;
  c.regime = Regime::kHybrid;
  c.games = 200;
  c.seed = 21;
  c.eval_every = 50;
  c.testbed = &tb;
  c.db.retrain_every = 20;
  c.db.epochs = 2;
  auto a = train_player(c);
  auto b = train_player(c);
  CHECK(a.net == b.net);
  REQUIRE(a.curve.size() == 4);
  CHECK(a.curve.back().game_index == 200);
  const auto csv = curve_csv(a.curve);
  CHECK(csv.rfind("game_index,testbed_score,db_size_facts,db_size_opinions\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("regime names round-trip") {
  for (auto r : {Regime::kTd, Regime::kDb, Regime::kFactOpinion, Regime::kWidrowHoff, Regime::kHybrid})
    CHECK(parse_regime(to_string(r)) == r);
  CHECK(parse_regime("fact_opinion") == Regime::kFactOpinion);
  CHECK_THROWS(parse_regime("sarsa"));
}
