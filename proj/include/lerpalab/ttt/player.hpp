#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lerpalab/net/network.hpp"
#include "lerpalab/random.hpp"
#include "lerpalab/ttt/board.hpp"
#include "lerpalab/ttt/experience_db.hpp"

namespace lerpalab::ttt {

struct TestPosition;

// Value of a resultant position for the side that just moved into it:
// own win output minus opponent win output.
double position_value(const std::vector<double>& outputs, Side mover);

struct MoveChoice {
  int move = -1;
  net::ActivationCache resultant;  // forward pass on the position after `move`
};

// Epsilon-greedy over the resultant positions. With probability epsilon a
// uniformly random legal move, otherwise the best-valued one; ties go to the
// lowest cell index. Throws InvalidBoard when no move is legal.
MoveChoice choose_move(const net::Network& net, const Board& board, double epsilon, Rng& rng);
int select_move(const net::Network& net, const Board& board, double epsilon, Rng& rng);

using Policy = std::function<int(const Board&, Rng&)>;

Policy random_policy();
Policy network_policy(const net::Network& net, double epsilon);

struct Trajectory {
  std::vector<Board> boards;  // starts with the empty board
  Outcome result = Outcome::kOngoing;
  std::size_t moves() const { return boards.empty() ? 0 : boards.size() - 1; }
};

// One policy picks moves for both sides until the game ends.
Trajectory self_play_game(const Policy& policy, Rng& rng);

enum class Regime { kTd, kDb, kFactOpinion, kWidrowHoff, kHybrid };

std::string to_string(Regime regime);
// Accepts td, db, factop/fact_opinion, wh/widrow_hoff, hybrid.
Regime parse_regime(const std::string& text);

struct DbConfig {
  std::size_t capacity = 2000;
  double fact_fraction = 0.2;  // facts:opinions = 1:4
  int retrain_every = 50;      // games
  int epochs = 20;
  double learning_rate = 0.2;  // full-batch step size for retraining
  double hybrid_fraction = 0.2;  // share of games spent in the database phase
};

struct TrainingConfig {
  Regime regime = Regime::kTd;
  int games = 0;
  net::TdParams params{0.2, 0.3, 0.1};
  DbConfig db;
  std::uint64_t seed = 0;
  std::size_t hidden = 30;
  int eval_every = 0;  // learning-curve cadence in games; 0 disables
  const std::vector<TestPosition>* testbed = nullptr;
};

struct CurvePoint {
  int game_index = 0;
  int testbed_score = 0;
  std::size_t db_size_facts = 0;
  std::size_t db_size_opinions = 0;
};

struct TrainingResult {
  net::Network net;
  std::vector<CurvePoint> curve;
  std::size_t td_updates = 0;
  std::vector<Experience> final_facts;
  std::vector<Experience> final_opinions;
};

class TrainingAborted : public net::InstabilityError {
 public:
  TrainingAborted(const std::string& what, int game_index)
      : net::InstabilityError(what), game_index_(game_index) {}
  int game_index() const { return game_index_; }

 private:
  int game_index_;
};

// The network train_player starts from for a given seed.
net::Network initial_network(std::uint64_t seed, std::size_t hidden = 30);

// Throws TrainingAborted when the network destabilizes.
TrainingResult train_player(const TrainingConfig& config);

// "game_index,testbed_score,db_size_facts,db_size_opinions" plus one row per point.
std::string curve_csv(const std::vector<CurvePoint>& curve);

}  // namespace lerpalab::ttt
