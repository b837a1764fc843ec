#include "lerpalab/ttt/player.hpp"

#include <sstream>

#include "lerpalab/ttt/testbed.hpp"

namespace lerpalab::ttt {

double position_value(const std::vector<double>& outputs, Side mover) {
  return outputs[win_index(mover)] - outputs[win_index(opponent(mover))];
}

MoveChoice choose_move(const net::Network& net, const Board& board, double epsilon, Rng& rng) {
  const auto legal = legal_moves(board);
  if (legal.empty()) throw InvalidBoard("no legal move on " + board.to_string());
  const Side mover = board.to_move();

  MoveChoice choice;
  if (chance(rng, epsilon)) {
    choice.move = legal[uniform_index(rng, legal.size())];
    net::forward_into(net, encode(board.play(choice.move)), choice.resultant);
    return choice;
  }

  net::ActivationCache cache;
  double best = 0.0;
  for (int move : legal) {
    net::forward_into(net, encode(board.play(move)), cache);
    const double v = position_value(cache.outputs, mover);
    if (choice.move < 0 || v > best) {
      best = v;
      choice.move = move;
      choice.resultant = cache;
    }
  }
  return choice;
}

int select_move(const net::Network& net, const Board& board, double epsilon, Rng& rng) {
  return choose_move(net, board, epsilon, rng).move;
}

Policy random_policy() {
  return [](const Board& b, Rng& rng) {
    auto legal = legal_moves(b);
    return legal[uniform_index(rng, legal.size())];
  };
}

Policy network_policy(const net::Network& net, double epsilon) {
  return [&net, epsilon](const Board& b, Rng& rng) { return select_move(net, b, epsilon, rng); };
}

Trajectory self_play_game(const Policy& policy, Rng& rng) {
  Trajectory t;
  t.boards.emplace_back();
  while ((t.result = winner(t.boards.back())) == Outcome::kOngoing) {
    t.boards.push_back(t.boards.back().play(policy(t.boards.back(), rng)));
  }
  return t;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kTd: return "td";
    case Regime::kDb: return "db";
    case Regime::kFactOpinion: return "factop";
    case Regime::kWidrowHoff: return "wh";
    case Regime::kHybrid: return "hybrid";
  }
  return "?";
}

Regime parse_regime(const std::string& text) {
  if (text == "td") return Regime::kTd;
  if (text == "db") return Regime::kDb;
  if (text == "factop" || text == "fact_opinion") return Regime::kFactOpinion;
  if (text == "wh" || text == "widrow_hoff") return Regime::kWidrowHoff;
  if (text == "hybrid") return Regime::kHybrid;
  throw std::invalid_argument("unknown training regime '" + text + "'");
}

net::Network initial_network(std::uint64_t seed, std::size_t hidden) {
  return net::init_network(kFeatureCount, hidden, kTargetCount, net::OutputActivation::kSigmoid,
                           derive_seed(seed, 1));
}

namespace {

struct PlayedGame {
  std::vector<Board> resultants;            // position after every move
  std::vector<std::vector<double>> predictions;  // network output on each, at play time
  Outcome result = Outcome::kOngoing;
};

class Trainer {
 public:
  explicit Trainer(const TrainingConfig& config)
      : config_(config),
        rng_(derive_seed(config.seed, 2)),
        single_(config.db.capacity),
        split_(fact_capacity(config.db), config.db.capacity - fact_capacity(config.db)) {
    config.params.validate();
    result_.net = initial_network(config.seed, config.hidden);
  }

  TrainingResult run() {
    const int db_games = config_.regime == Regime::kHybrid
                             ? static_cast<int>(config_.games * config_.db.hybrid_fraction + 0.5)
                             : 0;
    net::TdLearner learner(result_.net, config_.params.alpha, config_.params.lambda);
    for (int game = 1; game <= config_.games; ++game) {
      try {
        switch (config_.regime) {
          case Regime::kTd: td_game(learner); break;
          case Regime::kDb: database_game(/*split=*/false, game); break;
          case Regime::kFactOpinion: database_game(/*split=*/true, game); break;
          case Regime::kWidrowHoff: widrow_hoff_game(game); break;
          case Regime::kHybrid:
            if (game <= db_games) database_game(/*split=*/true, game);
            else td_game(learner);
            break;
        }
      } catch (const net::InstabilityError& e) {
        throw TrainingAborted(std::string(e.what()) + " (" + to_string(config_.regime) +
                                  " regime, game " + std::to_string(game) + ")",
                              game);
      }
      if (config_.eval_every > 0 && config_.testbed && game % config_.eval_every == 0) {
        record_curve(game);
      }
    }
    result_.td_updates = learner.updates();
    const bool split = config_.regime == Regime::kFactOpinion || config_.regime == Regime::kHybrid;
    const ExperienceDB& facts = split ? split_.facts : single_;
    result_.final_facts.assign(facts.entries().begin(), facts.entries().end());
    if (split) {
      result_.final_opinions.assign(split_.opinions.entries().begin(),
                                    split_.opinions.entries().end());
    }
    return std::move(result_);
  }

 private:
  static std::size_t fact_capacity(const DbConfig& db) {
    const auto n = static_cast<std::size_t>(static_cast<double>(db.capacity) * db.fact_fraction + 0.5);
    return std::clamp<std::size_t>(n, 1, db.capacity > 1 ? db.capacity - 1 : 1);
  }

  PlayedGame play_game() {
    PlayedGame g;
    Board board;
    while ((g.result = winner(board)) == Outcome::kOngoing) {
      auto choice = choose_move(result_.net, board, config_.params.epsilon, rng_);
      board = board.play(choice.move);
      g.resultants.push_back(board);
      g.predictions.push_back(std::move(choice.resultant.outputs));
    }
    return g;
  }

  void td_game(net::TdLearner& learner) {
    learner.begin_episode();
    Board board;
    while (winner(board) == Outcome::kOngoing) {
      auto choice = choose_move(result_.net, board, config_.params.epsilon, rng_);
      board = board.play(choice.move);
      learner.observe(result_.net, choice.resultant);
    }
    learner.finish(result_.net, outcome_target(winner(board)));
  }

  void database_game(bool split, int game) {
    PlayedGame g = play_game();
    const std::size_t n = g.resultants.size();
    for (std::size_t t = 0; t + 1 < n; ++t) {
      auto features = encode(g.resultants[t]);
      if (split) split_.opinions.insert(std::move(features), g.predictions[t + 1], false);
      else single_.insert(std::move(features), g.predictions[t + 1], false);
    }
    auto features = encode(g.resultants[n - 1]);
    if (split) split_.facts.insert(std::move(features), outcome_target(g.result), true);
    else single_.insert(std::move(features), outcome_target(g.result), true);
    maybe_retrain(split, game);
  }

  // The network is only retrained between games, so it is a static opponent
  // to itself for the whole game.
  void widrow_hoff_game(int game) {
    PlayedGame g = play_game();
    const auto target = outcome_target(g.result);
    for (const Board& b : g.resultants) single_.insert(encode(b), target, true);
    maybe_retrain(false, game);
  }

  void maybe_retrain(bool split, int game) {
    if (config_.db.retrain_every <= 0 || game % config_.db.retrain_every != 0) return;
    std::vector<net::TrainingPair> batch;
    if (split) {
      batch = split_.batch(config_.db.fact_fraction);
    } else {
      single_.append_to(batch);
    }
    net::supervised_train(result_.net, batch, config_.db.learning_rate, config_.db.epochs);
  }

  void record_curve(int game) {
    CurvePoint p;
    p.game_index = game;
    p.testbed_score = evaluate_player(result_.net, *config_.testbed);
    switch (config_.regime) {
      case Regime::kFactOpinion:
      case Regime::kHybrid:
        p.db_size_facts = split_.facts.size();
        p.db_size_opinions = split_.opinions.size();
        break;
      case Regime::kDb:
      case Regime::kWidrowHoff:
        p.db_size_facts = single_.fact_count();
        p.db_size_opinions = single_.size() - p.db_size_facts;
        break;
      case Regime::kTd: break;
    }
    result_.curve.push_back(p);
  }

  const TrainingConfig& config_;
  Rng rng_;
  ExperienceDB single_;
  FactOpinionDB split_;
  TrainingResult result_;
};

}  // namespace

TrainingResult train_player(const TrainingConfig& config) {
  return Trainer(config).run();
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out << "game_index,testbed_score,db_size_facts,db_size_opinions\n";
  for (const auto& p : curve) {
    out << p.game_index << ',' << p.testbed_score << ',' << p.db_size_facts << ','
        << p.db_size_opinions << '\n';
  }
  return out.str();
}

}  // namespace lerpalab::ttt
