// lerpalab: train and evaluate tic-tac-toe players, run Lerpa tables and
// scenarios, inspect network snapshots.
//
// Exit codes: 0 success, 1 bad arguments or config, 2 training aborted by
// instability, 3 output could not be written.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "lerpalab/lerpa/agents.hpp"
#include "lerpalab/net/snapshot.hpp"
#include "lerpalab/sim/runner.hpp"
#include "lerpalab/ttt/player.hpp"
#include "lerpalab/ttt/testbed.hpp"

namespace fs = std::filesystem;
using namespace lerpalab;

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kUnstable = 2;
constexpr int kIoFailure = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& given) {
  if (given) return *given;
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "no --seed given; using generated seed " << seed << '\n';
  return seed;
}

// <LERPALAB_OUT or ./lerpalab-runs>/<YYYYmmdd-HHMMSS>-<command>[-n]
fs::path make_run_dir(const std::string& command) {
  const char* env = std::getenv("LERPALAB_OUT");
  const fs::path base = env && *env ? fs::path(env) : fs::path("lerpalab-runs");
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y%m%d-%H%M%S") << '-' << command;
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec) throw sim::IoError("cannot create output directory " + base.string() + ": " + ec.message());
  fs::path dir = base / stamp.str();
  for (int n = 2; fs::exists(dir); ++n) dir = base / (stamp.str() + "-" + std::to_string(n));
  fs::create_directory(dir, ec);
  if (ec) throw sim::IoError("cannot create run directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_run_info(const fs::path& dir, const std::string& command, std::uint64_t seed) {
  std::ostringstream info;
  info << "command " << command << "\nseed " << seed << '\n';
  sim::write_text(dir / "run.txt", info.str());
}

void print_paths(const std::vector<fs::path>& paths) {
  for (const auto& p : paths) std::cout << "wrote " << p.string() << '\n';
}

void save_net(const net::Network& n, const fs::path& path) {
  try {
    net::save_network(n, path);
  } catch (const std::exception& e) {
    throw sim::IoError(e.what());
  }
}

std::vector<ttt::TestPosition> testbed_from(const std::string& path) {
  const fs::path p = path.empty() ? fs::path(LERPALAB_DEFAULT_TESTBED) : fs::path(path);
  try {
    return ttt::load_testbed(p);
  } catch (const std::exception& e) {
    throw UsageError(std::string("testbed: ") + e.what());
  }
}

net::Network load_net_arg(const std::string& path) {
  try {
    return net::load_network(path);
  } catch (const std::exception& e) {
    throw UsageError(std::string("snapshot: ") + e.what());
  }
}

struct TttTrainArgs {
  std::string player = "td";
  int games = 20000;
  double alpha = 0.2, lambda = 0.3, epsilon = 0.1;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string testbed;
  int eval_every = 1000;
};

int ttt_train(const TttTrainArgs& a) {
  ttt::TrainingConfig cfg;
  try {
    cfg.regime = ttt::parse_regime(a.player);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (a.games < 0) throw UsageError("--games must not be negative");
  cfg.games = a.games;
  cfg.params = {a.alpha, a.lambda, a.epsilon};
  try {
    cfg.params.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const auto testbed = testbed_from(a.testbed);
  cfg.testbed = &testbed;
  cfg.eval_every = a.eval_every;
  cfg.seed = resolve_seed(a.seed);

  const fs::path dir = make_run_dir("ttt-train");
  write_run_info(dir, "ttt-train --player " + a.player + " --games " + std::to_string(a.games), cfg.seed);
  std::vector<fs::path> written{dir / "run.txt"};
  ttt::TrainingResult result;
  try {
    result = ttt::train_player(cfg);
  } catch (const ttt::TrainingAborted& e) {
    std::cerr << "training aborted at game " << e.game_index() << ": " << e.what() << '\n';
    print_paths(written);
    return kUnstable;
  }
  const fs::path snapshot = a.out.empty() ? dir / "player.net" : fs::path(a.out);
  save_net(result.net, snapshot);
  written.push_back(snapshot);
  sim::write_text(dir / "curve.csv", ttt::curve_csv(result.curve));
  written.push_back(dir / "curve.csv");
  std::cout << "seed " << cfg.seed << '\n';
  std::cout << "regime " << ttt::to_string(cfg.regime) << " games " << cfg.games << '\n';
  std::cout << "testbed score " << ttt::evaluate_player(result.net, testbed) << "/" << testbed.size() << '\n';
  print_paths(written);
  return kOk;
}

int ttt_eval(const std::string& snapshot, const std::string& testbed_path) {
  const net::Network n = load_net_arg(snapshot);
  const auto testbed = testbed_from(testbed_path);
  const auto hits = ttt::evaluate_positions(n, testbed);
  int score = 0;
  for (std::size_t i = 0; i < testbed.size(); ++i) {
    score += hits[i] ? 1 : 0;
    std::cout << (hits[i] ? "ok   " : "miss ") << testbed[i].board.to_string() << ' ' << testbed[i].description
              << '\n';
  }
  std::cout << "testbed score " << score << "/" << testbed.size() << '\n';
  return kOk;
}

struct LerpaRunArgs {
  int hands = 1000;
  int td_seats = 1;
  double alpha = 0.1, lambda = 0.1, epsilon = 0.01;
  int forced = 200;
  std::string personality = "rational";
  std::optional<std::uint64_t> seed;
};

int lerpa_run(const LerpaRunArgs& a) {
  if (a.td_seats < 0 || a.td_seats > 4) throw UsageError("--td-seats must be 0..4");
  sim::Scenario sc;
  sc.name = "lerpa-run";
  sc.n_hands = a.hands;
  for (int s = 0; s < lerpa::kSeats; ++s) {
    auto& seat = sc.seats[static_cast<std::size_t>(s)];
    seat.kind = s < a.td_seats ? sim::AgentKind::kTd : sim::AgentKind::kRandom;
    seat.agent.params = {a.alpha, a.lambda, a.epsilon};
    seat.agent.forced_play_hands = a.forced;
    try {
      seat.agent.personality = lerpa::parse_personality(a.personality);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  sc.seed = resolve_seed(a.seed);
  try {
    sc.validate();
  } catch (const sim::ScenarioError& e) {
    throw UsageError(e.what());
  }
  const fs::path dir = make_run_dir("lerpa-run");
  write_run_info(dir, "lerpa-run --hands " + std::to_string(a.hands), sc.seed);
  const sim::ScenarioRun run = sim::run_scenario(sc, 1, dir);
  std::cout << "seed " << sc.seed << '\n' << run.summary;
  std::vector<fs::path> written{dir / "run.txt"};
  written.insert(written.end(), run.files.begin(), run.files.end());
  print_paths(written);
  return kOk;
}

int lerpa_scenario(const std::string& config, int seeds, std::optional<std::uint64_t> seed,
                   std::optional<int> hands) {
  if (seeds < 1) throw UsageError("--seeds must be at least 1");
  sim::Scenario sc = sim::load_scenario(config);
  if (seed) sc.seed = *seed;
  else if (!sc.seed_in_file) sc.seed = resolve_seed(std::nullopt);
  if (hands) {
    sc.n_hands = *hands;
    sc.validate();
  }
  const fs::path dir = make_run_dir("lerpa-scenario");
  write_run_info(dir, "lerpa-scenario --config " + config + " --seeds " + std::to_string(seeds), sc.seed);
  const sim::ScenarioRun run = sim::run_scenario(sc, seeds, dir);
  std::cout << run.summary;
  std::vector<fs::path> written{dir / "run.txt"};
  written.insert(written.end(), run.files.begin(), run.files.end());
  print_paths(written);
  return kOk;
}

int net_inspect(const std::string& snapshot) {
  const net::Network n = load_net_arg(snapshot);
  auto stats = [](const net::Matrix& m) {
    double lo = 0, hi = 0, abs_sum = 0;
    bool first = true;
    for (double v : m.values()) {
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      abs_sum += std::abs(v);
      first = false;
    }
    std::ostringstream out;
    out << "min " << lo << " max " << hi << " mean|w| " << (m.size() ? abs_sum / static_cast<double>(m.size()) : 0.0);
    return out.str();
  };
  std::cout << "inputs " << n.n_in << " hidden " << n.n_hidden << " outputs " << n.n_out << " output "
            << net::to_string(n.output_activation) << '\n';
  std::cout << "hidden weights " << stats(n.hidden_weights) << '\n';
  std::cout << "output weights " << stats(n.output_weights) << '\n';
  std::cout << "finite " << (n.all_finite() ? "yes" : "no") << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lerpalab: TD(lambda) players for tic-tac-toe and Lerpa"};
  app.require_subcommand(1);

  TttTrainArgs train;
  auto* c_train = app.add_subcommand("ttt-train", "train a tic-tac-toe player");
  c_train->add_option("--player", train.player, "td | db | factop | wh | hybrid")->capture_default_str();
  c_train->add_option("--games", train.games, "training games")->capture_default_str();
  c_train->add_option("--alpha", train.alpha)->capture_default_str();
  c_train->add_option("--lambda", train.lambda)->capture_default_str();
  c_train->add_option("--epsilon", train.epsilon)->capture_default_str();
  c_train->add_option("--seed", train.seed, "64-bit seed; generated and logged when absent");
  c_train->add_option("--out", train.out, "snapshot path (default: run directory)");
  c_train->add_option("--testbed", train.testbed, "testbed file (default: bundled fixture)");
  c_train->add_option("--eval-every", train.eval_every, "learning-curve cadence in games, 0 = off")
      ->capture_default_str();

  std::string eval_snapshot, eval_testbed;
  std::optional<std::uint64_t> eval_seed;
  auto* c_eval = app.add_subcommand("ttt-eval", "score a tic-tac-toe snapshot on the testbed");
  c_eval->add_option("--snapshot", eval_snapshot)->required();
  c_eval->add_option("--testbed", eval_testbed);
  c_eval->add_option("--seed", eval_seed, "accepted for uniformity; evaluation is greedy");

  LerpaRunArgs run;
  auto* c_run = app.add_subcommand("lerpa-run", "play a Lerpa table of learners and random players");
  c_run->add_option("--hands", run.hands)->capture_default_str();
  c_run->add_option("--td-seats", run.td_seats, "learners in seats 0..n-1, random players after")
      ->capture_default_str();
  c_run->add_option("--alpha", run.alpha)->capture_default_str();
  c_run->add_option("--lambda", run.lambda)->capture_default_str();
  c_run->add_option("--epsilon", run.epsilon)->capture_default_str();
  c_run->add_option("--forced-play-hands", run.forced)->capture_default_str();
  c_run->add_option("--personality", run.personality, "rational | aggressive | conservative | a,b,c,d")
      ->capture_default_str();
  c_run->add_option("--seed", run.seed);

  std::string config;
  int seeds = 1;
  std::optional<std::uint64_t> scenario_seed;
  std::optional<int> scenario_hands;
  auto* c_scen = app.add_subcommand("lerpa-scenario", "run a scenario file");
  c_scen->add_option("--config", config)->required();
  c_scen->add_option("--seeds", seeds, "replicates: seed, seed+1, ...")->capture_default_str();
  c_scen->add_option("--seed", scenario_seed, "overrides the file's seed");
  c_scen->add_option("--hands", scenario_hands, "overrides the file's hand count");

  std::string inspect_snapshot;
  std::optional<std::uint64_t> inspect_seed;
  auto* c_inspect = app.add_subcommand("net-inspect", "describe a network snapshot");
  c_inspect->add_option("--snapshot", inspect_snapshot)->required();
  c_inspect->add_option("--seed", inspect_seed, "accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*c_train) return ttt_train(train);
    if (*c_eval) return ttt_eval(eval_snapshot, eval_testbed);
    if (*c_run) return lerpa_run(run);
    if (*c_scen) return lerpa_scenario(config, seeds, scenario_seed, scenario_hands);
    if (*c_inspect) return net_inspect(inspect_snapshot);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const sim::ScenarioError& e) {
    std::cerr << "error: " << config << ": " << e.what() << '\n';
    return kBadInput;
  } catch (const sim::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const net::InstabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUnstable;
  }
  return kBadInput;
}
