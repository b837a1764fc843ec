#include "lerpalab/sim/runner.hpp"

#include <iomanip>
#include <sstream>

#include "lerpalab/net/snapshot.hpp"

namespace lerpalab::sim {

using namespace lerpalab::lerpa;
namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

  void text(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    write_text(p, content);
    files.push_back(p);
  }
  void network(const fs::path& p, const net::Network& n) {
    try {
      net::save_network(n, p);
    } catch (const std::exception& e) {
      throw IoError(e.what());
    }
    files.push_back(p);
  }
  const fs::path& dir() const { return dir_; }

  std::vector<fs::path> files;

 private:
  fs::path dir_;
};

std::string averaged_csv(const TimeSeries& series, const Scenario& sc) {
  std::array<std::vector<double>, kSeats> avg;
  for (int s = 0; s < kSeats; ++s) avg[static_cast<std::size_t>(s)] = moving_average(series.deltas(s), sc.metrics_window);
  std::ostringstream out;
  out << "hand_index";
  for (const auto& seat : sc.seats) out << ',' << seat.name;
  out << '\n';
  for (std::size_t w = 0; w < avg[0].size(); ++w) {
    out << (w + 1) * static_cast<std::size_t>(sc.metrics_window);
    for (const auto& a : avg) out << ',' << fixed(a[w]);
    out << '\n';
  }
  return out.str();
}

std::string hand_logs(const std::vector<std::vector<std::string>>& logs) {
  std::ostringstream out;
  for (std::size_t h = 0; h < logs.size(); ++h) {
    out << "HAND " << h + 1 << '\n';
    for (const auto& line : logs[h]) out << line << '\n';
  }
  return out.str();
}

void fill_summary(ReplicateSummary& r, const TimeSeries& series) {
  for (int s = 0; s < kSeats; ++s) {
    const auto i = static_cast<std::size_t>(s);
    r.final_chips[i] = series.final_chips(s);
    const auto k = series.knocks(s);
    double sum = 0.0;
    for (double v : k) sum += v;
    r.knock_rate[i] = k.empty() ? 0.0 : sum / static_cast<double>(k.size());
  }
  r.top_seat = ranking(series)[0];
}

void save_nets(Writer& w, const Scenario& sc, const std::string& stem, int seeds,
               const std::array<std::optional<net::Network>, kSeats>& nets) {
  for (int s = 0; s < kSeats; ++s) {
    const auto i = static_cast<std::size_t>(s);
    if (!nets[i]) continue;
    w.network(w.dir() / (stem + "_seat" + std::to_string(s) + ".net"), *nets[i]);
    const std::string& extra = sc.seats[i].snapshot_out;
    if (!extra.empty()) {
      fs::path p = extra;
      if (seeds > 1) p += "." + stem;
      w.network(p, *nets[i]);
    }
  }
}

std::string describe(const DynamicReport& r) {
  std::ostringstream out;
  out << "seat " << r.seat << " hand " << join_cards(r.hand) << '\n';
  out << "training_hands " << r.series.size() << '\n';
  out << "eval_hands " << r.eval_hands << '\n';
  out << "knock_rate " << fixed(r.knock_rate) << '\n';
  out << "mean_return " << fixed(r.mean_return) << '\n';
  out << "non_negative " << (r.non_negative() ? "yes" : "no") << '\n';
  for (const auto& [action, count] : r.actions) out << "action " << action << ' ' << count << '\n';
  return out.str();
}

std::string describe(const ConvergenceReport& r, const Scenario& sc) {
  std::ostringstream out;
  out << "stabilized " << (r.stabilized ? "yes" : "no") << '\n';
  out << "stabilization_hand " << (r.stabilization_hand ? std::to_string(*r.stabilization_hand) : "-") << '\n';
  out << "hands_played " << r.hands_played << '\n';
  for (int s = 0; s < kSeats; ++s) {
    const auto i = static_cast<std::size_t>(s);
    out << "seat " << s << ' ' << sc.seats[i].name << ' ' << (r.terminal_decisions.knocked[i] ? "knock" : "fold")
        << " cards " << (r.terminal_decisions.cards[i].empty() ? "-" : join_cards(r.terminal_decisions.cards[i]))
        << " payout " << r.terminal_payout[i] << '\n';
  }
  return out.str();
}

}  // namespace

ScenarioRun run_scenario(const Scenario& scenario, int seeds, const fs::path& out_dir) {
  if (seeds < 1) throw std::invalid_argument("seeds must be at least 1");
  scenario.validate();
  Writer w(out_dir);
  ScenarioRun run;
  std::ostringstream summary;
  summary << "scenario " << scenario.name << '\n';
  summary << "analysis " << to_string(scenario.analysis) << '\n';
  summary << "hands " << scenario.n_hands << '\n';
  summary << "seeds " << scenario.seed << ".." << scenario.seed + static_cast<std::uint64_t>(seeds - 1) << '\n';

  if (scenario.analysis == Analysis::kPersonalities) {
    const PersonalityReport rep = personality_contrast(scenario, seeds);
    std::ostringstream body;
    for (const auto& arm : rep.arms) {
      const std::string tag = to_string(arm.opponents);
      for (const auto& r : arm.runs) {
        const std::uint64_t seed = scenario.seed + static_cast<std::uint64_t>(&r - arm.runs.data());
        const std::string stem = scenario.name + "_" + tag + "_seed" + std::to_string(seed);
        w.text(stem + ".csv", to_csv(r.series));
        w.text(stem + "_dynamic.txt", describe(r));
        save_nets(w, scenario, stem, seeds, r.nets);
        ReplicateSummary rs;
        rs.seed = seed;
        rs.events = r.events;
        fill_summary(rs, r.series);
        rs.note = "opponents " + tag + " eval_knock_rate " + fixed(r.knock_rate) + " mean_return " +
                  fixed(r.mean_return);
        run.replicates.push_back(rs);
      }
      body << "opponents " << tag << " knocks " << arm.knocks << " of " << arm.hands << " rate "
           << fixed(arm.hands ? static_cast<double>(arm.knocks) / arm.hands : 0.0) << '\n';
    }
    if (rep.arms.size() >= 2) {
      body << "two_proportion z " << fixed(rep.first_two.z) << " p " << std::setprecision(6)
           << rep.first_two.p_value << '\n';
    }
    w.text(scenario.name + "_personalities.txt", body.str());
    summary << body.str();
  } else {
    for (int k = 0; k < seeds; ++k) {
      Scenario sc = scenario;
      sc.seed = scenario.seed + static_cast<std::uint64_t>(k);
      const std::string stem = scenario.name + "_seed" + std::to_string(sc.seed);
      ReplicateSummary rs;
      rs.seed = sc.seed;

      if (sc.analysis == Analysis::kStatic) {
        const ConvergenceReport rep = static_analysis(sc);
        w.text(stem + ".csv", to_csv(rep.series));
        w.text(stem + "_convergence.txt", describe(rep, sc));
        std::ostringstream log;
        for (const auto& line : rep.terminal_log) log << line << '\n';
        w.text(stem + "_terminal.log", log.str());
        save_nets(w, sc, stem, seeds, rep.nets);
        fill_summary(rs, rep.series);
        rs.events = rep.events;
        rs.note = rep.stabilized ? "stabilized at hand " + std::to_string(*rep.stabilization_hand)
                                 : "not stabilized after " + std::to_string(rep.hands_played);
      } else if (sc.analysis == Analysis::kDynamic) {
        const DynamicReport rep = dynamic_analysis(sc);
        w.text(stem + ".csv", to_csv(rep.series));
        w.text(stem + "_dynamic.txt", describe(rep));
        save_nets(w, sc, stem, seeds, rep.nets);
        fill_summary(rs, rep.series);
        rs.events = rep.events;
        rs.note = "eval_knock_rate " + fixed(rep.knock_rate) + " mean_return " + fixed(rep.mean_return);
      } else {
        RunResult res = run_table(sc, true);
        w.text(stem + ".csv", to_csv(res.series));
        w.text(stem + "_hands.log", hand_logs(res.logs));
        w.text(stem + "_averaged.csv", averaged_csv(res.series, sc));
        save_nets(w, sc, stem, seeds, res.nets);
        fill_summary(rs, res.series);
        rs.events = res.events;
        if (sc.analysis == Analysis::kCowardice) {
          const auto rates = fold_rate_series(res.series, sc.target_seat, sc.metrics_window);
          std::ostringstream out;
          out << "hand_index,fold_rate\n";
          for (std::size_t i = 0; i < rates.size(); ++i)
            out << (i + 1) * static_cast<std::size_t>(sc.metrics_window) << ',' << fixed(rates[i]) << '\n';
          w.text(stem + "_fold_rate.csv", out.str());
          const int n = static_cast<int>(res.series.size());
          if (n >= 300)
            rs.note = "fold_rate hands 300-" + std::to_string(std::min(n, 500)) + " " +
                      fixed(fold_rate(res.series, sc.target_seat, 300, std::min(n, 500)));
        } else if (sc.analysis == Analysis::kBluff) {
          w.text(stem + "_knock_matrix.csv", knock_matrix_csv(res.series, sc));
          w.text(stem + "_knock_rates.csv", knock_rate_csv(res.series, sc));
        } else if (sc.analysis == Analysis::kTournament) {
          std::ostringstream order;
          order << "ranking";
          for (int s : ranking(res.series)) order << ' ' << sc.seats[static_cast<std::size_t>(s)].name;
          rs.note = order.str();
        }
      }
      for (const auto& e : rs.events) {
        summary << "instability seed " << rs.seed << " seat " << e.seat << " hand " << e.hand_index << ": "
                << e.message << '\n';
      }
      run.replicates.push_back(rs);
    }
  }

  std::array<int, kSeats> tops{};
  std::array<double, kSeats> mean_chips{};
  std::array<double, kSeats> mean_knock{};
  for (const auto& r : run.replicates) {
    ++tops[static_cast<std::size_t>(r.top_seat)];
    for (std::size_t s = 0; s < kSeats; ++s) {
      mean_chips[s] += static_cast<double>(r.final_chips[s]) / static_cast<double>(run.replicates.size());
      mean_knock[s] += r.knock_rate[s] / static_cast<double>(run.replicates.size());
    }
  }
  for (const auto& r : run.replicates) {
    summary << "seed " << r.seed << " chips";
    for (long c : r.final_chips) summary << ' ' << c;
    summary << " top " << scenario.seats[static_cast<std::size_t>(r.top_seat)].name;
    if (!r.note.empty()) summary << " | " << r.note;
    summary << '\n';
  }
  for (std::size_t s = 0; s < kSeats; ++s) {
    summary << "seat " << s << ' ' << scenario.seats[s].name << " mean_final_chips " << fixed(mean_chips[s], 2)
            << " knock_rate " << fixed(mean_knock[s]) << " top_in " << tops[s] << '/' << run.replicates.size()
            << '\n';
  }

  std::ostringstream csv;
  csv << "seed,seat,name,final_chips,knock_rate,top\n";
  for (const auto& r : run.replicates) {
    for (std::size_t s = 0; s < kSeats; ++s) {
      csv << r.seed << ',' << s << ',' << scenario.seats[s].name << ',' << r.final_chips[s] << ','
          << fixed(r.knock_rate[s]) << ',' << (static_cast<int>(s) == r.top_seat ? 1 : 0) << '\n';
    }
  }
  w.text("summary.csv", csv.str());
  run.summary = summary.str();
  w.text("summary.txt", run.summary);
  run.files = w.files;
  return run;
}

}  // namespace lerpalab::sim
