#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lerpalab/sim/analysis.hpp"
#include "lerpalab/sim/scenario.hpp"
#include "lerpalab/sim/table.hpp"

namespace lerpalab::sim {

struct ReplicateSummary {
  std::uint64_t seed = 0;
  std::array<long, lerpa::kSeats> final_chips{};
  std::array<double, lerpa::kSeats> knock_rate{};
  int top_seat = 0;
  std::string note;  // analysis-specific one-liner
  std::vector<InstabilityEvent> events;
};

struct ScenarioRun {
  std::vector<ReplicateSummary> replicates;
  std::vector<std::filesystem::path> files;  // everything written, in order
  std::string summary;                       // also written to summary.txt
};

// Runs `seeds` replicates (scenario.seed, seed+1, ...) and writes CSVs,
// snapshots, analysis reports and a summary into out_dir, which must exist.
// Throws IoError when a file cannot be written.
ScenarioRun run_scenario(const Scenario& scenario, int seeds, const std::filesystem::path& out_dir);

}  // namespace lerpalab::sim
