#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "walkbench/chain.hpp"
#include "walkbench/verify.hpp"

namespace walkbench {

// Sweep configuration (version tag "walkbench-sweep-v1"):
//   {
//     "format": "walkbench-sweep-v1",
//     "families": ["complete", ...],
//     "sizes": [4, 8],
//     "noise_norms": [0.001, 0.01],
//     "targets": ["first", 2],        // "first" means state 0
//     "seeds": [1, 2, 3],
//     "mc_trials": 100000             // optional; cross-check warnings only
//   }
struct SweepConfig {
  std::vector<ChainFamily> families;
  std::vector<int> sizes;
  std::vector<double> noise_norms;
  std::vector<std::optional<int>> targets;  // nullopt = "first"
  std::vector<std::uint64_t> seeds;
  long long mc_trials = 0;
};

SweepConfig parse_sweep_config(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::string& path);

// Fixed CSV schema. Floats carry 17 significant digits, NaN prints as the
// literal `NaN`, booleans as `true`/`false`.
const char* sweep_csv_header();

std::string report_csv_row(const BoundReport& report);

// Rows in deterministic grid order: families, then sizes, then noise norms,
// then targets, then seeds (seeds innermost). A failing instance produces a
// row of NaN/false cells instead of aborting the sweep. Byte-identical output
// for identical config.
void run_sweep(const SweepConfig& config, std::ostream& out);
std::string sweep_csv(const SweepConfig& config);

}  // namespace walkbench
