#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "walkbench/chain.hpp"
#include "walkbench/common.hpp"
#include "walkbench/perturb.hpp"

namespace walkbench {

// Everything the verification engine measures for one (P, Q = P + E, x)
// instance. Numeric fields that do not apply hold NaN; the *_applicable flags
// say why. Serialization re-derives every *_ok flag from the stored numbers
// and refuses to write an inconsistent report.
struct BoundReport {
  // instance descriptors
  std::string family;
  int n = 0;
  int target = 0;
  std::optional<std::uint64_t> seed;
  double noise_norm = 0.0;  // achieved ||E||_2

  // spectral summary
  double delta = 0.0;         // gap of P
  double Delta = 0.0;         // gap of Q
  double gamma = 0.0;         // lambda1 - lambda_min of P_{-x}
  double lambda1 = 0.0;       // top eigenvalue of P_{-x}
  double epsilon = 0.0;       // |marked| / n (the target is a single state)
  double max_eig_diff = 0.0;  // paired eigenvalue shift between P and Q

  // classical hitting
  double ht_p = 0.0;
  double ht_q = 0.0;
  double dpht = 0.0;
  double dpht_bound = 0.0;  // NaN when inapplicable
  bool dpht_bound_applicable = false;
  bool dpht_ok = false;
  std::optional<double> mc_value;
  std::optional<double> mc_stderr;
  std::optional<long long> mc_trials;

  // quantum hitting
  double qht_p = 0.0;
  double qht_q = 0.0;
  double dpqht = 0.0;
  double dpqht_bound = 0.0;  // NaN when inapplicable
  double naive_dpqht_bound = 0.0;
  bool dpqht_bound_applicable = false;
  bool dpqht_ok = false;
  double p1_norm = 0.0;
  double szegedy_qht_bound = 0.0;
  double annihilation_threshold = 0.0;
  double q1_norm_bound = 0.0;  // NaN when inapplicable
  double q1_norm_actual = 0.0;
  bool block_bound_applicable = false;

  // verification flags
  bool weyl_ok = false;
  bool sandwich_ok = false;
  bool spectrum_theorem_ok = false;
  bool positive_spectrum_ok = false;
  bool block_bound_ok = false;

  std::vector<std::string> warnings;
};

struct VerifyOptions {
  long long mc_trials = 0;      // 0 disables the Monte Carlo cross-check
  std::uint64_t mc_seed = 7;
};

// Runs the whole battery on one instance. P and Q must be symmetric chains of
// equal size; x a valid state. Never throws for breached assumptions or
// violated bounds (those are flags/warnings); it does throw ValidationError
// for malformed inputs.
BoundReport verify_instance(const StochasticMatrix& P, const StochasticMatrix& Q,
                            int x, const VerifyOptions& opts = {});

// Flat JSON object (format tag "walkbench-report-v1"); NaN serializes as null.
nlohmann::json report_to_json(const BoundReport& report);

// Exit-code policy, a pure function of the report:
//   0  every flag true, every bound applicable
//   3  an assumption is breached (positive spectrum) or a bound inapplicable,
//      and nothing unconditional failed
//   4  an unconditional check failed (weyl, sandwich, walk spectrum, block
//      bounds) or an applicable DPHT/DPQHT bound is violated while the
//      positive-spectrum assumption holds
int report_exit_code(const BoundReport& report);

}  // namespace walkbench
