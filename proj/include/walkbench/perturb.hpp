#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "walkbench/chain.hpp"
#include "walkbench/common.hpp"

namespace walkbench {

// A symmetric perturbation with zero column sums: exactly the directions that
// keep P + E symmetric and column-stochastic (up to entrywise nonnegativity,
// which is checked separately).
struct NoiseMatrix {
  Eigen::MatrixXd entries;   // symmetric, column sums 0
  double norm2 = 0.0;        // ||E||_2 = max |eigenvalue|
  std::uint64_t seed = 0;    // 0 for hand-built noise

  int size() const { return static_cast<int>(entries.rows()); }
};

// Validates a hand-built perturbation (symmetry and zero column sums within
// stochastic tolerance) and records its spectral norm.
NoiseMatrix make_noise(Eigen::MatrixXd entries, std::uint64_t seed = 0);

// Draws a symmetric zero-column-sum direction, scales it to target_norm, then
// halves (at most 60 times) until P + E is entrywise nonnegative. The achieved
// norm must land in [0.9 * target_norm, target_norm], else FeasibilityError;
// the recorded norm2 is the achieved one, measured by a fresh
// eigendecomposition.
NoiseMatrix sample_noise(const StochasticMatrix& P, double target_norm,
                         std::uint64_t seed);

// Q = P + E. Entries below -clip_dust are an error (the noise is infeasible);
// dust in [-clip_dust, 0) is clipped to 0 and the touched columns renormalized.
// With E = 0 the result is bit-identical to P.
StochasticMatrix apply_noise(const StochasticMatrix& P, const NoiseMatrix& E);

}  // namespace walkbench
