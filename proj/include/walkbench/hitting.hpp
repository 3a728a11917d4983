#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "walkbench/chain.hpp"
#include "walkbench/common.hpp"
#include "walkbench/perturb.hpp"

namespace walkbench {

enum class HitMethod { Resolvent, Spectral, MonteCarlo };

std::string method_name(HitMethod m);

struct HittingReport {
  double value = 0.0;
  HitMethod method = HitMethod::Resolvent;
  std::optional<double> std_error;      // Monte Carlo only
  std::optional<long long> trials;      // Monte Carlo only
  std::vector<std::string> warnings;    // breached-assumption notes
};

// Hitting time of x from the stationary distribution,
//     HT(P, x) = pi_{-x}^T (I - P_{-x})^{-1} 1,
// evaluated by a linear solve (never an explicit inverse). Mass already at x
// contributes zero.
HittingReport ht_resolvent(const StochasticMatrix& P, int x);

// Same quantity through the spectral decomposition of the symmetrized deleted
// block: sum_j nu_j^2 / (1 - lambda_j). Eigenvalues at 1 (within `reducible`)
// are an error; nonpositive eigenvalues are recorded as warnings and the
// formula is still evaluated.
HittingReport ht_spectral(const StochasticMatrix& P, int x);

// Monte Carlo estimate: draws the start from pi, records 0 when the start is
// already x, otherwise walks column-indexed transitions until the first
// arrival. trials >= 100. The mean is reduced in fixed chunk order
// (kMonteCarloChunk) so parallel evaluation cannot change the result; each
// trial owns an independent seeded stream. A total step budget of 10^8 guards
// against near-reducible chains.
HittingReport ht_montecarlo(const StochasticMatrix& P, int x, long long trials,
                            std::uint64_t seed);

inline constexpr long long kMonteCarloChunk = 1024;
inline constexpr long long kMonteCarloStepCap = 100000000;

// HT(Q, x) - HT(P, x), both via ht_spectral.
double dpht(const StochasticMatrix& P, const StochasticMatrix& Q, int x);

// Upper bound for the hitting-time shift of a perturbed chain:
//     1 / (1 - lambda1 - noise_norm) - 1 / (1 - lambda1 + gamma),
// with lambda1 and gamma taken from the UNPERTURBED deleted block. Throws
// BoundInapplicableError when noise_norm >= 1 - lambda1.
double dpht_bound(double lambda1, double gamma, double noise_norm);

}  // namespace walkbench
