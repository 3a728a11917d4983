#pragma once

#include <stdexcept>
#include <string>

namespace walkbench {

// Error taxonomy. The CLI maps these onto its exit codes (see README); library
// callers can catch the base type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An input breaks a type invariant: malformed matrix, malformed file, bad argument.
struct ValidationError : Error {
  using Error::Error;
};

// The chain is not ergodic enough for the requested quantity: unreachable states,
// an eigenvalue pinned at 1 in a deleted block, or a Monte Carlo walk that never
// arrives within the step cap.
struct ReducibilityError : Error {
  using Error::Error;
};

// A deleted-block eigenvalue sits at 1 while carrying overlap weight, so an
// arccos term of the quantum hitting sum diverges.
struct DivergentPhaseError : Error {
  using Error::Error;
};

// The requested noise norm cannot be reached while keeping P + E entrywise
// nonnegative.
struct FeasibilityError : Error {
  using Error::Error;
};

// A random generator failed to produce a valid object (e.g. the doubly
// stochastic normalization did not converge). Retry with another seed.
struct GenerationError : Error {
  using Error::Error;
};

// A perturbation bound has no finite value for these inputs
// (e.g. noise_norm >= 1 - lambda1).
struct BoundInapplicableError : Error {
  using Error::Error;
};

// A numerical self-test contradicted an exact identity (orthonormality,
// eigenphase inclusion, Parseval). Firing indicates a bug, not bad input.
struct SpectralTheoremError : Error {
  using Error::Error;
};

// Every tolerance used by the library, in one record, so test suites can
// tighten or loosen them uniformly. The defaults are the contract the unit and
// acceptance tests pin down; ops read this record at call time.
struct Tolerances {
  double stochastic = 1e-12;      // column sums, entry bounds, symmetry defect
  double stationary = 1e-10;      // residual of P*pi - pi
  double orthonormal = 1e-10;     // eigenvector basis defect
  double reconstruction = 1e-9;   // relative eigendecomposition residual
  double eig_match = 1e-10;       // spectrum agreement of similar matrices
  double weyl = 1e-10;            // Weyl / gap-sandwich slack
  double parseval = 1e-10;        // overlap and amplitude sum identities
  double tie_break = 1e-12;       // eigenvalue tie grouping
  double route_rel = 1e-8;        // agreement between independent routes
  double reducible = 1e-12;       // eigenvalue-at-1 cut
  double overlap_skip = 1e-15;    // negligible-weight cut in spectral sums
  double phase_match = 1e-8;      // eigenphase inclusion tolerance
  double phase_selftest = 1e-6;   // hard cut for the walk-spectrum self-test
  double bound_slack = 1e-9;      // DPHT / DPQHT bound checks
  double block_slack = 1e-10;     // block-norm bound checks
  double clip_dust = 1e-14;       // negative dust clipped by apply_noise
  double sinkhorn = 1e-13;        // doubly stochastic normalization target
};

// Mutable process-wide record; set it before running ops, never concurrently
// with them. Everything else in the library is a pure function of its inputs.
Tolerances& tolerances();

// Hard size caps. Dense storage only; the library targets desk-scale inputs.
inline constexpr int kMaxChainSize = 256;
inline constexpr int kMaxWalkDim = 65536;  // n^2 for the walk space

}  // namespace walkbench
