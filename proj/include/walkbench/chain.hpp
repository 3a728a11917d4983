#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "walkbench/common.hpp"

namespace walkbench {

// Transition matrices use the COLUMN convention throughout this project:
//
//     entries(j, k) = Pr(k -> j),   every column sums to 1.
//
// Most textbooks write row-stochastic matrices; mixing the conventions silently
// transposes every formula downstream, so raw Eigen matrices are validated and
// wrapped before anything else touches them.
struct StochasticMatrix {
  Eigen::MatrixXd entries;  // n x n, column-stochastic
  bool symmetric = false;   // asserted at construction when set
  std::string meta;         // family descriptor, e.g. "lazy-cycle(n=4,h=0.5)"

  int size() const { return static_cast<int>(entries.rows()); }
};

// Validates `entries` (square, finite, entries in [0, 1], column sums within
// tolerance of 1, symmetry defect within tolerance when `symmetric` is set) and
// wraps it. Diagnostics name the first violated column.
StochasticMatrix make_stochastic(Eigen::MatrixXd entries, bool symmetric,
                                 std::string meta = "");

// A principal minor of a stochastic matrix: column sums <= 1.
struct SubstochasticMatrix {
  Eigen::MatrixXd entries;   // m x m
  std::vector<int> deleted;  // sorted original indices that were removed
  int parent_n = 0;

  int size() const { return static_cast<int>(entries.rows()); }
};

struct Distribution {
  Eigen::VectorXd probs;  // entries >= 0, sum within tolerance of 1

  int size() const { return static_cast<int>(probs.size()); }
};

Distribution make_distribution(Eigen::VectorXd probs);

enum class ChainFamily { Complete, LazyCycle, LazyPath, RandomSymmetric };

ChainFamily parse_family(const std::string& name);  // throws ValidationError
std::string family_name(ChainFamily family);

struct ChainParams {
  double hold = 0.5;        // self-loop probability for the lazy families
  std::uint64_t seed = 0;   // consumed by random-symmetric only
};

// Generates a symmetric, column-stochastic, ergodic chain.
//   complete:          every entry 1/n
//   lazy-cycle:        circulant; hold h on the diagonal, (1-h)/2 per neighbor
//   lazy-path:         path graph; (1-h)/2 per edge, diagonal absorbs the rest
//   random-symmetric:  i.i.d. uniform(0.1, 1) entries, symmetrized by
//                      averaging, normalized doubly stochastic by symmetric
//                      Sinkhorn sweeps, then lazified (positive spectrum)
StochasticMatrix make_chain(ChainFamily family, int n, const ChainParams& params = {});

// Stationary distribution. Verifies ergodicity via strict positivity of
// ((I+P)/2)^n and returns the exact uniform vector for symmetric P.
Distribution stationary(const StochasticMatrix& P);

// Principal minor with the rows and columns in `marked` removed.
SubstochasticMatrix delete_states(const StochasticMatrix& P, const std::vector<int>& marked);

// Replaces each marked column k by the basis vector e_k (absorbing states).
StochasticMatrix absorbing(const StochasticMatrix& P, const std::vector<int>& marked);

// (I + P) / 2. Keeps stationary distribution, maps eigenvalues to (1+lambda)/2.
StochasticMatrix lazify(const StochasticMatrix& P);

// Symmetrized deleted block S_{-x} with S(j,k) = P(j,k) * sqrt(pi_k / pi_j)
// over the retained states. Symmetric whenever P is reversible w.r.t. pi; for
// symmetric P (uniform pi) it equals the plain minor entry for entry.
SubstochasticMatrix similarity_transform(const StochasticMatrix& P,
                                         const Distribution& pi, int x);

// pi with coordinate x removed; a bare vector because it sums to less than 1.
Eigen::VectorXd truncate(const Distribution& pi, int x);

// Sorts, deduplicates and bounds-checks a marked-state list.
std::vector<int> normalize_marked(std::vector<int> marked, int n);

}  // namespace walkbench
