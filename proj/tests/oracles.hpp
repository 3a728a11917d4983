#pragma once

// Reference values and reference computations for the test suites. Everything
// here reaches its answer by a route independent of the library code under
// test: closed forms, partial sums, or high-precision constants frozen from a
// multiprecision evaluation.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "walkbench/chain.hpp"

namespace oracles {

// arccos(2/3), 30 digits
inline constexpr double kArccosTwoThirds = 0.841068670567930255776525031826;

// Quantum hitting time of any state of the complete 3-chain: the deleted
// block (1/3) J_2 has eigenvalues {2/3, 0} with all overlap weight 2/3 on the
// first, so QHT = (2/3)/arccos(2/3), evaluated at 30 digits.
inline constexpr double kQhtComplete3 = 0.792642372728615704094164226012;

// 3/(2*pi): quantum hitting time of either state of the complete 2-chain.
inline constexpr double kQhtComplete2 = 0.477464829275686007306651290118;

// dpht_bound(0.9, 0.5, 0.05) = 1/0.05 - 1/0.6 and the zero-noise variant.
inline constexpr double kDphtBoundA = 18.3333333333333333333333333333;
inline constexpr double kDphtBoundB = 8.33333333333333333333333333333;

// dpqht_bound(0.9, 0.5, 0.05), dpqht_bound(0.9, 0.5, 0),
// naive_dpqht_bound(0.9, 0.5, 0.05), and the halved subtracted term
// 1/(2*sqrt(0.6)), each at 30 digits.
inline constexpr double kDpqhtBoundA = 3.82663873063167657862180310417;
inline constexpr double kDpqhtBoundB = 2.51678043580047651780234931114;
inline constexpr double kNaiveBoundA = 3.18114150626377376442525887087;
inline constexpr double kHalfTerm = 0.645497224367902814196544233297;

inline constexpr double kSqrt2 = 1.41421356237309504880168872421;
inline constexpr double kSqrt5 = 2.23606797749978969640917366873;

// Spectrum of the lazy cycle: hold + (1 - hold) * cos(2 pi k / n). Also valid
// for n = 2, where the two neighbor contributions land on the same state.
inline std::vector<double> lazy_cycle_spectrum(int n, double hold) {
  std::vector<double> eigs(n);
  for (int k = 0; k < n; ++k) {
    eigs[k] = hold + (1.0 - hold) * std::cos(2.0 * std::numbers::pi * k / n);
  }
  return eigs;
}

// Hitting time by direct mass evolution: HT = sum_{t>=0} ||P_{-x}^t pi_{-x}||_1
// using only matrix-vector products. The tail after truncation is bounded by
// the last term times rho/(1-rho) with rho the measured one-step contraction,
// so the cutoff below keeps the truncation error well under 1e-12.
inline double ht_series(const Eigen::MatrixXd& chain, int x,
                        const Eigen::VectorXd& start, int max_steps = 2000000) {
  const Eigen::Index n = chain.rows();
  Eigen::MatrixXd minor_block(n - 1, n - 1);
  Eigen::VectorXd mass(n - 1);
  for (Eigen::Index j = 0, r = 0; j < n; ++j) {
    if (j == x) continue;
    mass(r) = start(j);
    for (Eigen::Index k = 0, c = 0; k < n; ++k) {
      if (k == x) continue;
      minor_block(r, c) = chain(j, k);
      ++c;
    }
    ++r;
  }

  double total = 0.0;
  double term = mass.sum();
  for (int t = 0; t < max_steps; ++t) {
    total += term;
    mass = minor_block * mass;
    const double next = mass.sum();
    if (next < 1e-16 && next < term) {
      const double rho = term > 0.0 ? next / term : 0.0;
      if (rho < 1.0) total += next / (1.0 - rho);
      return total;
    }
    term = next;
  }
  throw std::runtime_error("ht_series did not converge");
}

// Uniform-start convenience for the symmetric (doubly stochastic) families.
inline double ht_series(const Eigen::MatrixXd& chain, int x, int max_steps = 2000000) {
  const Eigen::Index n = chain.rows();
  const Eigen::VectorXd uniform =
      Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return ht_series(chain, x, uniform, max_steps);
}

// Stationary distribution by power iteration, for cross-checking the library's
// closed-form/solver paths.
inline Eigen::VectorXd power_stationary(const Eigen::MatrixXd& chain,
                                        int iters = 200000) {
  const Eigen::Index n = chain.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int t = 0; t < iters; ++t) {
    Eigen::VectorXd next = chain * v;
    next /= next.sum();
    if ((next - v).cwiseAbs().maxCoeff() < 1e-14) return next;
    v = next;
  }
  return v;
}

// A reversible but non-symmetric column-stochastic chain for exercising the
// similarity transform: a 3-state birth-death chain.
inline Eigen::MatrixXd birth_death3() {
  Eigen::MatrixXd p(3, 3);
  // columns: from-state; stay/up/down probabilities chosen to keep it ergodic
  p << 0.5, 0.2, 0.0,
       0.5, 0.5, 0.4,
       0.0, 0.3, 0.6;
  return p;
}

}  // namespace oracles
