#pragma once

#include <Eigen/Dense>
#include <optional>

#include "walkbench/chain.hpp"
#include "walkbench/common.hpp"

namespace walkbench {

// Eigendecomposition of a symmetric matrix with a deterministic ordering
// contract: eigenvalues descending; each eigenvector's first nonzero entry
// positive; within a tie group (consecutive gaps <= tie_break) pairs are
// ordered by lexicographically decreasing eigenvector entries, which keeps the
// identity matrix's eigenvectors at the identity.
struct SpectralData {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns, column j <-> eigenvalues[j]
  std::optional<Eigen::VectorXd> overlaps;  // nu_j, filled by overlaps()
  double gamma = 0.0;            // eigenvalues[0] - eigenvalues[last]
};

SpectralData eig_sym(const Eigen::MatrixXd& A);

// delta = 1 - lambda_2 of a symmetric chain.
double spectral_gap(const StochasticMatrix& P);

struct WeylReport {
  double noise_norm = 0.0;    // ||Q - P||_2
  double max_eig_diff = 0.0;  // max_i |lambda_i(P) - lambda_i(Q)|, both descending
  double gap_p = 0.0;         // delta
  double gap_q = 0.0;         // Delta
  double sandwich_lo = 0.0;   // delta - noise_norm
  double sandwich_hi = 0.0;   // delta + noise_norm
  bool weyl_ok = false;       // max_eig_diff <= noise_norm + weyl slack
  bool sandwich_ok = false;   // sandwich_lo - slack <= Delta <= sandwich_hi + slack
};

// Pairs sorted spectra of two symmetric chains and checks the Weyl bound and
// the spectral-gap sandwich.
WeylReport weyl_check(const StochasticMatrix& P, const StochasticMatrix& Q);

// nu_j = <v_j, sqrt(pi_minus)> for each eigenvector; verifies the Parseval
// identity sum(nu^2) = sum(pi_minus) before returning.
SpectralData overlaps(SpectralData data, const Eigen::VectorXd& pi_minus);

// max |eigenvalue| of a (numerically) symmetric matrix.
double sym_norm2(const Eigen::MatrixXd& A);

// Largest singular value of an arbitrary matrix.
double op_norm2(const Eigen::MatrixXd& A);

}  // namespace walkbench
