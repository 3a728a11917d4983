#include "walkbench/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace walkbench {

double sym_norm2(const Eigen::MatrixXd& A) {
  if (A.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SpectralTheoremError("eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double op_norm2(const Eigen::MatrixXd& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  return svd.singularValues()(0);
}

namespace {

// Column comparison used inside eigenvalue tie groups: lexicographically
// DECREASING entries. This orientation leaves the identity matrix's
// eigenvectors at the identity, which pins the rule down uniquely.
bool lex_greater(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) > b(i);
  }
  return false;
}

void sign_normalize(Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

SpectralData eig_sym(const Eigen::MatrixXd& A) {
  const auto& tol = tolerances();
  const Eigen::Index n = A.rows();
  if (n < 1 || A.cols() != n) throw ValidationError("eig_sym input must be square");
  if (!A.allFinite()) throw ValidationError("eig_sym input has a non-finite entry");
  const double defect = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (defect > tol.orthonormal) {
    std::ostringstream os;
    os << "eig_sym input has symmetry defect " << defect;
    throw ValidationError(os.str());
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
  if (es.info() != Eigen::Success) throw SpectralTheoremError("eigensolver failed");

  // Eigen returns ascending order; flip to descending.
  SpectralData out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();

  for (Eigen::Index j = 0; j < n; ++j) sign_normalize(out.eigenvectors.col(j));

  // Resolve near-degenerate runs deterministically.
  Eigen::Index lo = 0;
  while (lo < n) {
    Eigen::Index hi = lo;
    while (hi + 1 < n &&
           std::abs(out.eigenvalues(hi) - out.eigenvalues(hi + 1)) <= tol.tie_break) {
      ++hi;
    }
    if (hi > lo) {
      std::vector<Eigen::Index> order(hi - lo + 1);
      std::iota(order.begin(), order.end(), lo);
      std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return lex_greater(out.eigenvectors.col(a), out.eigenvectors.col(b));
      });
      Eigen::MatrixXd vecs(n, hi - lo + 1);
      Eigen::VectorXd vals(hi - lo + 1);
      for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(order.size()); ++i) {
        vecs.col(i) = out.eigenvectors.col(order[i]);
        vals(i) = out.eigenvalues(order[i]);
      }
      out.eigenvectors.middleCols(lo, hi - lo + 1) = vecs;
      out.eigenvalues.segment(lo, hi - lo + 1) = vals;
    }
    lo = hi + 1;
  }

  // Basis self-tests; Frobenius bounds the spectral norm from above.
  const double ortho =
      (out.eigenvectors.transpose() * out.eigenvectors - Eigen::MatrixXd::Identity(n, n))
          .norm();
  if (ortho > tol.orthonormal) {
    throw SpectralTheoremError("eigenvector basis lost orthonormality");
  }
  const double scale = std::max(out.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  const double recon = (0.5 * (A + A.transpose()) -
                        out.eigenvectors * out.eigenvalues.asDiagonal() *
                            out.eigenvectors.transpose())
                           .norm();
  if (recon > tol.reconstruction * scale) {
    throw SpectralTheoremError("eigendecomposition failed the reconstruction check");
  }

  out.gamma = out.eigenvalues(0) - out.eigenvalues(n - 1);
  return out;
}

double spectral_gap(const StochasticMatrix& P) {
  if (!P.symmetric) throw ValidationError("spectral gap needs a symmetric chain");
  if (P.size() < 2) throw ValidationError("spectral gap needs at least 2 states");
  const SpectralData sd = eig_sym(P.entries);
  return 1.0 - sd.eigenvalues(1);
}

WeylReport weyl_check(const StochasticMatrix& P, const StochasticMatrix& Q) {
  const auto& tol = tolerances();
  if (P.size() != Q.size()) throw ValidationError("weyl_check: dimension mismatch");
  if (!P.symmetric || !Q.symmetric) throw ValidationError("weyl_check: asymmetric input");
  if (P.size() < 2) throw ValidationError("weyl_check needs at least 2 states");

  const Eigen::MatrixXd E = Q.entries - P.entries;
  const SpectralData sp = eig_sym(P.entries);
  const SpectralData sq = eig_sym(Q.entries);

  WeylReport rep;
  rep.noise_norm = sym_norm2(E);
  rep.max_eig_diff = (sp.eigenvalues - sq.eigenvalues).cwiseAbs().maxCoeff();
  rep.gap_p = 1.0 - sp.eigenvalues(1);
  rep.gap_q = 1.0 - sq.eigenvalues(1);
  rep.sandwich_lo = rep.gap_p - rep.noise_norm;
  rep.sandwich_hi = rep.gap_p + rep.noise_norm;
  rep.weyl_ok = rep.max_eig_diff <= rep.noise_norm + tol.weyl;
  rep.sandwich_ok = rep.gap_q >= rep.sandwich_lo - tol.weyl &&
                    rep.gap_q <= rep.sandwich_hi + tol.weyl;
  return rep;
}

SpectralData overlaps(SpectralData data, const Eigen::VectorXd& pi_minus) {
  const auto& tol = tolerances();
  if (pi_minus.size() != data.eigenvectors.rows()) {
    throw ValidationError("overlaps: truncated distribution size mismatch");
  }
  if (!pi_minus.allFinite() || pi_minus.minCoeff() < 0.0) {
    throw ValidationError("overlaps: truncated distribution must be nonnegative");
  }
  const double mass = pi_minus.sum();
  if (mass > 1.0 + tol.stochastic) {
    throw ValidationError("overlaps: truncated distribution sums past 1");
  }
  const Eigen::VectorXd nu = data.eigenvectors.transpose() * pi_minus.cwiseSqrt();
  if (std::abs(nu.squaredNorm() - mass) > tol.parseval) {
    throw SpectralTheoremError("overlap vector failed the Parseval identity");
  }
  data.overlaps = nu;
  return data;
}

}  // namespace walkbench
