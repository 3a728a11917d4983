#include "walkbench/perturb.hpp"

#include <cmath>
#include <sstream>

#include "walkbench/rng.hpp"
#include "walkbench/spectral.hpp"

namespace walkbench {

namespace {

// Orthogonal projection of a symmetric matrix onto {M : M = M^T, M*1 = 0}.
// Subtracting u 1^T + 1 u^T with the right u zeroes every row/column sum in a
// single exact pass.
Eigen::MatrixXd project_zero_sums(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  const Eigen::VectorXd rowsums = g.rowwise().sum();
  const double total = rowsums.sum();
  const double mean = total / (2.0 * n);
  Eigen::VectorXd u = (rowsums.array() - mean) / static_cast<double>(n);
  Eigen::MatrixXd e = g;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) e(j, k) -= u(j) + u(k);
  }
  return e;
}

}  // namespace

NoiseMatrix make_noise(Eigen::MatrixXd entries, std::uint64_t seed) {
  const auto& tol = tolerances();
  const Eigen::Index n = entries.rows();
  if (n < 1 || entries.cols() != n) throw ValidationError("noise matrix must be square");
  if (!entries.allFinite()) throw ValidationError("noise matrix has a non-finite entry");
  const double sym_defect = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (sym_defect > tol.stochastic) {
    std::ostringstream os;
    os << "noise matrix has symmetry defect " << sym_defect;
    throw ValidationError(os.str());
  }
  const double colsum_defect = entries.colwise().sum().cwiseAbs().maxCoeff();
  if (colsum_defect > tol.stochastic) {
    std::ostringstream os;
    os << "noise matrix has column-sum defect " << colsum_defect;
    throw ValidationError(os.str());
  }
  NoiseMatrix e;
  e.norm2 = sym_norm2(entries);
  e.entries = std::move(entries);
  e.seed = seed;
  return e;
}

NoiseMatrix sample_noise(const StochasticMatrix& P, double target_norm,
                         std::uint64_t seed) {
  const int n = P.size();
  if (!P.symmetric) throw ValidationError("sample_noise needs a symmetric chain");
  if (!(target_norm >= 0.0) || !std::isfinite(target_norm)) {
    throw ValidationError("target norm must be finite and nonnegative");
  }
  if (target_norm == 0.0) {
    NoiseMatrix zero;
    zero.entries = Eigen::MatrixXd::Zero(n, n);
    zero.norm2 = 0.0;
    zero.seed = seed;
    return zero;
  }

  Rng rng(stream_seed(seed, 1));
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) g(j, k) = rng.uniform(-1.0, 1.0);
  }
  g = 0.5 * (g + g.transpose()).eval();
  g = project_zero_sums(g);

  const double raw_norm = sym_norm2(g);
  if (!(raw_norm > 1e-300)) {
    throw GenerationError("degenerate noise draw; retry with another seed");
  }
  Eigen::MatrixXd e = g * (target_norm / raw_norm);

  // Halve until P + E is entrywise nonnegative. Exact powers of two keep the
  // direction and only rescale the norm.
  constexpr int kMaxHalvings = 60;
  int halvings = 0;
  while ((P.entries + e).minCoeff() < 0.0 && halvings < kMaxHalvings) {
    e *= 0.5;
    ++halvings;
  }
  if ((P.entries + e).minCoeff() < 0.0) {
    Eigen::Index jmin = 0, kmin = 0;
    (P.entries + e).minCoeff(&jmin, &kmin);
    std::ostringstream os;
    os << "noise of norm " << target_norm << " infeasible: entry (" << jmin << ","
       << kmin << ") stays negative after " << kMaxHalvings << " halvings";
    throw FeasibilityError(os.str());
  }

  NoiseMatrix out;
  out.norm2 = sym_norm2(e);
  // The achieved norm must stay within [0.9 * target, target]; a halving lands
  // at half the target, so any shrink at all means the request was infeasible.
  if (out.norm2 < 0.9 * target_norm) {
    const Eigen::MatrixXd at_target = P.entries + g * (target_norm / raw_norm);
    Eigen::Index jmin = 0, kmin = 0;
    const double worst = at_target.minCoeff(&jmin, &kmin);
    std::ostringstream os;
    os << "noise of norm " << target_norm << " infeasible: entry (" << jmin << ","
       << kmin << ") of P + E would be " << worst
       << "; the feasible shrink leaves the [0.9, 1] target window";
    throw FeasibilityError(os.str());
  }
  out.entries = std::move(e);
  out.seed = seed;
  return out;
}

StochasticMatrix apply_noise(const StochasticMatrix& P, const NoiseMatrix& E) {
  const auto& tol = tolerances();
  if (P.size() != E.size()) throw ValidationError("apply_noise: dimension mismatch");

  Eigen::MatrixXd q = P.entries + E.entries;
  std::vector<Eigen::Index> touched;
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    bool clipped = false;
    for (Eigen::Index j = 0; j < q.rows(); ++j) {
      const double v = q(j, k);
      if (v < -tol.clip_dust) {
        std::ostringstream os;
        os << "perturbed entry (" << j << "," << k << ") = " << v
           << " is below the dust threshold";
        throw ValidationError(os.str());
      }
      if (v < 0.0) {
        q(j, k) = 0.0;
        clipped = true;
      }
    }
    if (clipped) touched.push_back(k);
  }
  // Only columns that lost dust get renormalized; untouched columns pass
  // through bit-identically (so E = 0 returns exactly P).
  for (Eigen::Index k : touched) {
    const double sum = q.col(k).sum();
    if (sum > 0.0) q.col(k) /= sum;
  }
  const bool symmetric = P.symmetric;
  return make_stochastic(std::move(q), symmetric, P.meta + "+noise");
}

}  // namespace walkbench
