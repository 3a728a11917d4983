#include "walkbench/szegedy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "walkbench/spectral.hpp"

namespace walkbench {

namespace {

double clamp_unit(double v) { return std::min(1.0, std::max(-1.0, v)); }

}  // namespace

Eigen::MatrixXd discriminant(const StochasticMatrix& Ptilde) {
  const int n = Ptilde.size();
  Eigen::MatrixXd d(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      d(j, k) = std::sqrt(Ptilde.entries(j, k) * Ptilde.entries(k, j));
    }
  }
  return d;
}

WalkOperator build_walk(const StochasticMatrix& P, const std::vector<int>& marked) {
  const auto& tol = tolerances();
  const int n = P.size();
  if (!P.symmetric) throw ValidationError("build_walk needs a symmetric chain");
  if (n < 2) throw ValidationError("build_walk needs at least 2 states");
  const long long dim_ll = static_cast<long long>(n) * n;
  if (dim_ll > kMaxWalkDim) {
    throw ValidationError("walk space dimension " + std::to_string(dim_ll) +
                          " exceeds the cap of " + std::to_string(kMaxWalkDim));
  }
  const int dim = static_cast<int>(dim_ll);
  const std::vector<int> m = normalize_marked(marked, n);

  WalkOperator walk;
  walk.n = n;
  walk.dim = dim;
  walk.marked = m;
  walk.quantized = m.empty() ? P : absorbing(P, m);

  // Isometry T: column y is |y> (x) |p_y>, entries sqrt of the y-th column of
  // the quantized chain. Columns are exactly orthogonal (disjoint supports).
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, n);
  for (int y = 0; y < n; ++y) {
    for (int z = 0; z < n; ++z) {
      T(y * n + z, y) = std::sqrt(walk.quantized.entries(z, y));
    }
  }
  walk.projector = T * T.transpose();

  Eigen::MatrixXd reflect = 2.0 * walk.projector;
  reflect.diagonal().array() -= 1.0;

  // Apply the register swap on the left: row (y, z) of U is row (z, y) of the
  // reflection.
  walk.U.resize(dim, dim);
  for (int y = 0; y < n; ++y) {
    for (int z = 0; z < n; ++z) {
      walk.U.row(y * n + z) = reflect.row(z * n + y);
    }
  }
  walk.W = walk.U * walk.U;

  if (m.size() == 1) {
    // |mu> = |x>|p_x> built from the ORIGINAL chain's column; this is the
    // direction whose reflection turns the plain walk into the marked one.
    const int x = m[0];
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim);
    for (int z = 0; z < n; ++z) mu(x * n + z) = std::sqrt(P.entries(z, x));
    walk.mu = std::move(mu);
  }

  // Construction self-tests (Frobenius bounds the spectral norm from above).
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim, dim);
  if ((walk.projector * walk.projector - walk.projector).norm() > tol.orthonormal) {
    throw SpectralTheoremError("walk projector is not idempotent");
  }
  if ((walk.U.transpose() * walk.U - id).norm() > tol.orthonormal) {
    throw SpectralTheoremError("walk operator lost orthogonality");
  }
  if ((walk.W.transpose() * walk.W - id).norm() > tol.orthonormal) {
    throw SpectralTheoremError("squared walk operator lost orthogonality");
  }
  return walk;
}

Eigen::VectorXd marked_start_state(const StochasticMatrix& P, const std::vector<int>& marked) {
  const int n = P.size();
  const std::vector<int> m = normalize_marked(marked, n);
  const Distribution pi = stationary(P);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n) * n);
  for (int y = 0; y < n; ++y) {
    if (std::binary_search(m.begin(), m.end(), y)) continue;
    const double w = std::sqrt(pi.probs(y));
    for (int z = 0; z < n; ++z) phi(y * n + z) = w * std::sqrt(P.entries(z, y));
  }
  return phi;
}

QuantumSpectrum quantum_spectrum(const WalkOperator& walk, const Eigen::VectorXd& input) {
  const auto& tol = tolerances();
  if (input.size() != walk.dim) throw ValidationError("input state dimension mismatch");
  if (!input.allFinite()) throw ValidationError("input state has a non-finite entry");
  const double norm2 = input.squaredNorm();
  if (std::sqrt(norm2) > 1.0 + tol.stochastic) {
    throw ValidationError("input state norm exceeds 1");
  }

  // Allowed phases: arccos of the discriminant spectrum; +1/-1 are always in
  // the admissible set (they absorb the swap-complement part of the space).
  const SpectralData dspec = eig_sym(discriminant(walk.quantized));
  std::vector<double> targets(dspec.eigenvalues.size());
  for (Eigen::Index i = 0; i < dspec.eigenvalues.size(); ++i) {
    targets[static_cast<size_t>(i)] = std::acos(clamp_unit(dspec.eigenvalues(i)));
  }

  QuantumSpectrum qs;
  qs.input_norm2 = norm2;

  // Complex eigenvalues drive the classification and the inclusion self-test.
  Eigen::EigenSolver<Eigen::MatrixXd> es(walk.U, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw SpectralTheoremError("eigensolver failed on U");
  const auto evs = es.eigenvalues();
  for (Eigen::Index i = 0; i < evs.size(); ++i) {
    const std::complex<double> w = evs(i);
    if (std::abs(std::abs(w) - 1.0) > tol.phase_match) {
      throw SpectralTheoremError("walk eigenvalue left the unit circle");
    }
    // Classify by real part with the same eigenvalue-at-1 cut the spectral
    // route applies to the discriminant, so the two routes agree on what
    // counts as a +1/-1 direction versus a conjugate pair.
    if (w.real() >= 1.0 - tol.reducible || w.real() <= -1.0 + tol.reducible) {
      continue;  // +1 / -1 buckets; amplitudes handled below
    }
    const double phase = std::abs(std::arg(w));
    double best = 1e300;
    for (double t : targets) best = std::min(best, std::abs(phase - t));
    if (best > tol.phase_selftest) {
      std::ostringstream os;
      os << "walk eigenphase " << phase << " matches no arccos of the discriminant "
         << "spectrum (closest miss " << best << ")";
      throw SpectralTheoremError(os.str());
    }
    if (w.imag() > 0.0) qs.phases.push_back(phase);  // one representative per pair
  }
  std::sort(qs.phases.begin(), qs.phases.end());

  // Amplitudes: the eigenbasis of (U + U^T)/2 is orthonormal and real, and its
  // eigenspace for cos(alpha) is exactly the invariant subspace of the pair
  // e^{+-i alpha} (eigenvalue +1/-1 spaces come through unchanged). Projections
  // of a real state onto those subspaces are therefore plain dot products.
  const Eigen::MatrixXd h = 0.5 * (walk.U + walk.U.transpose());
  const SpectralData hspec = eig_sym(h);

  struct Item {
    double phase;
    double amp;
  };
  std::vector<Item> items;
  for (Eigen::Index i = 0; i < hspec.eigenvalues.size(); ++i) {
    const double c = hspec.eigenvalues(i);
    const double proj = hspec.eigenvectors.col(i).dot(input);
    const double amp = proj * proj;
    if (c >= 1.0 - tol.reducible) {
      qs.amp_plus1 += amp;
    } else if (c <= -1.0 + tol.reducible) {
      qs.amp_minus1 += amp;
    } else {
      items.push_back({std::acos(clamp_unit(c)), amp});
    }
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return a.phase < b.phase; });
  for (const Item& it : items) {
    if (!qs.buckets.empty() && it.phase - qs.buckets.back().phase <= tol.phase_match) {
      qs.buckets.back().amp += it.amp;
      qs.buckets.back().pairs += 1;  // two basis vectors per pair; fixed below
    } else {
      qs.buckets.push_back(PhaseBucket{it.phase, 1, it.amp});
    }
  }
  for (PhaseBucket& b : qs.buckets) b.pairs = (b.pairs + 1) / 2;

  const double total = qs.amp_plus1 + qs.amp_minus1 +
                       [&] {
                         double s = 0.0;
                         for (const PhaseBucket& b : qs.buckets) s += b.amp;
                         return s;
                       }();
  if (std::abs(total - norm2) > tol.parseval) {
    throw SpectralTheoremError("bucket amplitudes failed the completeness identity");
  }
  return qs;
}

double qht_spectral(const StochasticMatrix& P, int x, std::vector<std::string>* warnings) {
  const auto& tol = tolerances();
  const int n = P.size();
  if (!P.symmetric) throw ValidationError("qht_spectral needs a symmetric chain");
  if (x < 0 || x >= n) throw ValidationError("target state out of range");

  const Distribution pi = stationary(P);
  const SubstochasticMatrix S = similarity_transform(P, pi, x);
  const SpectralData sd = overlaps(eig_sym(S.entries), truncate(pi, x));
  const Eigen::VectorXd& nu = *sd.overlaps;

  double value = 0.0;
  double lambda_min = 1.0;
  for (Eigen::Index j = 0; j < sd.eigenvalues.size(); ++j) {
    const double w2 = nu(j) * nu(j);
    const double lambda = sd.eigenvalues(j);
    lambda_min = std::min(lambda_min, lambda);
    if (w2 < tol.overlap_skip) continue;
    if (lambda >= 1.0 - tol.reducible) {
      throw DivergentPhaseError("deleted block eigenvalue at 1 carries overlap weight");
    }
    value += w2 / std::acos(clamp_unit(lambda));
  }
  if (warnings != nullptr && lambda_min <= 0.0) {
    std::ostringstream os;
    os << "deleted block eigenvalue " << lambda_min
       << " violates the positive-spectrum assumption; formula still evaluated";
    warnings->push_back(os.str());
  }
  return value;
}

double qht_fullspace(const StochasticMatrix& P, int x) {
  const auto& tol = tolerances();
  const WalkOperator walk = build_walk(P, {x});
  const Eigen::VectorXd phi = marked_start_state(P, {x});
  const QuantumSpectrum qs = quantum_spectrum(walk, phi);

  // The start state lives in the isometry's range, where +1 directions exist
  // exactly when the deleted block has an eigenvalue at 1. Weight there is the
  // divergent case, not a bucket.
  if (qs.amp_plus1 >= tol.overlap_skip) {
    throw DivergentPhaseError("walk +1 eigenspace carries start-state amplitude");
  }
  double value = 0.0;
  for (const PhaseBucket& b : qs.buckets) {
    if (b.amp < tol.overlap_skip) continue;
    if (b.phase < tol.phase_selftest) {
      throw DivergentPhaseError("walk eigenphase near 0 carries amplitude");
    }
    value += b.amp / b.phase;
  }
  // A block eigenvalue at -1 collapses its conjugate pair onto the single
  // point -1; its phase is exactly pi.
  if (qs.amp_minus1 >= tol.overlap_skip) value += qs.amp_minus1 / std::numbers::pi;
  return value;
}

SzegedyBound szegedy_bound(const StochasticMatrix& P, const std::vector<int>& marked) {
  const auto& tol = tolerances();
  const int n = P.size();
  const std::vector<int> m = normalize_marked(marked, n);
  if (m.empty()) throw ValidationError("marked set is empty");
  if (static_cast<int>(m.size()) >= n) throw ValidationError("marked set covers every state");
  if (!P.symmetric) throw ValidationError("szegedy_bound needs a symmetric chain");

  SzegedyBound out;
  out.p1_norm = sym_norm2(delete_states(P, m).entries);
  const double delta = spectral_gap(P);
  const double eps = static_cast<double>(m.size()) / n;
  out.gap_bound = 1.0 - delta * eps / 2.0;
  out.block_ok = out.p1_norm <= out.gap_bound + tol.block_slack;
  if (out.p1_norm >= 1.0) {
    throw BoundInapplicableError("unmarked block norm reaches 1; bound diverges");
  }
  out.qht_bound = std::sqrt(1.0 / (1.0 - out.p1_norm));
  return out;
}

PerturbedSzegedyBound szegedy_bound_perturbed(const StochasticMatrix& P,
                                              const NoiseMatrix& E,
                                              const std::vector<int>& marked) {
  const auto& tol = tolerances();
  const int n = P.size();
  if (E.size() != n) throw ValidationError("noise dimension mismatch");
  const std::vector<int> m = normalize_marked(marked, n);
  if (m.empty()) throw ValidationError("marked set is empty");
  if (static_cast<int>(m.size()) >= n) throw ValidationError("marked set covers every state");
  if (!P.symmetric) throw ValidationError("szegedy_bound_perturbed needs a symmetric chain");

  const double p1 = sym_norm2(delete_states(P, m).entries);
  const double delta = spectral_gap(P);
  const double eps = static_cast<double>(m.size()) / n;

  PerturbedSzegedyBound out;
  out.q1_norm_bound = std::min(p1 + E.norm2, 1.0 - (delta - E.norm2) * eps / 2.0);
  if (out.q1_norm_bound >= 1.0) {
    throw BoundInapplicableError("both block-norm bound branches reach 1");
  }
  out.qht_bound = std::sqrt(1.0 / (1.0 - out.q1_norm_bound));

  // Measured block norm of P + E as matrices; feasibility of the noise as a
  // stochastic perturbation is not this bound's concern.
  Eigen::MatrixXd qblock = P.entries + E.entries;
  std::vector<int> keep;
  for (int i = 0, mi = 0; i < n; ++i) {
    if (mi < static_cast<int>(m.size()) && m[mi] == i) {
      ++mi;
    } else {
      keep.push_back(i);
    }
  }
  Eigen::MatrixXd q1(keep.size(), keep.size());
  for (size_t r = 0; r < keep.size(); ++r) {
    for (size_t c = 0; c < keep.size(); ++c) q1(r, c) = qblock(keep[r], keep[c]);
  }
  out.q1_norm_actual = sym_norm2(q1);
  out.block_ok = out.q1_norm_actual <= out.q1_norm_bound + tol.block_slack;
  return out;
}

double annihilation_threshold(double delta, double epsilon) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ValidationError("annihilation_threshold: delta must lie in (0, 1]");
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ValidationError("annihilation_threshold: epsilon must lie in [0, 1]");
  }
  return delta * (1.0 - delta * epsilon);
}

double dpqht(const StochasticMatrix& P, const StochasticMatrix& Q, int x) {
  if (P.size() != Q.size()) throw ValidationError("dpqht: dimension mismatch");
  return qht_spectral(Q, x) - qht_spectral(P, x);
}

double dpqht_bound(double lambda1, double gamma, double noise_norm) {
  if (!(lambda1 > 0.0 && lambda1 < 1.0)) {
    throw ValidationError("dpqht_bound: lambda1 must lie in (0, 1)");
  }
  if (!(gamma >= 0.0 && gamma <= lambda1 + 1e-12)) {
    throw ValidationError("dpqht_bound: gamma must lie in [0, lambda1]");
  }
  if (!(noise_norm >= 0.0)) throw ValidationError("dpqht_bound: negative noise norm");
  if (noise_norm >= 1.0 - lambda1) {
    throw BoundInapplicableError("dpqht_bound: noise norm reaches 1 - lambda1");
  }
  return 1.0 / std::sqrt(1.0 - lambda1 - noise_norm) -
         1.0 / (2.0 * std::sqrt(1.0 - lambda1 + gamma));
}

double naive_dpqht_bound(double lambda1, double gamma, double noise_norm) {
  if (!(lambda1 > 0.0 && lambda1 < 1.0)) {
    throw ValidationError("naive_dpqht_bound: lambda1 must lie in (0, 1)");
  }
  if (!(gamma >= 0.0 && gamma <= lambda1 + 1e-12)) {
    throw ValidationError("naive_dpqht_bound: gamma must lie in [0, lambda1]");
  }
  if (!(noise_norm >= 0.0)) throw ValidationError("naive_dpqht_bound: negative noise norm");
  if (noise_norm >= 1.0 - lambda1) {
    throw BoundInapplicableError("naive_dpqht_bound: noise norm reaches 1 - lambda1");
  }
  return 1.0 / std::sqrt(1.0 - lambda1 - noise_norm) -
         1.0 / std::sqrt(1.0 - lambda1 + gamma);
}

}  // namespace walkbench
