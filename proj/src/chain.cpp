#include "walkbench/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "walkbench/rng.hpp"

namespace walkbench {

Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

namespace {

// Raises B to the e-th power by repeated squaring. Entries stay in [0, 1]
// for B = (I+P)/2, so no overflow concerns.
Eigen::MatrixXd mat_pow(Eigen::MatrixXd B, int e) {
  const auto n = B.rows();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(n, n);
  while (e > 0) {
    if (e & 1) acc = acc * B;
    e >>= 1;
    if (e > 0) B = B * B;
  }
  return acc;
}

std::string entry_name(Eigen::Index j, Eigen::Index k) {
  std::ostringstream os;
  os << "(" << j << "," << k << ")";
  return os.str();
}

}  // namespace

StochasticMatrix make_stochastic(Eigen::MatrixXd entries, bool symmetric,
                                 std::string meta) {
  const auto& tol = tolerances();
  const Eigen::Index n = entries.rows();
  if (n < 1 || entries.cols() != n) {
    throw ValidationError("transition matrix must be square and nonempty");
  }
  if (n > kMaxChainSize) {
    throw ValidationError("chain size " + std::to_string(n) + " exceeds the cap of " +
                          std::to_string(kMaxChainSize));
  }
  if (!entries.allFinite()) {
    throw ValidationError("transition matrix has a non-finite entry");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = entries(j, k);
      if (v < 0.0) {
        throw ValidationError("column " + std::to_string(k) + ": negative entry " +
                              entry_name(j, k));
      }
      if (v > 1.0 + tol.stochastic) {
        throw ValidationError("column " + std::to_string(k) + ": entry " +
                              entry_name(j, k) + " exceeds 1");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol.stochastic) {
      std::ostringstream os;
      os << "column " << k << ": sums to " << sum << ", not 1";
      throw ValidationError(os.str());
    }
  }
  if (symmetric) {
    const double defect = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (defect > tol.stochastic) {
      std::ostringstream os;
      os << "matrix flagged symmetric but has symmetry defect " << defect;
      throw ValidationError(os.str());
    }
  }
  StochasticMatrix P;
  P.entries = std::move(entries);
  P.symmetric = symmetric;
  P.meta = std::move(meta);
  return P;
}

Distribution make_distribution(Eigen::VectorXd probs) {
  const auto& tol = tolerances();
  if (probs.size() < 1 || !probs.allFinite()) {
    throw ValidationError("distribution must be a nonempty finite vector");
  }
  if (probs.minCoeff() < 0.0) {
    throw ValidationError("distribution has a negative entry");
  }
  if (std::abs(probs.sum() - 1.0) > tol.stochastic) {
    throw ValidationError("distribution does not sum to 1");
  }
  return Distribution{std::move(probs)};
}

ChainFamily parse_family(const std::string& name) {
  if (name == "complete") return ChainFamily::Complete;
  if (name == "lazy-cycle") return ChainFamily::LazyCycle;
  if (name == "lazy-path") return ChainFamily::LazyPath;
  if (name == "random-symmetric") return ChainFamily::RandomSymmetric;
  throw ValidationError("unknown chain family '" + name + "'");
}

std::string family_name(ChainFamily family) {
  switch (family) {
    case ChainFamily::Complete: return "complete";
    case ChainFamily::LazyCycle: return "lazy-cycle";
    case ChainFamily::LazyPath: return "lazy-path";
    case ChainFamily::RandomSymmetric: return "random-symmetric";
  }
  throw ValidationError("unknown chain family value");
}

namespace {

Eigen::MatrixXd gen_complete(int n) {
  return Eigen::MatrixXd::Constant(n, n, 1.0 / n);
}

Eigen::MatrixXd gen_lazy_cycle(int n, double h) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double step = (1.0 - h) / 2.0;
  for (int k = 0; k < n; ++k) {
    m(k, k) += h;
    m((k + 1) % n, k) += step;       // accumulate: for n = 2 both neighbors coincide
    m((k - 1 + n) % n, k) += step;
  }
  return m;
}

Eigen::MatrixXd gen_lazy_path(int n, double h) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double step = (1.0 - h) / 2.0;
  for (int k = 0; k + 1 < n; ++k) {
    m(k + 1, k) = step;
    m(k, k + 1) = step;
  }
  // Endpoints keep the untaken neighbor mass, which keeps the matrix symmetric
  // (doubly stochastic) instead of the plain reflecting walk.
  for (int k = 0; k < n; ++k) m(k, k) = 1.0 - m.col(k).sum();
  return m;
}

Eigen::MatrixXd gen_random_symmetric(int n, std::uint64_t seed) {
  const auto& tol = tolerances();
  Rng rng(stream_seed(seed, 0));
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) g(j, k) = rng.uniform(0.1, 1.0);
  }
  g = 0.5 * (g + g.transpose()).eval();

  // Symmetric Sinkhorn: column normalization followed by re-symmetrization,
  // iterated until the matrix is doubly stochastic to `sinkhorn` tolerance.
  constexpr int kMaxSweeps = 10000;
  double err = 1.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Eigen::VectorXd colsums = g.colwise().sum();
    err = (colsums.array() - 1.0).abs().maxCoeff();
    if (err <= tol.sinkhorn) break;
    g = (g * colsums.cwiseInverse().asDiagonal()).eval();
    g = 0.5 * (g + g.transpose()).eval();
  }
  if (err > tol.sinkhorn) {
    throw GenerationError("doubly stochastic normalization did not reach " +
                          std::to_string(tol.sinkhorn) + " within sweep cap");
  }
  // Lazify so the spectrum is positive: entries are strictly positive, hence
  // |lambda| < 1 for everything below the top eigenvalue.
  g = (0.5 * (Eigen::MatrixXd::Identity(n, n) + g)).eval();
  return g;
}

}  // namespace

StochasticMatrix make_chain(ChainFamily family, int n, const ChainParams& params) {
  if (n < 2) throw ValidationError("chain needs at least 2 states");
  if (n > kMaxChainSize) {
    throw ValidationError("chain size exceeds the cap of " + std::to_string(kMaxChainSize));
  }
  if (!(params.hold >= 0.0 && params.hold < 1.0)) {
    throw ValidationError("hold probability must lie in [0, 1)");
  }
  Eigen::MatrixXd entries;
  std::ostringstream meta;
  switch (family) {
    case ChainFamily::Complete:
      entries = gen_complete(n);
      meta << "complete(n=" << n << ")";
      break;
    case ChainFamily::LazyCycle:
      entries = gen_lazy_cycle(n, params.hold);
      meta << "lazy-cycle(n=" << n << ",h=" << params.hold << ")";
      break;
    case ChainFamily::LazyPath:
      entries = gen_lazy_path(n, params.hold);
      meta << "lazy-path(n=" << n << ",h=" << params.hold << ")";
      break;
    case ChainFamily::RandomSymmetric:
      entries = gen_random_symmetric(n, params.seed);
      meta << "random-symmetric(n=" << n << ",seed=" << params.seed << ")";
      break;
  }
  return make_stochastic(std::move(entries), /*symmetric=*/true, meta.str());
}

Distribution stationary(const StochasticMatrix& P) {
  const int n = P.size();
  if (n < 1) throw ValidationError("empty chain");

  // Ergodicity gate: ((I+P)/2)^n must be strictly positive. The lazified power
  // is insensitive to periodicity, so this tests exactly reachability.
  const Eigen::MatrixXd reach =
      mat_pow(0.5 * (Eigen::MatrixXd::Identity(n, n) + P.entries), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!(reach(j, k) > 0.0)) {
        throw ReducibilityError("chain is not ergodic: state " + std::to_string(j) +
                                " is unreachable from state " + std::to_string(k));
      }
    }
  }

  if (P.symmetric) {
    // Uniform is exact for doubly stochastic chains; return it without solving.
    return Distribution{Eigen::VectorXd::Constant(n, 1.0 / n)};
  }

  // Solve (P - I) pi = 0 with the first row replaced by the normalization.
  Eigen::MatrixXd A = P.entries - Eigen::MatrixXd::Identity(n, n);
  A.row(0).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 1.0;
  Eigen::VectorXd pi = A.partialPivLu().solve(b);

  const auto& tol = tolerances();
  if (!pi.allFinite() || (P.entries * pi - pi).cwiseAbs().maxCoeff() > tol.stationary) {
    throw ReducibilityError("stationary solve failed the residual check");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi(i) < -tol.stochastic) {
      throw ReducibilityError("stationary distribution has a negative entry");
    }
    if (pi(i) < 0.0) pi(i) = 0.0;
  }
  return Distribution{std::move(pi)};
}

std::vector<int> normalize_marked(std::vector<int> marked, int n) {
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  for (int m : marked) {
    if (m < 0 || m >= n) {
      throw ValidationError("marked state " + std::to_string(m) + " out of range for n = " +
                            std::to_string(n));
    }
  }
  return marked;
}

SubstochasticMatrix delete_states(const StochasticMatrix& P, const std::vector<int>& marked) {
  const int n = P.size();
  const std::vector<int> m = normalize_marked(marked, n);
  if (m.empty()) throw ValidationError("deletion set is empty");
  if (static_cast<int>(m.size()) >= n) throw ValidationError("deletion set covers every state");

  std::vector<int> keep;
  keep.reserve(n - m.size());
  for (int i = 0, mi = 0; i < n; ++i) {
    if (mi < static_cast<int>(m.size()) && m[mi] == i) {
      ++mi;
    } else {
      keep.push_back(i);
    }
  }
  const int k = static_cast<int>(keep.size());
  Eigen::MatrixXd minor(k, k);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) minor(r, c) = P.entries(keep[r], keep[c]);
  }
  return SubstochasticMatrix{std::move(minor), m, n};
}

StochasticMatrix absorbing(const StochasticMatrix& P, const std::vector<int>& marked) {
  const int n = P.size();
  const std::vector<int> m = normalize_marked(marked, n);
  if (m.empty()) throw ValidationError("marked set is empty");
  if (static_cast<int>(m.size()) >= n) throw ValidationError("marked set covers every state");

  Eigen::MatrixXd entries = P.entries;
  for (int k : m) {
    entries.col(k).setZero();
    entries(k, k) = 1.0;
  }
  const double defect = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  const bool symmetric = defect <= tolerances().stochastic;
  return make_stochastic(std::move(entries), symmetric, P.meta + "+absorbing");
}

StochasticMatrix lazify(const StochasticMatrix& P) {
  const int n = P.size();
  Eigen::MatrixXd entries = 0.5 * (Eigen::MatrixXd::Identity(n, n) + P.entries);
  return make_stochastic(std::move(entries), P.symmetric, P.meta + "+lazy");
}

Eigen::VectorXd truncate(const Distribution& pi, int x) {
  const int n = pi.size();
  if (x < 0 || x >= n) throw ValidationError("state index out of range");
  Eigen::VectorXd out(n - 1);
  for (int i = 0, o = 0; i < n; ++i) {
    if (i != x) out(o++) = pi.probs(i);
  }
  return out;
}

SubstochasticMatrix similarity_transform(const StochasticMatrix& P,
                                         const Distribution& pi, int x) {
  const int n = P.size();
  if (pi.size() != n) throw ValidationError("distribution size does not match chain");
  if (x < 0 || x >= n) throw ValidationError("state index out of range");
  for (int i = 0; i < n; ++i) {
    if (i != x && !(pi.probs(i) > 0.0)) {
      throw ValidationError("stationary mass of retained state " + std::to_string(i) +
                            " is not positive");
    }
  }
  SubstochasticMatrix minor = delete_states(P, {x});
  const Eigen::VectorXd pik = truncate(pi, x);
  const int m = minor.size();
  // S(j,k) = P(j,k) * sqrt(pi_k / pi_j): the conjugation that symmetrizes a
  // reversible COLUMN-stochastic block. For uniform pi the ratio is exactly 1
  // and the minor passes through bit-identically.
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      minor.entries(j, k) *= std::sqrt(pik(k) / pik(j));
    }
  }
  return minor;
}

}  // namespace walkbench
