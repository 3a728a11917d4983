#include "walkbench/hitting.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "walkbench/rng.hpp"
#include "walkbench/spectral.hpp"

namespace walkbench {

std::string method_name(HitMethod m) {
  switch (m) {
    case HitMethod::Resolvent: return "resolvent";
    case HitMethod::Spectral: return "spectral";
    case HitMethod::MonteCarlo: return "montecarlo";
  }
  return "unknown";
}

HittingReport ht_resolvent(const StochasticMatrix& P, int x) {
  const auto& tol = tolerances();
  const int n = P.size();
  if (x < 0 || x >= n) throw ValidationError("target state out of range");

  const Distribution pi = stationary(P);  // also runs the ergodicity gate
  const SubstochasticMatrix minor = delete_states(P, {x});
  const Eigen::VectorXd pim = truncate(pi, x);
  const int m = minor.size();

  // Columns hold departure states, so the per-start expectations t_k = 1 +
  // sum_j Pr(k->j) t_j solve the transposed system (I - B^T) t = 1.
  const Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(m, m) - minor.entries.transpose();
  const Eigen::VectorXd u = Eigen::VectorXd::Ones(m);
  const Eigen::VectorXd y = A.partialPivLu().solve(u);
  if (!y.allFinite() || (A * y - u).cwiseAbs().maxCoeff() > tol.stationary * (1.0 + y.cwiseAbs().maxCoeff())) {
    throw ReducibilityError("I - P_{-x} is numerically singular; chain nearly reducible");
  }

  HittingReport rep;
  rep.method = HitMethod::Resolvent;
  rep.value = pim.dot(y);
  return rep;
}

HittingReport ht_spectral(const StochasticMatrix& P, int x) {
  const auto& tol = tolerances();
  const int n = P.size();
  if (x < 0 || x >= n) throw ValidationError("target state out of range");

  const Distribution pi = stationary(P);
  const SubstochasticMatrix S = similarity_transform(P, pi, x);
  SpectralData sd = overlaps(eig_sym(S.entries), truncate(pi, x));

  HittingReport rep;
  rep.method = HitMethod::Spectral;
  const Eigen::VectorXd& nu = *sd.overlaps;
  double value = 0.0;
  for (Eigen::Index j = 0; j < sd.eigenvalues.size(); ++j) {
    const double lambda = sd.eigenvalues(j);
    if (lambda >= 1.0 - tol.reducible) {
      throw ReducibilityError("deleted block has an eigenvalue at 1");
    }
    value += nu(j) * nu(j) / (1.0 - lambda);
  }
  const double lambda_min = sd.eigenvalues(sd.eigenvalues.size() - 1);
  if (lambda_min <= 0.0) {
    std::ostringstream os;
    os << "deleted block eigenvalue " << lambda_min
       << " violates the positive-spectrum assumption; formula still evaluated";
    rep.warnings.push_back(os.str());
  }
  rep.value = value;
  return rep;
}

HittingReport ht_montecarlo(const StochasticMatrix& P, int x, long long trials,
                            std::uint64_t seed) {
  const int n = P.size();
  if (x < 0 || x >= n) throw ValidationError("target state out of range");
  if (trials < 100) throw ValidationError("Monte Carlo needs at least 100 trials");

  const Distribution pi = stationary(P);

  // Column-wise cumulative transition table plus the start-state table; a
  // uniform draw walks each by linear scan (n is small).
  Eigen::MatrixXd ccdf(n, n);
  for (int k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += P.entries(j, k);
      ccdf(j, k) = acc;
    }
    ccdf(n - 1, k) = 1.0;  // guard against trailing rounding
  }
  Eigen::VectorXd scdf(n);
  {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += pi.probs(i);
      scdf(i) = acc;
    }
    scdf(n - 1) = 1.0;
  }
  const auto pick = [n](const double* cdf, double u) {
    for (int i = 0; i < n; ++i) {
      if (u < cdf[i]) return i;
    }
    return n - 1;
  };

  // Fixed-order chunked reduction: trial t always lands in chunk t / chunk
  // size, and chunks combine in index order, so a future parallel version
  // reproduces these exact sums.
  std::vector<double> chunk_sum, chunk_sq;
  double cur_sum = 0.0, cur_sq = 0.0;
  long long in_chunk = 0;
  long long total_steps = 0;

  for (long long t = 0; t < trials; ++t) {
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(t)));
    double sample = 0.0;
    int cur = pick(scdf.data(), rng.uniform());
    if (cur != x) {
      long long steps = 0;
      while (true) {
        cur = pick(ccdf.col(cur).data(), rng.uniform());
        ++steps;
        ++total_steps;
        if (cur == x) break;
        if (total_steps >= kMonteCarloStepCap) {
          throw ReducibilityError("Monte Carlo exceeded the step budget; chain nearly reducible");
        }
      }
      sample = static_cast<double>(steps);
    }
    cur_sum += sample;
    cur_sq += sample * sample;
    if (++in_chunk == kMonteCarloChunk) {
      chunk_sum.push_back(cur_sum);
      chunk_sq.push_back(cur_sq);
      cur_sum = cur_sq = 0.0;
      in_chunk = 0;
    }
  }
  if (in_chunk > 0) {
    chunk_sum.push_back(cur_sum);
    chunk_sq.push_back(cur_sq);
  }
  double sum = 0.0, sq = 0.0;
  for (double v : chunk_sum) sum += v;
  for (double v : chunk_sq) sq += v;

  const double mean = sum / static_cast<double>(trials);
  const double var =
      std::max(0.0, (sq - static_cast<double>(trials) * mean * mean) /
                        static_cast<double>(trials - 1));

  HittingReport rep;
  rep.method = HitMethod::MonteCarlo;
  rep.value = mean;
  rep.std_error = std::sqrt(var / static_cast<double>(trials));
  rep.trials = trials;
  return rep;
}

double dpht(const StochasticMatrix& P, const StochasticMatrix& Q, int x) {
  if (P.size() != Q.size()) throw ValidationError("dpht: dimension mismatch");
  return ht_spectral(Q, x).value - ht_spectral(P, x).value;
}

double dpht_bound(double lambda1, double gamma, double noise_norm) {
  if (!(lambda1 > 0.0 && lambda1 < 1.0)) {
    throw ValidationError("dpht_bound: lambda1 must lie in (0, 1)");
  }
  if (!(gamma >= 0.0 && gamma <= lambda1 + 1e-12)) {
    throw ValidationError("dpht_bound: gamma must lie in [0, lambda1]");
  }
  if (!(noise_norm >= 0.0)) throw ValidationError("dpht_bound: negative noise norm");
  if (noise_norm >= 1.0 - lambda1) {
    throw BoundInapplicableError("dpht_bound: noise norm reaches 1 - lambda1");
  }
  return 1.0 / (1.0 - lambda1 - noise_norm) - 1.0 / (1.0 - lambda1 + gamma);
}

}  // namespace walkbench
