#include "walkbench/verify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "walkbench/hitting.hpp"
#include "walkbench/spectral.hpp"
#include "walkbench/szegedy.hpp"

namespace walkbench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void splice_warnings(std::vector<std::string>& into, const std::string& prefix,
                     const std::vector<std::string>& from) {
  for (const std::string& w : from) into.push_back(prefix + ": " + w);
}

// Walk-side self-tests for one chain: builds the walk, runs the eigenphase
// inclusion check (inside quantum_spectrum), and cross-checks the full-space
// hitting value against the deleted-block one.
bool walk_route_check(const StochasticMatrix& chain, int x, double spectral_value,
                      const std::string& prefix, std::vector<std::string>& warnings) {
  const auto& tol = tolerances();
  try {
    const double full = qht_fullspace(chain, x);
    const double rel = std::abs(full - spectral_value) /
                       std::max(std::abs(spectral_value), 1e-300);
    if (rel > tol.route_rel) {
      std::ostringstream os;
      os << prefix << ": full-space hitting value " << full
         << " disagrees with the deleted-block value " << spectral_value
         << " (relative difference " << rel << ")";
      warnings.push_back(os.str());
      return false;
    }
    return true;
  } catch (const Error& e) {
    warnings.push_back(prefix + ": walk self-test failed: " + e.what());
    return false;
  }
}

}  // namespace

BoundReport verify_instance(const StochasticMatrix& P, const StochasticMatrix& Q,
                            int x, const VerifyOptions& opts) {
  const auto& tol = tolerances();
  const int n = P.size();
  if (Q.size() != n) throw ValidationError("verify: chain sizes differ");
  if (!P.symmetric || !Q.symmetric) {
    throw ValidationError("verify: both chains must be symmetric");
  }
  if (x < 0 || x >= n) throw ValidationError("verify: target state out of range");

  BoundReport rep;
  rep.family = P.meta;
  rep.n = n;
  rep.target = x;
  rep.epsilon = 1.0 / n;

  // The difference of two validated symmetric chains is symmetric with zero
  // column sums by construction (each within doubled entry tolerance), so it
  // is assembled directly instead of going back through make_noise.
  NoiseMatrix noise;
  noise.entries = Q.entries - P.entries;
  noise.norm2 = sym_norm2(noise.entries);
  rep.noise_norm = noise.norm2;

  const WeylReport wr = weyl_check(P, Q);
  rep.delta = wr.gap_p;
  rep.Delta = wr.gap_q;
  rep.max_eig_diff = wr.max_eig_diff;
  rep.weyl_ok = wr.weyl_ok;
  rep.sandwich_ok = wr.sandwich_ok;

  const SpectralData full_p = eig_sym(P.entries);
  const SpectralData full_q = eig_sym(Q.entries);
  const double min_p = full_p.eigenvalues(n - 1);
  const double min_q = full_q.eigenvalues(n - 1);
  rep.positive_spectrum_ok = min_p >= -tol.eig_match && min_q >= -tol.eig_match;
  if (!rep.positive_spectrum_ok) {
    std::ostringstream os;
    os << "spectrum dips to " << std::min(min_p, min_q)
       << "; the positive-spectrum assumption is breached";
    rep.warnings.push_back(os.str());
  }

  const Distribution pi = stationary(P);
  const SpectralData block = eig_sym(similarity_transform(P, pi, x).entries);
  rep.lambda1 = block.eigenvalues(0);
  rep.gamma = block.gamma;

  const HittingReport hp = ht_spectral(P, x);
  const HittingReport hq = ht_spectral(Q, x);
  splice_warnings(rep.warnings, "ht(P)", hp.warnings);
  splice_warnings(rep.warnings, "ht(Q)", hq.warnings);
  rep.ht_p = hp.value;
  rep.ht_q = hq.value;
  rep.dpht = rep.ht_q - rep.ht_p;
  try {
    rep.dpht_bound = dpht_bound(rep.lambda1, rep.gamma, rep.noise_norm);
    rep.dpht_bound_applicable = true;
    rep.dpht_ok = rep.dpht <= rep.dpht_bound + tol.bound_slack;
  } catch (const Error& e) {
    // BoundInapplicableError for a noise norm reaching the gap; ValidationError
    // when the deleted block leaves the bound's (lambda1, gamma) domain. Both
    // mean "no statement", not "violation".
    rep.dpht_bound = kNaN;
    rep.warnings.push_back(std::string("dpht_bound: ") + e.what());
  }

  if (opts.mc_trials > 0) {
    const HittingReport mc = ht_montecarlo(P, x, opts.mc_trials, opts.mc_seed);
    rep.mc_value = mc.value;
    rep.mc_stderr = mc.std_error;
    rep.mc_trials = mc.trials;
    if (mc.std_error && std::abs(mc.value - rep.ht_p) > 3.0 * *mc.std_error) {
      std::ostringstream os;
      os << "Monte Carlo estimate " << mc.value << " sits more than 3 standard "
         << "errors from the resolvent value " << rep.ht_p;
      rep.warnings.push_back(os.str());
    }
  }

  std::vector<std::string> qw;
  rep.qht_p = qht_spectral(P, x, &qw);
  splice_warnings(rep.warnings, "qht(P)", qw);
  qw.clear();
  rep.qht_q = qht_spectral(Q, x, &qw);
  splice_warnings(rep.warnings, "qht(Q)", qw);
  rep.dpqht = rep.qht_q - rep.qht_p;
  try {
    rep.dpqht_bound = dpqht_bound(rep.lambda1, rep.gamma, rep.noise_norm);
    rep.naive_dpqht_bound = naive_dpqht_bound(rep.lambda1, rep.gamma, rep.noise_norm);
    rep.dpqht_bound_applicable = true;
    rep.dpqht_ok = rep.dpqht <= rep.dpqht_bound + tol.bound_slack;
  } catch (const Error& e) {
    rep.dpqht_bound = kNaN;
    rep.naive_dpqht_bound = kNaN;
    rep.warnings.push_back(std::string("dpqht_bound: ") + e.what());
  }

  try {
    const SzegedyBound sb = szegedy_bound(P, {x});
    const PerturbedSzegedyBound pb = szegedy_bound_perturbed(P, noise, {x});
    rep.p1_norm = sb.p1_norm;
    rep.szegedy_qht_bound = sb.qht_bound;
    rep.q1_norm_bound = pb.q1_norm_bound;
    rep.q1_norm_actual = pb.q1_norm_actual;
    rep.block_bound_applicable = true;
    rep.block_bound_ok = sb.block_ok && pb.block_ok;
  } catch (const BoundInapplicableError& e) {
    // Large noise can push both block-norm branches to 1, where the bound says
    // nothing. Recorded as inapplicable, not as a violation.
    rep.p1_norm = kNaN;
    rep.szegedy_qht_bound = kNaN;
    rep.q1_norm_bound = kNaN;
    rep.q1_norm_actual = kNaN;
    rep.warnings.push_back(std::string("block bounds: ") + e.what());
  }

  try {
    rep.annihilation_threshold = annihilation_threshold(rep.delta, rep.epsilon);
  } catch (const ValidationError& e) {
    // A negative second eigenvalue pushes the gap past 1; the threshold
    // expression is out of its domain there.
    rep.annihilation_threshold = kNaN;
    rep.warnings.push_back(std::string("annihilation_threshold: ") + e.what());
  }

  const bool walk_p = walk_route_check(P, x, rep.qht_p, "walk(P)", rep.warnings);
  const bool walk_q = walk_route_check(Q, x, rep.qht_q, "walk(Q)", rep.warnings);
  rep.spectrum_theorem_ok = walk_p && walk_q;

  return rep;
}

nlohmann::json report_to_json(const BoundReport& rep) {
  const auto& tol = tolerances();

  // Re-derive every flag that is a function of stored numbers; a mismatch means
  // the report was tampered with or a bug produced it, and must not be written.
  const bool weyl_ok = rep.max_eig_diff <= rep.noise_norm + tol.weyl;
  const bool sandwich_ok = rep.Delta >= rep.delta - rep.noise_norm - tol.weyl &&
                           rep.Delta <= rep.delta + rep.noise_norm + tol.weyl;
  const bool dpht_ok =
      rep.dpht_bound_applicable && rep.dpht <= rep.dpht_bound + tol.bound_slack;
  const bool dpqht_ok =
      rep.dpqht_bound_applicable && rep.dpqht <= rep.dpqht_bound + tol.bound_slack;
  const bool block_ok =
      rep.block_bound_applicable &&
      rep.p1_norm <= 1.0 - rep.delta * rep.epsilon / 2.0 + tol.block_slack &&
      rep.q1_norm_actual <= rep.q1_norm_bound + tol.block_slack;
  if (weyl_ok != rep.weyl_ok || sandwich_ok != rep.sandwich_ok ||
      dpht_ok != rep.dpht_ok || dpqht_ok != rep.dpqht_ok ||
      block_ok != rep.block_bound_ok) {
    throw ValidationError("report flags disagree with their recomputed inequalities");
  }

  const auto num = [](double v) {
    return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
  };

  nlohmann::json j{
      {"format", "walkbench-report-v1"},
      {"family", rep.family},
      {"n", rep.n},
      {"target", rep.target},
      {"seed", rep.seed ? nlohmann::json(*rep.seed) : nlohmann::json(nullptr)},
      {"noise_norm", num(rep.noise_norm)},
      {"delta", num(rep.delta)},
      {"Delta", num(rep.Delta)},
      {"gamma", num(rep.gamma)},
      {"lambda1", num(rep.lambda1)},
      {"epsilon", num(rep.epsilon)},
      {"max_eig_diff", num(rep.max_eig_diff)},
      {"ht_p", num(rep.ht_p)},
      {"ht_q", num(rep.ht_q)},
      {"dpht", num(rep.dpht)},
      {"dpht_bound", num(rep.dpht_bound)},
      {"dpht_bound_applicable", rep.dpht_bound_applicable},
      {"dpht_ok", rep.dpht_ok},
      {"qht_p", num(rep.qht_p)},
      {"qht_q", num(rep.qht_q)},
      {"dpqht", num(rep.dpqht)},
      {"dpqht_bound", num(rep.dpqht_bound)},
      {"naive_dpqht_bound", num(rep.naive_dpqht_bound)},
      {"dpqht_bound_applicable", rep.dpqht_bound_applicable},
      {"dpqht_ok", rep.dpqht_ok},
      {"p1_norm", num(rep.p1_norm)},
      {"szegedy_qht_bound", num(rep.szegedy_qht_bound)},
      {"annihilation_threshold", num(rep.annihilation_threshold)},
      {"q1_norm_bound", num(rep.q1_norm_bound)},
      {"q1_norm_actual", num(rep.q1_norm_actual)},
      {"block_bound_applicable", rep.block_bound_applicable},
      {"weyl_ok", rep.weyl_ok},
      {"sandwich_ok", rep.sandwich_ok},
      {"spectrum_theorem_ok", rep.spectrum_theorem_ok},
      {"positive_spectrum_ok", rep.positive_spectrum_ok},
      {"block_bound_ok", rep.block_bound_ok},
      {"warnings", rep.warnings},
  };
  if (rep.mc_value) {
    j["mc_value"] = num(*rep.mc_value);
    j["mc_stderr"] = rep.mc_stderr ? num(*rep.mc_stderr) : nlohmann::json(nullptr);
    j["mc_trials"] = rep.mc_trials ? nlohmann::json(*rep.mc_trials) : nlohmann::json(nullptr);
  }
  return j;
}

int report_exit_code(const BoundReport& rep) {
  const bool unconditional_failure =
      !rep.weyl_ok || !rep.sandwich_ok || !rep.spectrum_theorem_ok ||
      (rep.block_bound_applicable && !rep.block_bound_ok);
  const bool conditional_failure =
      rep.positive_spectrum_ok &&
      ((rep.dpht_bound_applicable && !rep.dpht_ok) ||
       (rep.dpqht_bound_applicable && !rep.dpqht_ok));
  if (unconditional_failure || conditional_failure) return 4;
  if (!rep.positive_spectrum_ok || !rep.dpht_bound_applicable ||
      !rep.dpqht_bound_applicable || !rep.block_bound_applicable) {
    return 3;
  }
  return 0;
}

}  // namespace walkbench
