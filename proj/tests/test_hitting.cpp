#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "walkbench/chain.hpp"
#include "walkbench/hitting.hpp"
#include "walkbench/perturb.hpp"
#include "walkbench/spectral.hpp"

using namespace walkbench;

TEST_CASE("complete chains have closed-form hitting times") {
  // n = 3: the deleted block is (1/3) J_2 with resolvent mass summing to 2.
  const auto P3 = make_chain(ChainFamily::Complete, 3);
  CHECK(ht_resolvent(P3, 0).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ht_spectral(P3, 0).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(oracles::ht_series(P3.entries, 0) == doctest::Approx(2.0).epsilon(1e-11));

  // n = 2: half the mass is already there, the rest needs a geometric wait.
  const auto P2 = make_chain(ChainFamily::Complete, 2);
  CHECK(ht_resolvent(P2, 1).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ht_spectral(P2, 1).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("resolvent and spectral routes agree with the series oracle") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}) {
    for (int n : {5, 9}) {
      const auto P = make_chain(ChainFamily::RandomSymmetric, n, {.seed = seed});
      for (int x : {0, n / 2}) {
        const double res = ht_resolvent(P, x).value;
        const double spec = ht_spectral(P, x).value;
        const double series = oracles::ht_series(P.entries, x);
        CHECK(std::abs(res - spec) <= 1e-8 * res);
        CHECK(std::abs(res - series) <= 1e-8 * res);
      }
    }
  }
}

TEST_CASE("reversible non-symmetric chains go through the similarity route") {
  const auto P = make_stochastic(oracles::birth_death3(), false, "birth-death");
  const Eigen::VectorXd pi = stationary(P).probs;
  for (int x : {0, 1, 2}) {
    const double res = ht_resolvent(P, x).value;
    const double spec = ht_spectral(P, x).value;
    const double series = oracles::ht_series(P.entries, x, pi);
    CHECK(std::abs(res - spec) <= 1e-10 * res);
    CHECK(std::abs(res - series) <= 1e-9 * res);
  }
}

TEST_CASE("nonpositive deleted-block eigenvalues are reported, not fatal") {
  // Heavy off-diagonal weight pushes the deleted block to eigenvalues
  // {0.55, -0.35}; the formula still matches the series oracle.
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(3, 3, 0.45);
  m.diagonal().setConstant(0.1);
  const auto P = make_stochastic(m, true, "hot");
  const auto rep = ht_spectral(P, 0);
  REQUIRE(!rep.warnings.empty());
  CHECK(rep.value ==
        doctest::Approx(oracles::ht_series(P.entries, 0)).epsilon(1e-10));

  // The complete chain's deleted block has an exact zero eigenvalue, which
  // also earns a note.
  const auto C = make_chain(ChainFamily::Complete, 3);
  CHECK(!ht_spectral(C, 0).warnings.empty());
  CHECK(ht_resolvent(C, 0).warnings.empty());
}

TEST_CASE("hitting-time inputs are validated") {
  const auto P = make_chain(ChainFamily::Complete, 3);
  CHECK_THROWS_AS((void)ht_resolvent(P, -1), ValidationError);
  CHECK_THROWS_AS((void)ht_resolvent(P, 3), ValidationError);
  CHECK_THROWS_AS((void)ht_spectral(P, 5), ValidationError);

  // Two disconnected components: the ergodicity gate refuses.
  Eigen::MatrixXd split = Eigen::MatrixXd::Zero(4, 4);
  split.topLeftCorner(2, 2).setConstant(0.5);
  split.bottomRightCorner(2, 2).setConstant(0.5);
  const auto B = make_stochastic(split, true, "split");
  CHECK_THROWS_AS((void)ht_resolvent(B, 0), ReducibilityError);
  CHECK_THROWS_AS((void)ht_spectral(B, 0), ReducibilityError);
}

TEST_CASE("Monte Carlo estimates straddle the resolvent answer") {
  const auto P = make_chain(ChainFamily::Complete, 3);
  const auto mc = ht_montecarlo(P, 0, 100000, 7);
  REQUIRE(mc.std_error.has_value());
  REQUIRE(mc.trials.has_value());
  CHECK(*mc.trials == 100000);
  CHECK(*mc.std_error > 0.0);
  CHECK(std::abs(mc.value - 2.0) <= 3.0 * *mc.std_error);

  const auto again = ht_montecarlo(P, 0, 100000, 7);
  CHECK(again.value == mc.value);
  CHECK(*again.std_error == *mc.std_error);

  const auto other = ht_montecarlo(P, 0, 100000, 8);
  CHECK(other.value != mc.value);

  CHECK_THROWS_AS((void)ht_montecarlo(P, 0, 99, 7), ValidationError);
}

TEST_CASE("Monte Carlo covers the non-uniform stationary start") {
  const auto P = make_stochastic(oracles::birth_death3(), false, "birth-death");
  const double res = ht_resolvent(P, 2).value;
  const auto mc = ht_montecarlo(P, 2, 100000, 11);
  CHECK(std::abs(mc.value - res) <= 3.0 * *mc.std_error);
}

TEST_CASE("dpht is the spectral-route difference") {
  const auto P = make_chain(ChainFamily::Complete, 3);
  CHECK(dpht(P, P, 0) == 0.0);

  Eigen::MatrixXd e = Eigen::MatrixXd::Constant(3, 3, 0.02);
  e.diagonal().setConstant(-0.04);
  const auto Q = apply_noise(P, make_noise(e, 0));
  const double shift = dpht(P, Q, 0);
  const double series_shift =
      oracles::ht_series(Q.entries, 0) - oracles::ht_series(P.entries, 0);
  CHECK(shift == doctest::Approx(series_shift).epsilon(1e-9));
  // The noise moves diagonal mass onto the off-diagonals, so the walk reaches
  // the target sooner and the shift is negative.
  CHECK(shift < 0.0);

  const auto P4 = make_chain(ChainFamily::Complete, 4);
  CHECK_THROWS_AS((void)dpht(P, P4, 0), ValidationError);
}

TEST_CASE("dpht_bound matches frozen values and guards its domain") {
  CHECK(dpht_bound(0.9, 0.5, 0.05) ==
        doctest::Approx(oracles::kDphtBoundA).epsilon(1e-12));
  CHECK(dpht_bound(0.9, 0.5, 0.0) ==
        doctest::Approx(oracles::kDphtBoundB).epsilon(1e-12));

  // Zero noise and zero gamma collapse the bracket to zero.
  CHECK(dpht_bound(0.5, 0.0, 0.0) == 0.0);

  CHECK_THROWS_AS((void)dpht_bound(0.9, 0.5, 0.1), BoundInapplicableError);
  CHECK_THROWS_AS((void)dpht_bound(0.9, 0.5, 0.2), BoundInapplicableError);
  CHECK_THROWS_AS((void)dpht_bound(1.0, 0.5, 0.01), ValidationError);
  CHECK_THROWS_AS((void)dpht_bound(-0.1, 0.0, 0.01), ValidationError);
  CHECK_THROWS_AS((void)dpht_bound(0.9, 0.95, 0.01), ValidationError);
  CHECK_THROWS_AS((void)dpht_bound(0.9, -0.1, 0.01), ValidationError);
  CHECK_THROWS_AS((void)dpht_bound(0.9, 0.5, -0.01), ValidationError);
}

TEST_CASE("dpht sits under its bound on a perturbed dense chain") {
  const auto P = make_chain(ChainFamily::Complete, 8);
  const auto E = sample_noise(P, 0.01, 3);
  const auto Q = apply_noise(P, E);

  const auto spec = eig_sym(similarity_transform(P, stationary(P), 0).entries);
  const double lambda1 = spec.eigenvalues(0);
  const double gamma = spec.eigenvalues(0) - spec.eigenvalues(spec.eigenvalues.size() - 1);
  const double bound = dpht_bound(lambda1, gamma, E.norm2);
  CHECK(dpht(P, Q, 0) <= bound + 1e-9);
}
