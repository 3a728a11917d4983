#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "walkbench/chain.hpp"
#include "walkbench/perturb.hpp"
#include "walkbench/spectral.hpp"

using namespace walkbench;

namespace {

// 0.02 * (J - 3I) on three states: +0.02 off the diagonal, -0.04 on it.
// Column sums vanish exactly and the spectrum is {0, -0.06, -0.06}.
Eigen::MatrixXd equality_direction() {
  Eigen::MatrixXd e = Eigen::MatrixXd::Constant(3, 3, 0.02);
  e.diagonal().setConstant(-0.04);
  return e;
}

}  // namespace

TEST_CASE("make_noise accepts the equality-case direction and measures it") {
  const auto E = make_noise(equality_direction(), 11);
  CHECK(E.norm2 == doctest::Approx(0.06).epsilon(1e-12));
  CHECK(E.seed == 11);
  CHECK(E.entries(0, 0) == -0.04);
  CHECK(E.entries(2, 1) == 0.02);
}

TEST_CASE("make_noise rejects asymmetric, unbalanced, and malformed input") {
  Eigen::MatrixXd asym = equality_direction();
  asym(0, 1) = 0.03;
  CHECK_THROWS_WITH_AS((void)make_noise(asym, 0),
                       doctest::Contains("symmetry defect"), ValidationError);

  Eigen::MatrixXd unbalanced = equality_direction();
  unbalanced(0, 0) = -0.03;
  CHECK_THROWS_WITH_AS((void)make_noise(unbalanced, 0),
                       doctest::Contains("column-sum defect"), ValidationError);

  CHECK_THROWS_AS((void)make_noise(Eigen::MatrixXd::Zero(2, 3), 0),
                  ValidationError);

  Eigen::MatrixXd inf = Eigen::MatrixXd::Zero(2, 2);
  inf(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)make_noise(inf, 0), ValidationError);
}

TEST_CASE("sample_noise hits the requested norm on a dense chain") {
  const auto P = make_chain(ChainFamily::Complete, 8);
  const auto E = sample_noise(P, 0.01, 5);

  // Entries of the complete chain are 1/8, comfortably above any entry of a
  // norm-0.01 symmetric matrix, so no feasibility shrink can trigger.
  CHECK(E.norm2 == doctest::Approx(0.01).epsilon(1e-10));
  CHECK(E.norm2 <= 0.01 + 1e-12);
  CHECK(E.norm2 >= 0.009);
  CHECK(E.seed == 5);

  CHECK((E.entries - E.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(E.entries.colwise().sum().cwiseAbs().maxCoeff() <= 1e-13);
  CHECK((P.entries + E.entries).minCoeff() >= 0.0);
}

TEST_CASE("sample_noise is a pure function of (chain, target, seed)") {
  const auto P = make_chain(ChainFamily::RandomSymmetric, 6, {.seed = 2});
  const auto a = sample_noise(P, 0.005, 40);
  const auto b = sample_noise(P, 0.005, 40);
  CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() == 0.0);

  const auto c = sample_noise(P, 0.005, 41);
  CHECK((a.entries - c.entries).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("sample_noise returns the zero matrix for a zero target") {
  const auto P = make_chain(ChainFamily::Complete, 4);
  const auto E = sample_noise(P, 0.0, 9);
  CHECK(E.norm2 == 0.0);
  CHECK(E.entries.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample_noise rejects bad targets and asymmetric chains") {
  const auto P = make_chain(ChainFamily::Complete, 4);
  CHECK_THROWS_AS((void)sample_noise(P, -0.1, 0), ValidationError);
  CHECK_THROWS_AS(
      (void)sample_noise(P, std::numeric_limits<double>::quiet_NaN(), 0),
      ValidationError);

  const auto absorbed = absorbing(P, {0});
  CHECK_THROWS_AS((void)sample_noise(absorbed, 0.01, 0), ValidationError);
}

TEST_CASE("sample_noise refuses targets that cannot fit the chain") {
  // A norm-5 symmetric matrix has an entry of magnitude at least 5/3, far
  // beyond what entries of 1/3 can absorb.
  const auto P = make_chain(ChainFamily::Complete, 3);
  CHECK_THROWS_WITH_AS((void)sample_noise(P, 5.0, 1),
                       doctest::Contains("infeasible"), FeasibilityError);
}

TEST_CASE("sample_noise never lands below nine tenths of the target") {
  // Either the draw fits at full scale or the call refuses; a silently
  // shrunken norm would poison every downstream bound check.
  for (double target : {0.001, 0.01, 0.05}) {
    int successes = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto P = make_chain(ChainFamily::RandomSymmetric, 8, {.seed = seed});
      try {
        const auto E = sample_noise(P, target, seed + 100);
        CHECK(E.norm2 >= 0.9 * target - 1e-12);
        CHECK(E.norm2 <= target + 1e-12);
        CHECK((P.entries + E.entries).minCoeff() >= 0.0);
        ++successes;
      } catch (const FeasibilityError&) {
      }
    }
    CHECK(successes >= 1);
  }
}

TEST_CASE("leading principal blocks of sampled noise obey interlacing") {
  const auto P = make_chain(ChainFamily::Complete, 8);
  const auto E = sample_noise(P, 0.05, 3);
  for (int m = 1; m <= 8; ++m) {
    const Eigen::MatrixXd block = E.entries.topLeftCorner(m, m);
    CHECK(sym_norm2(block) <= E.norm2 + 1e-10);
  }
}

TEST_CASE("apply_noise with zero noise returns the chain bit for bit") {
  const auto P = make_chain(ChainFamily::LazyCycle, 5, {.hold = 0.7});
  const auto E = sample_noise(P, 0.0, 0);
  const auto Q = apply_noise(P, E);
  CHECK((Q.entries - P.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK(Q.symmetric);
  CHECK(Q.meta.find("+noise") != std::string::npos);
}

TEST_CASE("apply_noise reproduces the equality-case chain exactly") {
  const auto P = make_chain(ChainFamily::Complete, 3);
  const auto E = make_noise(equality_direction(), 0);
  const auto Q = apply_noise(P, E);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const double want = (j == k) ? 1.0 / 3.0 - 0.04 : 1.0 / 3.0 + 0.02;
      CHECK(Q.entries(j, k) == doctest::Approx(want).epsilon(1e-15));
    }
  }
  CHECK(Q.symmetric);
}

TEST_CASE("apply_noise composed with the opposite noise is near-exact") {
  const auto P = make_chain(ChainFamily::Complete, 3);
  const auto E = make_noise(equality_direction(), 0);
  const auto Q = apply_noise(P, E);
  const auto back = apply_noise(Q, make_noise(-equality_direction(), 0));
  CHECK((back.entries - P.entries).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("apply_noise rejects mismatched sizes and real negativity") {
  const auto P3 = make_chain(ChainFamily::Complete, 3);
  const auto P4 = make_chain(ChainFamily::LazyPath, 4);
  const auto E3 = make_noise(equality_direction(), 0);
  CHECK_THROWS_AS((void)apply_noise(P4, E3), ValidationError);

  // The path chain has no (0,2) transition, so negative noise there pushes
  // the perturbed entry below anything clipping may absorb.
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 4);
  bad(0, 2) = bad(2, 0) = -0.05;
  bad(0, 0) = bad(2, 2) = 0.05;
  CHECK_THROWS_WITH_AS((void)apply_noise(P4, make_noise(bad, 0)),
                       doctest::Contains("dust threshold"), ValidationError);
}

TEST_CASE("apply_noise clips sub-tolerance dust and renormalizes") {
  const auto P = make_chain(ChainFamily::LazyPath, 4);
  Eigen::MatrixXd dust = Eigen::MatrixXd::Zero(4, 4);
  dust(0, 2) = dust(2, 0) = -5e-15;
  dust(0, 0) = dust(2, 2) = 5e-15;
  const auto Q = apply_noise(P, make_noise(dust, 0));
  CHECK(Q.entries(0, 2) == 0.0);
  CHECK(Q.entries.minCoeff() >= 0.0);
  CHECK((Q.entries.colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-12);
}
