#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "walkbench/chain.hpp"
#include "walkbench/perturb.hpp"
#include "walkbench/spectral.hpp"

using namespace walkbench;

namespace {

Eigen::MatrixXd random_symmetric(int n, unsigned seed) {
  std::mt19937 eng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k <= j; ++k) {
      a(j, k) = dist(eng);
      a(k, j) = a(j, k);
    }
  }
  return a;
}

}  // namespace

TEST_CASE("eig_sym keeps the identity basis on the identity matrix") {
  const auto sd = eig_sym(Eigen::MatrixXd::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(sd.eigenvalues(i) == 1.0);
  CHECK((sd.eigenvectors - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(sd.gamma == 0.0);
}

TEST_CASE("eig_sym sorts descending and normalizes signs") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 3.0;
  d(2, 2) = 2.0;
  const auto sd = eig_sym(d);
  CHECK(sd.eigenvalues(0) == 3.0);
  CHECK(sd.eigenvalues(1) == 2.0);
  CHECK(sd.eigenvalues(2) == 1.0);
  CHECK(sd.eigenvectors(1, 0) == 1.0);  // eigenvector of 3 is e_1
  CHECK(sd.eigenvectors(2, 1) == 1.0);
  CHECK(sd.eigenvectors(0, 2) == 1.0);
  CHECK(sd.gamma == 2.0);

  // first nonzero entry of every eigenvector is positive
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 3; ++r) {
      if (sd.eigenvectors(r, c) != 0.0) {
        CHECK(sd.eigenvectors(r, c) > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("eig_sym reconstructs random symmetric matrices") {
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    const Eigen::MatrixXd a = random_symmetric(16, seed);
    const auto sd = eig_sym(a);
    const Eigen::MatrixXd recon = sd.eigenvectors *
                                  sd.eigenvalues.asDiagonal() *
                                  sd.eigenvectors.transpose();
    CHECK((recon - a).norm() <= 1e-9 * std::max(1.0, a.norm()));
    const Eigen::MatrixXd gram =
        sd.eigenvectors.transpose() * sd.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(16, 16)).norm() <= 1e-10);
    for (int i = 0; i + 1 < 16; ++i) {
      CHECK(sd.eigenvalues(i) >= sd.eigenvalues(i + 1));
    }
  }
}

TEST_CASE("eig_sym rejects asymmetric and non-finite input") {
  Eigen::MatrixXd a(2, 2);
  a << 0.0, 1.0, 0.5, 0.0;
  CHECK_THROWS_AS((void)eig_sym(a), ValidationError);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
  b(0, 1) = b(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)eig_sym(b), ValidationError);
}

TEST_CASE("spectral gap of the lazy cycle") {
  const auto P = make_chain(ChainFamily::LazyCycle, 4);
  // spectrum {1, 1/2, 1/2, 0}
  CHECK(spectral_gap(P) == doctest::Approx(0.5).epsilon(1e-14));
  const auto C = make_chain(ChainFamily::Complete, 3);
  CHECK(spectral_gap(C) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weyl equality case: rank-deficient shift of the complete chain") {
  const auto P = make_chain(ChainFamily::Complete, 3);
  Eigen::MatrixXd e = Eigen::MatrixXd::Constant(3, 3, 0.02);
  e.diagonal().array() -= 3.0 * 0.02;
  const auto E = make_noise(e);
  CHECK(E.norm2 == doctest::Approx(0.06).epsilon(1e-14));

  const auto Q = apply_noise(P, E);
  const auto sq = eig_sym(Q.entries);
  CHECK(sq.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sq.eigenvalues(1) == doctest::Approx(-0.06).epsilon(1e-13));
  CHECK(sq.eigenvalues(2) == doctest::Approx(-0.06).epsilon(1e-13));

  const auto wr = weyl_check(P, Q);
  CHECK(wr.noise_norm == doctest::Approx(0.06).epsilon(1e-14));
  CHECK(wr.max_eig_diff == doctest::Approx(0.06).epsilon(1e-13));
  CHECK(wr.weyl_ok);
  CHECK(wr.sandwich_ok);
  CHECK(wr.gap_p == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wr.gap_q == doctest::Approx(1.06).epsilon(1e-13));
}

TEST_CASE("weyl and gap sandwich hold across random perturbed chains") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ChainParams params;
    params.seed = seed;
    const auto P = make_chain(ChainFamily::RandomSymmetric, 8, params);
    const auto E = sample_noise(P, 0.01, seed);
    const auto Q = apply_noise(P, E);
    const auto wr = weyl_check(P, Q);
    CHECK(wr.weyl_ok);
    CHECK(wr.sandwich_ok);
  }
}

TEST_CASE("overlaps carry the square root of the truncated mass") {
  const auto P = make_chain(ChainFamily::Complete, 3);
  const auto pi = stationary(P);
  const auto S = similarity_transform(P, pi, 0);
  const auto sd = overlaps(eig_sym(S.entries), truncate(pi, 0));
  REQUIRE(sd.overlaps.has_value());
  // minor of the flat 3-chain: 2x2 of 1/3 -> eigenvalues {2/3, 0}, and the
  // top eigenvector is parallel to sqrt(pi_minus)
  CHECK(sd.eigenvalues(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK((*sd.overlaps)(0) ==
        doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(std::abs((*sd.overlaps)(1)) < 1e-14);

  const double mass = truncate(pi, 0).sum();
  CHECK(sd.overlaps->squaredNorm() == doctest::Approx(mass).epsilon(1e-12));
}

TEST_CASE("overlaps validates its inputs") {
  const auto P = make_chain(ChainFamily::Complete, 3);
  const auto sd = eig_sym(delete_states(P, {0}).entries);
  Eigen::VectorXd wrong_size(3);
  wrong_size.setConstant(0.3);
  CHECK_THROWS_AS((void)overlaps(sd, wrong_size), ValidationError);
  Eigen::VectorXd negative(2);
  negative << 0.5, -0.1;
  CHECK_THROWS_AS((void)overlaps(sd, negative), ValidationError);
  Eigen::VectorXd too_heavy(2);
  too_heavy << 0.9, 0.9;
  CHECK_THROWS_AS((void)overlaps(sd, too_heavy), ValidationError);
}

TEST_CASE("norms: spectral norm of symmetric and general matrices") {
  Eigen::MatrixXd e = Eigen::MatrixXd::Constant(3, 3, 0.02);
  e.diagonal().array() -= 0.06;
  CHECK(sym_norm2(e) == doctest::Approx(0.06).epsilon(1e-14));

  Eigen::MatrixXd rect(2, 3);
  rect << 1, 0, 0,
          0, 2, 0;
  CHECK(op_norm2(rect) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("tie groups come out in a deterministic eigenvector order") {
  // two eigenvalue-1 directions: the tie-break must not depend on solver order
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  a(2, 2) = 0.5;
  const auto first = eig_sym(a);
  const auto second = eig_sym((a + a.transpose()) / 2.0);
  CHECK((first.eigenvectors - second.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK(first.eigenvectors(0, 0) == 1.0);
  CHECK(first.eigenvectors(1, 1) == 1.0);
}
