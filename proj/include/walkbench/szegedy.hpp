#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "walkbench/chain.hpp"
#include "walkbench/common.hpp"
#include "walkbench/perturb.hpp"

namespace walkbench {

// Quantization of a chain on the doubled register C^n (x) C^n, basis index
// y*n + z for |y>|z>. With column vectors |p_y> = sum_z sqrt(P(z,y)) |z>:
//
//   projector = sum_y |y>|p_y><y|<p_y|,   U = S (2*projector - I),   W = U^2,
//
// where S swaps the registers. For a nonempty marked set the quantized chain
// is absorbing(P, marked); the walk then realizes the marked-vertex walk of P
// (its square equals the product form (U2 U1)^2 built from the unmarked chain).
struct WalkOperator {
  int n = 0;
  int dim = 0;  // n^2
  Eigen::MatrixXd U;
  Eigen::MatrixXd W;
  Eigen::MatrixXd projector;
  std::vector<int> marked;                 // sorted, may be empty
  std::optional<Eigen::VectorXd> mu;       // |x>|p_x> from the ORIGINAL chain, |marked| == 1
  StochasticMatrix quantized;              // P, or absorbing(P, marked)
};

WalkOperator build_walk(const StochasticMatrix& P, const std::vector<int>& marked);

// D(j,k) = sqrt(Ptilde(j,k) * Ptilde(k,j)). For a symmetric chain D = P
// entrywise; for an absorbing modification it is block-diagonal: the unmarked
// minor plus an identity on the marked states.
Eigen::MatrixXd discriminant(const StochasticMatrix& Ptilde);

// One bucket per distinct eigenphase alpha in (0, pi): `pairs` conjugate pairs
// e^{+-i alpha}, carrying squared projection `amp` of the analyzed state.
struct PhaseBucket {
  double phase = 0.0;
  int pairs = 0;
  double amp = 0.0;
};

struct QuantumSpectrum {
  std::vector<double> phases;        // one entry per conjugate pair, ascending
  std::vector<PhaseBucket> buckets;  // grouped by phase within phase_match
  double amp_plus1 = 0.0;
  double amp_minus1 = 0.0;           // reported, not assumed zero
  double input_norm2 = 0.0;
};

// Eigenstructure of walk.U restricted to what the input state can see.
// Complex eigenvalues of U classify into +1 / -1 (real part within the
// eigenvalue-at-1 cut `reducible`, matching the spectral route) and conjugate
// pairs; every pair phase must match arccos of an eigenvalue of the
// discriminant within phase_selftest, else SpectralTheoremError (a self-test
// that must never fire on valid walks). Amplitudes are orthogonal projections
// onto the real invariant subspaces, computed in the eigenbasis of (U+U^T)/2.
QuantumSpectrum quantum_spectrum(const WalkOperator& walk, const Eigen::VectorXd& input);

// |phi>_{-mu} = sum_{y not marked} sqrt(pi_y) |y>|p_y>, deliberately
// unnormalized: its squared norm is 1 - pi(marked).
Eigen::VectorXd marked_start_state(const StochasticMatrix& P, const std::vector<int>& marked);

// Quantum hitting time via the deleted-block spectrum:
//     QHT(P, x) = sum_j nu_j^2 / arccos(lambda_j),
// terms with nu_j^2 < overlap_skip are dropped; an eigenvalue within
// `reducible` of 1 that still carries weight raises DivergentPhaseError.
double qht_spectral(const StochasticMatrix& P, int x,
                    std::vector<std::string>* warnings = nullptr);

// The same quantity measured on the full walk space: buckets of U_{-x} give
// sum_j a_j^2 / alpha_j. Independent route used to cross-check qht_spectral.
double qht_fullspace(const StochasticMatrix& P, int x);

struct SzegedyBound {
  double p1_norm = 0.0;    // ||P_1||_2, unmarked block of P
  double qht_bound = 0.0;  // sqrt(1 / (1 - p1_norm))
  double gap_bound = 0.0;  // 1 - delta * eps / 2
  bool block_ok = false;   // p1_norm <= gap_bound + block_slack
};

// Constant-free quantum hitting bound from the unmarked block norm.
SzegedyBound szegedy_bound(const StochasticMatrix& P, const std::vector<int>& marked);

struct PerturbedSzegedyBound {
  double q1_norm_bound = 0.0;   // min(p1_norm + ||E||, 1 - (delta - ||E||) eps / 2)
  double q1_norm_actual = 0.0;  // measured ||(P+E)_1||_2
  double qht_bound = 0.0;       // sqrt(1 / (1 - q1_norm_bound))
  bool block_ok = false;        // q1_norm_actual <= q1_norm_bound + block_slack
};

PerturbedSzegedyBound szegedy_bound_perturbed(const StochasticMatrix& P,
                                              const NoiseMatrix& E,
                                              const std::vector<int>& marked);

// Largest noise norm below which the perturbed gap bound stays informative:
// delta * (1 - delta * eps).
double annihilation_threshold(double delta, double epsilon);

// QHT(Q, x) - QHT(P, x), both via qht_spectral.
double dpqht(const StochasticMatrix& P, const StochasticMatrix& Q, int x);

// Upper bound for the quantum hitting-time shift:
//     1 / sqrt(1 - lambda1 - noise_norm) - 1 / (2 sqrt(1 - lambda1 + gamma)),
// lambda1/gamma from the unperturbed deleted block. Throws
// BoundInapplicableError when noise_norm >= 1 - lambda1.
double dpqht_bound(double lambda1, double gamma, double noise_norm);

// The same expression with the subtracted term NOT halved. It undercuts
// dpqht_bound by exactly 1 / (2 sqrt(1 - lambda1 + gamma)), so it looks
// tighter but is not a valid guarantee; kept for comparison only.
double naive_dpqht_bound(double lambda1, double gamma, double noise_norm);

}  // namespace walkbench
