#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "walkbench/chain.hpp"
#include "walkbench/chain_io.hpp"
#include "walkbench/hitting.hpp"
#include "walkbench/perturb.hpp"
#include "walkbench/spectral.hpp"
#include "walkbench/sweep.hpp"
#include "walkbench/szegedy.hpp"
#include "walkbench/verify.hpp"

namespace py = pybind11;
using namespace walkbench;

PYBIND11_MODULE(_core, m) {
  m.doc() = "reversible chains, Szegedy walks, hitting times, perturbation bounds";

  // Exception hierarchy; derived types registered after the base so their
  // translators take precedence.
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base);
  py::register_exception<ReducibilityError>(m, "ReducibilityError", base);
  py::register_exception<DivergentPhaseError>(m, "DivergentPhaseError", base);
  py::register_exception<FeasibilityError>(m, "FeasibilityError", base);
  py::register_exception<GenerationError>(m, "GenerationError", base);
  py::register_exception<BoundInapplicableError>(m, "BoundInapplicableError", base);
  py::register_exception<SpectralTheoremError>(m, "SpectralTheoremError", base);

  py::class_<StochasticMatrix>(m, "StochasticMatrix")
      .def_readonly("entries", &StochasticMatrix::entries)
      .def_readonly("symmetric", &StochasticMatrix::symmetric)
      .def_readonly("meta", &StochasticMatrix::meta)
      .def_property_readonly("n", &StochasticMatrix::size)
      .def("__repr__", [](const StochasticMatrix& p) {
        std::ostringstream os;
        os << "StochasticMatrix(n=" << p.size() << ", symmetric="
           << (p.symmetric ? "True" : "False") << ", meta='" << p.meta << "')";
        return os.str();
      });

  py::class_<SubstochasticMatrix>(m, "SubstochasticMatrix")
      .def_readonly("entries", &SubstochasticMatrix::entries)
      .def_readonly("deleted", &SubstochasticMatrix::deleted)
      .def_readonly("parent_n", &SubstochasticMatrix::parent_n);

  py::class_<Distribution>(m, "Distribution")
      .def_readonly("probs", &Distribution::probs);

  py::class_<NoiseMatrix>(m, "NoiseMatrix")
      .def_readonly("entries", &NoiseMatrix::entries)
      .def_readonly("norm2", &NoiseMatrix::norm2)
      .def_readonly("seed", &NoiseMatrix::seed);

  py::class_<SpectralData>(m, "SpectralData")
      .def_readonly("eigenvalues", &SpectralData::eigenvalues)
      .def_readonly("eigenvectors", &SpectralData::eigenvectors)
      .def_readonly("overlaps", &SpectralData::overlaps)
      .def_readonly("gamma", &SpectralData::gamma);

  py::class_<WeylReport>(m, "WeylReport")
      .def_readonly("noise_norm", &WeylReport::noise_norm)
      .def_readonly("max_eig_diff", &WeylReport::max_eig_diff)
      .def_readonly("gap_p", &WeylReport::gap_p)
      .def_readonly("gap_q", &WeylReport::gap_q)
      .def_readonly("sandwich_lo", &WeylReport::sandwich_lo)
      .def_readonly("sandwich_hi", &WeylReport::sandwich_hi)
      .def_readonly("weyl_ok", &WeylReport::weyl_ok)
      .def_readonly("sandwich_ok", &WeylReport::sandwich_ok);

  py::class_<HittingReport>(m, "HittingReport")
      .def_readonly("value", &HittingReport::value)
      .def_property_readonly(
          "method", [](const HittingReport& r) { return method_name(r.method); })
      .def_readonly("std_error", &HittingReport::std_error)
      .def_readonly("trials", &HittingReport::trials)
      .def_readonly("warnings", &HittingReport::warnings);

  py::class_<WalkOperator>(m, "WalkOperator")
      .def_readonly("n", &WalkOperator::n)
      .def_readonly("dim", &WalkOperator::dim)
      .def_readonly("U", &WalkOperator::U)
      .def_readonly("W", &WalkOperator::W)
      .def_readonly("projector", &WalkOperator::projector)
      .def_readonly("marked", &WalkOperator::marked)
      .def_readonly("mu", &WalkOperator::mu)
      .def_readonly("quantized", &WalkOperator::quantized);

  py::class_<PhaseBucket>(m, "PhaseBucket")
      .def_readonly("phase", &PhaseBucket::phase)
      .def_readonly("pairs", &PhaseBucket::pairs)
      .def_readonly("amp", &PhaseBucket::amp);

  py::class_<QuantumSpectrum>(m, "QuantumSpectrum")
      .def_readonly("phases", &QuantumSpectrum::phases)
      .def_readonly("buckets", &QuantumSpectrum::buckets)
      .def_readonly("amp_plus1", &QuantumSpectrum::amp_plus1)
      .def_readonly("amp_minus1", &QuantumSpectrum::amp_minus1)
      .def_readonly("input_norm2", &QuantumSpectrum::input_norm2);

  py::class_<SzegedyBound>(m, "SzegedyBound")
      .def_readonly("p1_norm", &SzegedyBound::p1_norm)
      .def_readonly("qht_bound", &SzegedyBound::qht_bound)
      .def_readonly("gap_bound", &SzegedyBound::gap_bound)
      .def_readonly("block_ok", &SzegedyBound::block_ok);

  py::class_<PerturbedSzegedyBound>(m, "PerturbedSzegedyBound")
      .def_readonly("q1_norm_bound", &PerturbedSzegedyBound::q1_norm_bound)
      .def_readonly("q1_norm_actual", &PerturbedSzegedyBound::q1_norm_actual)
      .def_readonly("qht_bound", &PerturbedSzegedyBound::qht_bound)
      .def_readonly("block_ok", &PerturbedSzegedyBound::block_ok);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("family", &BoundReport::family)
      .def_readonly("n", &BoundReport::n)
      .def_readonly("target", &BoundReport::target)
      .def_readonly("seed", &BoundReport::seed)
      .def_readonly("noise_norm", &BoundReport::noise_norm)
      .def_readonly("delta", &BoundReport::delta)
      .def_readonly("Delta", &BoundReport::Delta)
      .def_readonly("gamma", &BoundReport::gamma)
      .def_readonly("lambda1", &BoundReport::lambda1)
      .def_readonly("epsilon", &BoundReport::epsilon)
      .def_readonly("max_eig_diff", &BoundReport::max_eig_diff)
      .def_readonly("ht_p", &BoundReport::ht_p)
      .def_readonly("ht_q", &BoundReport::ht_q)
      .def_readonly("dpht", &BoundReport::dpht)
      .def_readonly("dpht_bound", &BoundReport::dpht_bound)
      .def_readonly("dpht_bound_applicable", &BoundReport::dpht_bound_applicable)
      .def_readonly("dpht_ok", &BoundReport::dpht_ok)
      .def_readonly("mc_value", &BoundReport::mc_value)
      .def_readonly("mc_stderr", &BoundReport::mc_stderr)
      .def_readonly("mc_trials", &BoundReport::mc_trials)
      .def_readonly("qht_p", &BoundReport::qht_p)
      .def_readonly("qht_q", &BoundReport::qht_q)
      .def_readonly("dpqht", &BoundReport::dpqht)
      .def_readonly("dpqht_bound", &BoundReport::dpqht_bound)
      .def_readonly("naive_dpqht_bound", &BoundReport::naive_dpqht_bound)
      .def_readonly("dpqht_bound_applicable", &BoundReport::dpqht_bound_applicable)
      .def_readonly("dpqht_ok", &BoundReport::dpqht_ok)
      .def_readonly("p1_norm", &BoundReport::p1_norm)
      .def_readonly("szegedy_qht_bound", &BoundReport::szegedy_qht_bound)
      .def_readonly("annihilation_threshold", &BoundReport::annihilation_threshold)
      .def_readonly("q1_norm_bound", &BoundReport::q1_norm_bound)
      .def_readonly("q1_norm_actual", &BoundReport::q1_norm_actual)
      .def_readonly("block_bound_applicable", &BoundReport::block_bound_applicable)
      .def_readonly("weyl_ok", &BoundReport::weyl_ok)
      .def_readonly("sandwich_ok", &BoundReport::sandwich_ok)
      .def_readonly("spectrum_theorem_ok", &BoundReport::spectrum_theorem_ok)
      .def_readonly("positive_spectrum_ok", &BoundReport::positive_spectrum_ok)
      .def_readonly("block_bound_ok", &BoundReport::block_bound_ok)
      .def_readonly("warnings", &BoundReport::warnings);

  // chain construction and surgery
  m.def(
      "make_chain",
      [](const std::string& family, int n, double hold, std::uint64_t seed) {
        ChainParams params;
        params.hold = hold;
        params.seed = seed;
        return make_chain(parse_family(family), n, params);
      },
      py::arg("family"), py::arg("n"), py::arg("hold") = 0.5, py::arg("seed") = 0);
  m.def(
      "make_stochastic",
      [](Eigen::MatrixXd entries, bool symmetric, const std::string& meta) {
        return make_stochastic(std::move(entries), symmetric, meta);
      },
      py::arg("entries"), py::arg("symmetric"), py::arg("meta") = "");
  m.def("make_distribution", &make_distribution, py::arg("probs"));
  m.def("stationary", &stationary, py::arg("chain"));
  m.def("delete_states", &delete_states, py::arg("chain"), py::arg("marked"));
  m.def("absorbing", &absorbing, py::arg("chain"), py::arg("marked"));
  m.def("lazify", &lazify, py::arg("chain"));
  m.def("similarity_transform", &similarity_transform, py::arg("chain"),
        py::arg("pi"), py::arg("target"));
  m.def("truncate", &walkbench::truncate, py::arg("pi"), py::arg("target"));
  m.def("load_chain", &load_chain, py::arg("path"));
  m.def("save_chain", &save_chain, py::arg("chain"), py::arg("path"));

  // spectral toolkit
  m.def("eig_sym", &eig_sym, py::arg("matrix"));
  m.def("spectral_gap", &spectral_gap, py::arg("chain"));
  m.def("weyl_check", &weyl_check, py::arg("chain"), py::arg("perturbed"));
  m.def("overlaps", &overlaps, py::arg("spectral_data"), py::arg("pi_minus"));
  m.def("sym_norm2", &sym_norm2, py::arg("matrix"));
  m.def("op_norm2", &op_norm2, py::arg("matrix"));

  // perturbations
  m.def(
      "make_noise",
      [](Eigen::MatrixXd entries, std::uint64_t seed) {
        return make_noise(std::move(entries), seed);
      },
      py::arg("entries"), py::arg("seed") = 0);
  m.def("sample_noise", &sample_noise, py::arg("chain"), py::arg("target_norm"),
        py::arg("seed"));
  m.def("apply_noise", &apply_noise, py::arg("chain"), py::arg("noise"));

  // classical hitting times
  m.def("ht_resolvent", &ht_resolvent, py::arg("chain"), py::arg("target"));
  m.def("ht_spectral", &ht_spectral, py::arg("chain"), py::arg("target"));
  m.def("ht_montecarlo", &ht_montecarlo, py::arg("chain"), py::arg("target"),
        py::arg("trials"), py::arg("seed"));
  m.def("dpht", &dpht, py::arg("chain"), py::arg("perturbed"), py::arg("target"));
  m.def("dpht_bound", &dpht_bound, py::arg("lambda1"), py::arg("gamma"),
        py::arg("noise_norm"));

  // quantum walks
  m.def("build_walk", &build_walk, py::arg("chain"), py::arg("marked"));
  m.def("discriminant", &discriminant, py::arg("chain"));
  m.def("quantum_spectrum", &quantum_spectrum, py::arg("walk"), py::arg("input"));
  m.def("marked_start_state", &marked_start_state, py::arg("chain"), py::arg("marked"));
  m.def(
      "qht_spectral",
      [](const StochasticMatrix& P, int x) {
        std::vector<std::string> warnings;
        const double value = qht_spectral(P, x, &warnings);
        return py::make_tuple(value, warnings);
      },
      py::arg("chain"), py::arg("target"),
      "returns (value, warnings)");
  m.def("qht_fullspace", &qht_fullspace, py::arg("chain"), py::arg("target"));
  m.def("szegedy_bound", &szegedy_bound, py::arg("chain"), py::arg("marked"));
  m.def("szegedy_bound_perturbed", &szegedy_bound_perturbed, py::arg("chain"),
        py::arg("noise"), py::arg("marked"));
  m.def("annihilation_threshold", &annihilation_threshold, py::arg("delta"),
        py::arg("epsilon"));
  m.def("dpqht", &dpqht, py::arg("chain"), py::arg("perturbed"), py::arg("target"));
  m.def("dpqht_bound", &dpqht_bound, py::arg("lambda1"), py::arg("gamma"),
        py::arg("noise_norm"));
  m.def("naive_dpqht_bound", &naive_dpqht_bound, py::arg("lambda1"), py::arg("gamma"),
        py::arg("noise_norm"));

  // verification and sweeps
  m.def(
      "verify_instance",
      [](const StochasticMatrix& P, const StochasticMatrix& Q, int x,
         long long mc_trials, std::uint64_t mc_seed) {
        VerifyOptions opts;
        opts.mc_trials = mc_trials;
        opts.mc_seed = mc_seed;
        return verify_instance(P, Q, x, opts);
      },
      py::arg("chain"), py::arg("perturbed"), py::arg("target"),
      py::arg("mc_trials") = 0, py::arg("mc_seed") = 7);
  m.def(
      "report_json",
      [](const BoundReport& rep) { return report_to_json(rep).dump(2); },
      py::arg("report"));
  m.def("report_exit_code", &report_exit_code, py::arg("report"));
  m.def(
      "sweep_csv",
      [](const std::string& config_json) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(config_json);
        } catch (const nlohmann::json::exception& e) {
          throw ValidationError(std::string("sweep config: ") + e.what());
        }
        return sweep_csv(parse_sweep_config(j));
      },
      py::arg("config_json"),
      "config_json is the text of a walkbench-sweep-v1 document");
}
