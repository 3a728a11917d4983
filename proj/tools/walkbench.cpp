// walkbench: reversible chains, their Szegedy walks, hitting times, and
// perturbation bounds, from the command line.
//
// Exit codes: 0 ok, 1 usage or malformed sweep config, 2 invalid input or
// infeasible request, 3 breached assumption or inapplicable bound,
// 4 violated bound or failed numerical self-test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "walkbench/chain.hpp"
#include "walkbench/chain_io.hpp"
#include "walkbench/hitting.hpp"
#include "walkbench/perturb.hpp"
#include "walkbench/sweep.hpp"
#include "walkbench/szegedy.hpp"
#include "walkbench/verify.hpp"

namespace {

using walkbench::BoundInapplicableError;
using walkbench::DivergentPhaseError;
using walkbench::Error;
using walkbench::FeasibilityError;
using walkbench::GenerationError;
using walkbench::ReducibilityError;
using walkbench::SpectralTheoremError;
using walkbench::ValidationError;

// Exit code for ValidationError differs by command: gen and sweep treat bad
// parameters as usage (1), everything else as invalid input (2). The body
// returns the success-path exit code (verify derives it from the report).
int run_guarded(int validation_code, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return validation_code;
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FeasibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ReducibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DivergentPhaseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const BoundInapplicableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const SpectralTheoremError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

void print_scalar(double v) { std::printf("%.12f\n", v); }

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw ValidationError("write failed: " + path);
}

nlohmann::json hitting_json(const walkbench::HittingReport& rep) {
  nlohmann::json j{{"value", rep.value},
                   {"method", walkbench::method_name(rep.method)},
                   {"std_error", nullptr},
                   {"trials", nullptr},
                   {"warnings", rep.warnings}};
  if (rep.std_error) j["std_error"] = *rep.std_error;
  if (rep.trials) j["trials"] = *rep.trials;
  return j;
}

std::string default_sidecar_path(const std::string& out) {
  const std::string suffix = ".json";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out.substr(0, out.size() - suffix.size()) + ".sidecar.json";
  }
  return out + ".sidecar.json";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reversible chains, Szegedy walks, hitting times, perturbation bounds"};
  app.require_subcommand(1);
  int rc = 0;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a chain and write it as JSON");
  std::string gen_family;
  int gen_n = 0;
  double gen_hold = 0.5;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--family", gen_family,
                  "complete | lazy-cycle | lazy-path | random-symmetric")
      ->required();
  gen->add_option("--n", gen_n, "number of states (>= 2)")->required();
  gen->add_option("--hold", gen_hold, "holding probability of the lazy families");
  gen->add_option("--seed", gen_seed, "seed for random-symmetric");
  gen->add_option("--out", gen_out, "output chain file")->required();
  gen->callback([&] {
    rc = run_guarded(1, [&] {
      walkbench::ChainParams params;
      params.hold = gen_hold;
      params.seed = gen_seed;
      const auto P =
          walkbench::make_chain(walkbench::parse_family(gen_family), gen_n, params);
      walkbench::save_chain(P, gen_out);
      return 0;
    });
  });

  // ht
  auto* ht = app.add_subcommand("ht", "classical hitting time of one state");
  std::string ht_chain, ht_method = "resolvent", ht_json;
  int ht_target = 0;
  long long ht_trials = 100000;
  std::uint64_t ht_seed = 7;
  ht->add_option("--chain", ht_chain, "chain file")->required();
  ht->add_option("--target", ht_target, "state index")->required();
  ht->add_option("--method", ht_method, "resolvent | spectral | mc");
  ht->add_option("--trials", ht_trials, "Monte Carlo trials (mc only)");
  ht->add_option("--seed", ht_seed, "Monte Carlo seed (mc only)");
  ht->add_option("--json", ht_json, "also write the report as JSON");
  ht->callback([&] {
    rc = run_guarded(2, [&] {
      const auto P = walkbench::load_chain(ht_chain);
      walkbench::HittingReport rep;
      if (ht_method == "resolvent") {
        rep = walkbench::ht_resolvent(P, ht_target);
      } else if (ht_method == "spectral") {
        rep = walkbench::ht_spectral(P, ht_target);
      } else if (ht_method == "mc") {
        rep = walkbench::ht_montecarlo(P, ht_target, ht_trials, ht_seed);
      } else {
        throw ValidationError("unknown method: " + ht_method);
      }
      print_warnings(rep.warnings);
      print_scalar(rep.value);
      if (rep.std_error) std::printf("stderr %.12f\n", *rep.std_error);
      if (!ht_json.empty()) write_json_file(hitting_json(rep), ht_json);
      return 0;
    });
  });

  // qht
  auto* qht = app.add_subcommand("qht", "quantum hitting time of one state");
  std::string qht_chain, qht_json;
  int qht_target = 0;
  bool qht_oracle = false;
  qht->add_option("--chain", qht_chain, "chain file")->required();
  qht->add_option("--target", qht_target, "state index")->required();
  qht->add_flag("--oracle", qht_oracle,
                "cross-check against the full walk-space computation");
  qht->add_option("--json", qht_json, "also write the report as JSON");
  qht->callback([&] {
    rc = run_guarded(2, [&] {
      const auto P = walkbench::load_chain(qht_chain);
      std::vector<std::string> warnings;
      const double value = walkbench::qht_spectral(P, qht_target, &warnings);
      print_warnings(warnings);
      print_scalar(value);
      nlohmann::json j{{"value", value},
                       {"oracle_value", nullptr},
                       {"warnings", warnings}};
      if (qht_oracle) {
        const double oracle = walkbench::qht_fullspace(P, qht_target);
        std::printf("oracle %.12f\n", oracle);
        j["oracle_value"] = oracle;
        const double rel =
            std::abs(oracle - value) / std::max(std::abs(value), 1e-300);
        if (rel > walkbench::tolerances().route_rel) {
          throw SpectralTheoremError(
              "full-space value disagrees with the deleted-block value");
        }
      }
      if (!qht_json.empty()) write_json_file(j, qht_json);
      return 0;
    });
  });

  // perturb
  auto* pert = app.add_subcommand("perturb", "write a perturbed copy of a chain");
  std::string pert_chain, pert_out, pert_sidecar;
  double pert_norm = 0.0;
  std::uint64_t pert_seed = 0;
  pert->add_option("--chain", pert_chain, "chain file")->required();
  pert->add_option("--norm", pert_norm, "requested ||E||_2")->required();
  pert->add_option("--seed", pert_seed, "noise seed");
  pert->add_option("--out", pert_out, "output chain file")->required();
  pert->add_option("--sidecar", pert_sidecar,
                   "noise sidecar path (default: <out>.sidecar.json)");
  pert->callback([&] {
    rc = run_guarded(2, [&] {
      const auto P = walkbench::load_chain(pert_chain);
      const auto E = walkbench::sample_noise(P, pert_norm, pert_seed);
      const auto Q = walkbench::apply_noise(P, E);
      walkbench::save_chain(Q, pert_out);
      const std::string side =
          pert_sidecar.empty() ? default_sidecar_path(pert_out) : pert_sidecar;
      walkbench::save_noise_sidecar(E, side);
      return 0;
    });
  });

  // verify
  auto* ver = app.add_subcommand(
      "verify", "run every bound and self-check on a (P, Q, target) instance");
  std::string ver_chain, ver_perturbed, ver_json;
  int ver_target = 0;
  long long ver_mc_trials = 0;
  std::uint64_t ver_mc_seed = 7;
  ver->add_option("--chain", ver_chain, "unperturbed chain file")->required();
  ver->add_option("--perturbed", ver_perturbed, "perturbed chain file")->required();
  ver->add_option("--target", ver_target, "state index")->required();
  ver->add_option("--mc-trials", ver_mc_trials,
                  "Monte Carlo cross-check trials (0 disables)");
  ver->add_option("--mc-seed", ver_mc_seed, "Monte Carlo seed");
  ver->add_option("--json", ver_json, "also write the report to a file");
  ver->callback([&] {
    rc = run_guarded(2, [&] {
      const auto P = walkbench::load_chain(ver_chain);
      const auto Q = walkbench::load_chain(ver_perturbed);
      walkbench::VerifyOptions opts;
      opts.mc_trials = ver_mc_trials;
      opts.mc_seed = ver_mc_seed;
      const auto rep = walkbench::verify_instance(P, Q, ver_target, opts);
      const auto j = walkbench::report_to_json(rep);
      std::cout << j.dump(2) << "\n";
      if (!ver_json.empty()) write_json_file(j, ver_json);
      return walkbench::report_exit_code(rep);
    });
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "grid of verify instances as CSV");
  std::string sweep_config, sweep_out;
  sweep->add_option("--config", sweep_config, "sweep config file")->required();
  sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");
  sweep->callback([&] {
    rc = run_guarded(1, [&] {
      const auto cfg = walkbench::load_sweep_config(sweep_config);
      if (sweep_out.empty()) {
        walkbench::run_sweep(cfg, std::cout);
      } else {
        std::ofstream out(sweep_out);
        if (!out) throw ValidationError("cannot write: " + sweep_out);
        walkbench::run_sweep(cfg, out);
        if (!out) throw ValidationError("write failed: " + sweep_out);
      }
      return 0;
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return rc;
}
