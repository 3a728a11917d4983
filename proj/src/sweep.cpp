#include "walkbench/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "walkbench/perturb.hpp"

namespace walkbench {

namespace {

constexpr const char* kSweepFormat = "walkbench-sweep-v1";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  if (std::isnan(v)) return "NaN";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* fmt_bool(bool b) { return b ? "true" : "false"; }

// A row whose instance could not even be built: every numeric cell NaN, every
// flag false, descriptors kept so the failing cell is identifiable.
BoundReport failed_report(ChainFamily family, int n, int target, std::uint64_t seed,
                          double requested_norm) {
  BoundReport rep;
  rep.family = family_name(family);
  rep.n = n;
  rep.target = target;
  rep.seed = seed;
  rep.noise_norm = requested_norm;
  rep.delta = rep.Delta = rep.gamma = rep.lambda1 = rep.epsilon = kNaN;
  rep.ht_p = rep.ht_q = rep.dpht = rep.dpht_bound = kNaN;
  rep.qht_p = rep.qht_q = rep.dpqht = rep.dpqht_bound = rep.naive_dpqht_bound = kNaN;
  rep.p1_norm = rep.szegedy_qht_bound = rep.annihilation_threshold = kNaN;
  rep.q1_norm_bound = rep.q1_norm_actual = rep.max_eig_diff = kNaN;
  return rep;
}

}  // namespace

SweepConfig parse_sweep_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("sweep config: top level is not an object");
  if (!j.contains("format") || j.at("format") != kSweepFormat) {
    throw ValidationError("sweep config: missing or unknown format tag");
  }
  const auto need_array = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).empty()) {
      throw ValidationError(std::string("sweep config: ") + key +
                            " must be a nonempty array");
    }
    return j.at(key);
  };

  SweepConfig cfg;
  for (const auto& f : need_array("families")) {
    if (!f.is_string()) throw ValidationError("sweep config: family entries are strings");
    cfg.families.push_back(parse_family(f.get<std::string>()));
  }
  for (const auto& s : need_array("sizes")) {
    if (!s.is_number_integer()) throw ValidationError("sweep config: sizes are integers");
    const int n = s.get<int>();
    if (n < 2 || n > kMaxChainSize) throw ValidationError("sweep config: size out of range");
    cfg.sizes.push_back(n);
  }
  for (const auto& w : need_array("noise_norms")) {
    if (!w.is_number()) throw ValidationError("sweep config: noise norms are numbers");
    const double v = w.get<double>();
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("sweep config: noise norms must be finite and >= 0");
    }
    cfg.noise_norms.push_back(v);
  }
  for (const auto& t : need_array("targets")) {
    if (t.is_string()) {
      if (t.get<std::string>() != "first") {
        throw ValidationError("sweep config: the only named target is \"first\"");
      }
      cfg.targets.push_back(std::nullopt);
    } else if (t.is_number_integer()) {
      const int x = t.get<int>();
      if (x < 0) throw ValidationError("sweep config: negative target index");
      cfg.targets.push_back(x);
    } else {
      throw ValidationError("sweep config: targets are \"first\" or integers");
    }
  }
  for (const auto& s : need_array("seeds")) {
    if (!s.is_number_integer() || s.get<long long>() < 0) {
      throw ValidationError("sweep config: seeds are nonnegative integers");
    }
    cfg.seeds.push_back(s.get<std::uint64_t>());
  }
  if (j.contains("mc_trials")) {
    if (!j.at("mc_trials").is_number_integer() || j.at("mc_trials").get<long long>() < 0) {
      throw ValidationError("sweep config: mc_trials must be a nonnegative integer");
    }
    cfg.mc_trials = j.at("mc_trials").get<long long>();
  }
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open sweep config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("sweep config " + path + ": " + e.what());
  }
  return parse_sweep_config(j);
}

const char* sweep_csv_header() {
  return "family,n,target,seed,noise_norm,delta,Delta,gamma,lambda1,epsilon,"
         "ht_p,ht_q,dpht,dpht_bound,qht_p,qht_q,dpqht,dpqht_bound,"
         "naive_dpqht_bound,p1_norm,szegedy_qht_bound,annihilation_threshold,"
         "weyl_ok,sandwich_ok,dpht_ok,dpqht_ok,spectrum_theorem_ok,"
         "positive_spectrum_ok";
}

std::string report_csv_row(const BoundReport& r) {
  std::ostringstream os;
  os << r.family << ',' << r.n << ',' << r.target << ','
     << (r.seed ? std::to_string(*r.seed) : std::string("NaN")) << ','
     << fmt17(r.noise_norm) << ',' << fmt17(r.delta) << ',' << fmt17(r.Delta) << ','
     << fmt17(r.gamma) << ',' << fmt17(r.lambda1) << ',' << fmt17(r.epsilon) << ','
     << fmt17(r.ht_p) << ',' << fmt17(r.ht_q) << ',' << fmt17(r.dpht) << ','
     << fmt17(r.dpht_bound) << ',' << fmt17(r.qht_p) << ',' << fmt17(r.qht_q) << ','
     << fmt17(r.dpqht) << ',' << fmt17(r.dpqht_bound) << ','
     << fmt17(r.naive_dpqht_bound) << ',' << fmt17(r.p1_norm) << ','
     << fmt17(r.szegedy_qht_bound) << ',' << fmt17(r.annihilation_threshold) << ','
     << fmt_bool(r.weyl_ok) << ',' << fmt_bool(r.sandwich_ok) << ','
     << fmt_bool(r.dpht_ok) << ',' << fmt_bool(r.dpqht_ok) << ','
     << fmt_bool(r.spectrum_theorem_ok) << ',' << fmt_bool(r.positive_spectrum_ok);
  return os.str();
}

void run_sweep(const SweepConfig& cfg, std::ostream& out) {
  out << sweep_csv_header() << '\n';
  VerifyOptions opts;
  opts.mc_trials = cfg.mc_trials;
  for (ChainFamily family : cfg.families) {
    for (int n : cfg.sizes) {
      for (double norm : cfg.noise_norms) {
        for (const auto& target : cfg.targets) {
          for (std::uint64_t seed : cfg.seeds) {
            const int x = target.value_or(0);
            BoundReport rep;
            try {
              ChainParams params;
              params.seed = seed;
              const StochasticMatrix P = make_chain(family, n, params);
              if (x >= n) throw ValidationError("target index past the chain size");
              const NoiseMatrix E = sample_noise(P, norm, seed);
              const StochasticMatrix Q = apply_noise(P, E);
              rep = verify_instance(P, Q, x, opts);
              rep.family = family_name(family);
              rep.seed = seed;
            } catch (const Error& e) {
              rep = failed_report(family, n, x, seed, norm);
              rep.warnings.push_back(e.what());
            }
            out << report_csv_row(rep) << '\n';
          }
        }
      }
    }
  }
}

std::string sweep_csv(const SweepConfig& cfg) {
  std::ostringstream os;
  run_sweep(cfg, os);
  return os.str();
}

}  // namespace walkbench
