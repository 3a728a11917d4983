#include "walkbench/chain_io.hpp"

#include <fstream>

namespace walkbench {

namespace {

constexpr const char* kChainFormat = "walkbench-chain-v1";

}  // namespace

nlohmann::json chain_to_json(const StochasticMatrix& P) {
  const int n = P.size();
  std::vector<double> data;
  data.reserve(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) data.push_back(P.entries(j, k));
  }
  return nlohmann::json{{"format", kChainFormat},
                        {"n", n},
                        {"convention", "column-stochastic"},
                        {"symmetric", P.symmetric},
                        {"data", std::move(data)}};
}

StochasticMatrix chain_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("chain file: top level is not an object");
  if (!j.contains("format") || j.at("format") != kChainFormat) {
    throw ValidationError("chain file: missing or unknown format tag");
  }
  if (j.value("convention", "") != std::string("column-stochastic")) {
    throw ValidationError("chain file: convention must be \"column-stochastic\"");
  }
  if (!j.contains("n") || !j.at("n").is_number_integer()) {
    throw ValidationError("chain file: field n missing or not an integer");
  }
  const int n = j.at("n").get<int>();
  if (n < 2 || n > kMaxChainSize) {
    throw ValidationError("chain file: n out of range");
  }
  if (!j.contains("symmetric") || !j.at("symmetric").is_boolean()) {
    throw ValidationError("chain file: field symmetric missing or not a bool");
  }
  if (!j.contains("data") || !j.at("data").is_array()) {
    throw ValidationError("chain file: field data missing or not an array");
  }
  const auto& data = j.at("data");
  if (static_cast<long long>(data.size()) != static_cast<long long>(n) * n) {
    throw ValidationError("chain file: data length is not n*n");
  }
  Eigen::MatrixXd m(n, n);
  for (int j2 = 0; j2 < n; ++j2) {
    for (int k = 0; k < n; ++k) {
      const auto& v = data[static_cast<size_t>(j2) * n + k];
      if (!v.is_number()) throw ValidationError("chain file: non-numeric data entry");
      m(j2, k) = v.get<double>();
    }
  }
  return make_stochastic(std::move(m), j.at("symmetric").get<bool>());
}

StochasticMatrix load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open chain file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("chain file " + path + ": " + e.what());
  }
  return chain_from_json(j);
}

void save_chain(const StochasticMatrix& P, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write chain file: " + path);
  out << chain_to_json(P).dump(2) << "\n";
  if (!out) throw ValidationError("write failed: " + path);
}

nlohmann::json noise_sidecar(const NoiseMatrix& E) {
  return nlohmann::json{{"norm2", E.norm2}, {"seed", E.seed}};
}

void save_noise_sidecar(const NoiseMatrix& E, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write noise sidecar: " + path);
  out << noise_sidecar(E).dump(2) << "\n";
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace walkbench
