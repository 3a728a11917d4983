#pragma once

#include <string>

#include <json.hpp>

#include "walkbench/chain.hpp"
#include "walkbench/perturb.hpp"

namespace walkbench {

// Chain wire format (version tag "walkbench-chain-v1"):
//   {
//     "format": "walkbench-chain-v1",
//     "n": <int>,
//     "convention": "column-stochastic",
//     "symmetric": <bool>,
//     "data": [n*n floats, row-major: entries(j, k) = data[j*n + k]]
//   }
// The loader re-validates every invariant and names the first violated column.

nlohmann::json chain_to_json(const StochasticMatrix& P);
StochasticMatrix chain_from_json(const nlohmann::json& j);

StochasticMatrix load_chain(const std::string& path);
void save_chain(const StochasticMatrix& P, const std::string& path);

// Perturbation sidecar: {"norm2": <float>, "seed": <int>} with the ACHIEVED
// norm (never the requested one).
nlohmann::json noise_sidecar(const NoiseMatrix& E);
void save_noise_sidecar(const NoiseMatrix& E, const std::string& path);

}  // namespace walkbench
