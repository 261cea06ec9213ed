#pragma once

#include <cstdint>
#include <string>

#include "hrlmppi/ensemble.hpp"
#include "hrlmppi/policy.hpp"

namespace hrlmppi {

// Flat binary checkpoint: a small header (layer sizes, action box, ensemble
// size, seed) followed by all parameters as little-endian 64-bit floats in
// declaration order (policy mean net, log-std, value heads, input-norm
// statistics).
void save_checkpoint(const std::string& path, const PolicyNet& policy,
                     const ValueEnsemble& ensemble, std::uint64_t seed);

struct LoadedCheckpoint {
  PolicyNet policy;
  ValueEnsemble ensemble;
  std::uint64_t seed = 0;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace hrlmppi
