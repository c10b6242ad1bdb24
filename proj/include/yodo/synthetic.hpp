#pragma once

#include <cstdint>

#include "yodo/model.hpp"

namespace yodo {

/// Deterministic random-network generator. The RNG is a local splitmix64
/// so the same spec yields the same network on every platform.
struct SyntheticSpec {
  enum class Kind { polytree, dag };
  Kind kind = Kind::polytree;
  int nodes = 10;
  int max_parents = 3;
  int max_states = 3;  // cardinalities drawn from [2, max_states]
  uint64_t seed = 0;
};

NetworkParts synthesize_parts(const SyntheticSpec& spec);
BayesianNetwork synthesize(const SyntheticSpec& spec);

/// Tiny deterministic RNG shared by the generator and the test helpers.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  /// Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace yodo
