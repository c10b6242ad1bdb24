#pragma once

#include "yodo/factor.hpp"
#include "yodo/model.hpp"

namespace yodo {

/// Where each potential entry came from: `origin[i]` is the canonical
/// parameter index of the CPT entry behind values[i]; `masked[i]` is set
/// once evidence has zeroed the entry. Masked entries keep their origin
/// so the covariation chain rule can still identify them.
struct Provenance {
  std::vector<int64_t> origin;
  std::vector<uint8_t> masked;
};

/// Moralized Markov random field: one potential per CPT, over the child
/// and its parents. Potentials are plain data; evidence masking copies.
struct Mrf {
  const BayesianNetwork* bn = nullptr;
  std::vector<int> cards;  // cards[v] for every network variable
  std::vector<Factor> potentials;
  std::vector<Provenance> provenance;

  int variable_count() const { return static_cast<int>(cards.size()); }
};

/// One potential per CPT over {child} ∪ parents; values laid out over the
/// sorted scope, provenance mapping every entry to its parameter.
Mrf moralize(const BayesianNetwork& bn);

/// Zeroes all potential entries inconsistent with the assignment and marks
/// them masked. Idempotent; potentials never observed are copied as-is.
Mrf apply_evidence(const Mrf& m, const Assignment& evidence);

}  // namespace yodo
