#include "yodo/synthetic.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace yodo {
namespace {

std::string node_name(int i) { return "N" + std::to_string(i); }

std::vector<std::string> state_names(int card) {
  std::vector<std::string> out;
  out.reserve(card);
  for (int s = 0; s < card; ++s) out.push_back("s" + std::to_string(s));
  return out;
}

/// Fill one CPT with columns drawn uniformly and normalized, bounded away
/// from zero so sensitivity functions stay non-degenerate.
void fill_cpt(Cpt& cpt, const std::vector<Variable>& vars, SplitMix64& rng) {
  const int card = vars[cpt.child].card();
  int64_t configs = 1;
  for (int p : cpt.parents) configs *= vars[p].card();
  cpt.table.assign(static_cast<size_t>(configs) * card, 0.0);
  for (int64_t cfg = 0; cfg < configs; ++cfg) {
    double sum = 0.0;
    for (int s = 0; s < card; ++s) {
      double v = 0.05 + rng.unit();
      cpt.table[cfg * card + s] = v;
      sum += v;
    }
    for (int s = 0; s < card; ++s) cpt.table[cfg * card + s] /= sum;
  }
}

}  // namespace

NetworkParts synthesize_parts(const SyntheticSpec& spec) {
  if (spec.nodes < 1) throw std::invalid_argument("synthesize: nodes must be >= 1");
  if (spec.max_parents < 1) throw std::invalid_argument("synthesize: max_parents must be >= 1");
  if (spec.max_states < 2) throw std::invalid_argument("synthesize: max_states must be >= 2");

  SplitMix64 rng(spec.seed * 0x9e3779b97f4a7c15ull + 0x12345678ull);
  const int n = spec.nodes;

  NetworkParts parts;
  parts.name = (spec.kind == SyntheticSpec::Kind::polytree ? "polytree_" : "dag_") +
               std::to_string(n) + "_seed" + std::to_string(spec.seed);
  parts.variables.resize(n);
  parts.cpts.resize(n);
  for (int v = 0; v < n; ++v) {
    parts.variables[v].name = node_name(v);
    parts.variables[v].states = state_names(2 + rng.below(spec.max_states - 1));
    parts.cpts[v].child = v;
  }

  if (spec.kind == SyntheticSpec::Kind::polytree) {
    // Random tree: attach node i to a uniformly chosen earlier node, then each
    // edge is oriented at random. Orienting toward node i makes the earlier
    // node a parent of i and vice versa; in-degree is capped at max_parents by
    // falling back to the opposite orientation (the skeleton stays a tree, so
    // the result is a polytree regardless of orientation).
    std::vector<int> indeg(n, 0);
    for (int i = 1; i < n; ++i) {
      int j = rng.below(i);
      bool j_parent_of_i = rng.below(2) == 0;
      if (j_parent_of_i && indeg[i] >= spec.max_parents) j_parent_of_i = false;
      if (!j_parent_of_i && indeg[j] >= spec.max_parents) j_parent_of_i = true;
      if (j_parent_of_i) {
        parts.cpts[i].parents.push_back(j);
        ++indeg[i];
      } else {
        parts.cpts[j].parents.push_back(i);
        ++indeg[j];
      }
    }
    // Parent lists accumulate in arbitrary order; sort for determinism of the
    // table layout across library versions.
    for (int v = 0; v < n; ++v)
      std::sort(parts.cpts[v].parents.begin(), parts.cpts[v].parents.end());
  } else {
    // Layered DAG: node i draws up to max_parents distinct parents among
    // earlier nodes. Node ordering is already topological by construction.
    for (int i = 1; i < n; ++i) {
      int want = rng.below(std::min(spec.max_parents, i) + 1);
      std::vector<int> pool(i);
      for (int j = 0; j < i; ++j) pool[j] = j;
      for (int k = 0; k < want; ++k) {
        int pick = k + rng.below(i - k);
        std::swap(pool[k], pool[pick]);
      }
      parts.cpts[i].parents.assign(pool.begin(), pool.begin() + want);
      std::sort(parts.cpts[i].parents.begin(), parts.cpts[i].parents.end());
    }
  }

  for (int v = 0; v < n; ++v) fill_cpt(parts.cpts[v], parts.variables, rng);
  return parts;
}

BayesianNetwork synthesize(const SyntheticSpec& spec) {
  return BayesianNetwork::build(synthesize_parts(spec));
}

}  // namespace yodo
