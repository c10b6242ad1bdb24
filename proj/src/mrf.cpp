#include "yodo/mrf.hpp"

#include <algorithm>
#include <stdexcept>

namespace yodo {

Mrf moralize(const BayesianNetwork& bn) {
  Mrf m;
  m.bn = &bn;
  const int n = bn.variable_count();
  m.cards.resize(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) m.cards[static_cast<size_t>(v)] = bn.card(v);

  m.potentials.reserve(static_cast<size_t>(n));
  m.provenance.reserve(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    const Cpt& cpt = bn.cpt(v);
    Factor f;
    f.scope.push_back(v);
    for (int p : cpt.parents) f.scope.push_back(p);
    std::sort(f.scope.begin(), f.scope.end());
    f.cards.resize(f.scope.size());
    for (size_t i = 0; i < f.scope.size(); ++i)
      f.cards[i] = bn.card(f.scope[i]);

    // Per scope dimension, the contribution of its coordinate to the
    // CPT-local index config * card + state. The child contributes its
    // state; parent k contributes its row-major configuration stride.
    const int card = bn.card(v);
    std::vector<int64_t> cfg_stride(cpt.parents.size(), 1);
    for (size_t k = cpt.parents.size(); k-- > 1;)
      cfg_stride[k - 1] = cfg_stride[k] * bn.card(cpt.parents[k]);
    std::vector<int64_t> local_stride(f.scope.size(), 0);
    for (size_t d = 0; d < f.scope.size(); ++d) {
      if (f.scope[d] == v) {
        local_stride[d] = 1;
      } else {
        for (size_t k = 0; k < cpt.parents.size(); ++k)
          if (cpt.parents[k] == f.scope[d]) local_stride[d] = cfg_stride[k] * card;
      }
    }

    int64_t total = 1;
    for (int k : f.cards) total *= k;
    f.values.resize(static_cast<size_t>(total));
    Provenance prov;
    prov.origin.resize(static_cast<size_t>(total));
    prov.masked.assign(static_cast<size_t>(total), 0);

    const int64_t base = bn.param_index(ParamRef{v, 0, 0});
    const int nd = static_cast<int>(f.scope.size());
    std::vector<int> idx(static_cast<size_t>(nd), 0);
    int64_t local = 0;
    for (int64_t i = 0; i < total; ++i) {
      f.values[static_cast<size_t>(i)] = cpt.table[static_cast<size_t>(local)];
      prov.origin[static_cast<size_t>(i)] = base + local;
      for (int d = nd - 1; d >= 0; --d) {
        if (++idx[static_cast<size_t>(d)] < f.cards[static_cast<size_t>(d)]) {
          local += local_stride[static_cast<size_t>(d)];
          break;
        }
        idx[static_cast<size_t>(d)] = 0;
        local -= local_stride[static_cast<size_t>(d)] * (f.cards[static_cast<size_t>(d)] - 1);
      }
    }
    m.potentials.push_back(std::move(f));
    m.provenance.push_back(std::move(prov));
  }
  return m;
}

Mrf apply_evidence(const Mrf& m, const Assignment& evidence) {
  const Assignment ev = normalize_assignment(evidence);
  for (const auto& [var, state] : ev) {
    if (var < 0 || var >= m.variable_count())
      throw std::out_of_range("evidence variable out of range");
    if (state < 0 || state >= m.cards[static_cast<size_t>(var)])
      throw std::out_of_range("evidence state out of range");
  }

  Mrf out = m;
  for (size_t pi = 0; pi < out.potentials.size(); ++pi) {
    Factor& f = out.potentials[pi];
    // Which scope dimensions are observed, and to what state?
    std::vector<std::pair<int, int>> dims;  // (dimension, required state)
    for (size_t d = 0; d < f.scope.size(); ++d) {
      for (const auto& [var, state] : ev)
        if (f.scope[d] == var) dims.emplace_back(static_cast<int>(d), state);
    }
    if (dims.empty()) continue;

    Provenance& prov = out.provenance[pi];
    const int nd = static_cast<int>(f.scope.size());
    std::vector<int> idx(static_cast<size_t>(nd), 0);
    const int64_t total = f.size();
    for (int64_t i = 0; i < total; ++i) {
      for (const auto& [d, state] : dims) {
        if (idx[static_cast<size_t>(d)] != state) {
          f.values[static_cast<size_t>(i)] = 0.0;
          prov.masked[static_cast<size_t>(i)] = 1;
          break;
        }
      }
      for (int d = nd - 1; d >= 0; --d) {
        if (++idx[static_cast<size_t>(d)] < f.cards[static_cast<size_t>(d)]) break;
        idx[static_cast<size_t>(d)] = 0;
      }
    }
  }
  return out;
}

}  // namespace yodo
