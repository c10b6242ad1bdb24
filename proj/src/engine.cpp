#include "yodo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace yodo {

namespace {

bool sorted_contains(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

void sorted_insert(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

void sorted_erase(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

// Number of non-adjacent pairs among the neighbours of v.
int64_t fill_count(const std::vector<std::vector<int>>& adj, int v) {
  const auto& nb = adj[static_cast<size_t>(v)];
  const int64_t d = static_cast<int64_t>(nb.size());
  int64_t pairs = d * (d - 1) / 2;
  int64_t linked = 0;
  for (size_t i = 0; i < nb.size(); ++i) {
    const auto& ni = adj[static_cast<size_t>(nb[i])];
    // count neighbours of nb[i] inside nb, above position i
    size_t a = i + 1, b = 0;
    while (a < nb.size() && b < ni.size()) {
      if (nb[a] < ni[b]) ++a;
      else if (ni[b] < nb[a]) ++b;
      else { ++linked; ++a; ++b; }
    }
  }
  return pairs - linked;
}

}  // namespace

EliminationOrder elimination_order(const Mrf& m) {
  const int n = m.variable_count();
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (const Factor& f : m.potentials) {
    for (size_t i = 0; i < f.scope.size(); ++i)
      for (size_t j = i + 1; j < f.scope.size(); ++j) {
        sorted_insert(adj[static_cast<size_t>(f.scope[i])], f.scope[j]);
        sorted_insert(adj[static_cast<size_t>(f.scope[j])], f.scope[i]);
      }
  }

  // Lazy min-heap over (fill, degree, index); stamps invalidate stale
  // entries after local graph changes.
  using Key = std::tuple<int64_t, int64_t, int, uint32_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<Key>> heap;
  std::vector<uint32_t> stamp(static_cast<size_t>(n), 0);
  std::vector<char> alive(static_cast<size_t>(n), 1);
  auto push = [&](int v) {
    heap.emplace(fill_count(adj, v),
                 static_cast<int64_t>(adj[static_cast<size_t>(v)].size()), v,
                 stamp[static_cast<size_t>(v)]);
  };
  for (int v = 0; v < n; ++v) push(v);

  EliminationOrder out;
  out.order.reserve(static_cast<size_t>(n));
  for (int step = 0; step < n; ++step) {
    int v = -1;
    while (!heap.empty()) {
      auto [fill, deg, cand, st] = heap.top();
      heap.pop();
      if (alive[static_cast<size_t>(cand)] && st == stamp[static_cast<size_t>(cand)]) {
        v = cand;
        break;
      }
    }
    if (v < 0) throw std::logic_error("elimination heap exhausted early");

    const std::vector<int> nb = adj[static_cast<size_t>(v)];
    out.induced_width = std::max<int>(out.induced_width, static_cast<int>(nb.size()));
    out.order.push_back(v);
    alive[static_cast<size_t>(v)] = 0;
    for (int u : nb) sorted_erase(adj[static_cast<size_t>(u)], v);
    adj[static_cast<size_t>(v)].clear();

    // Connect the neighbourhood into a clique; refresh every vertex whose
    // neighbourhood adjacency changed (the neighbours themselves plus the
    // common neighbours of each new edge).
    std::vector<int> dirty = nb;
    for (size_t i = 0; i < nb.size(); ++i) {
      for (size_t j = i + 1; j < nb.size(); ++j) {
        const int x = nb[i], y = nb[j];
        if (sorted_contains(adj[static_cast<size_t>(x)], y)) continue;
        sorted_insert(adj[static_cast<size_t>(x)], y);
        sorted_insert(adj[static_cast<size_t>(y)], x);
        const auto& ax = adj[static_cast<size_t>(x)];
        const auto& ay = adj[static_cast<size_t>(y)];
        size_t a = 0, b = 0;
        while (a < ax.size() && b < ay.size()) {
          if (ax[a] < ay[b]) ++a;
          else if (ay[b] < ax[a]) ++b;
          else { dirty.push_back(ax[a]); ++a; ++b; }
        }
      }
    }
    std::sort(dirty.begin(), dirty.end());
    dirty.erase(std::unique(dirty.begin(), dirty.end()), dirty.end());
    for (int u : dirty) {
      if (!alive[static_cast<size_t>(u)]) continue;
      ++stamp[static_cast<size_t>(u)];
      push(u);
    }
  }
  return out;
}

namespace {

const Factor& node_value(const Tape& t, const Mrf& m, int id) {
  const TapeNode& n = t.nodes[static_cast<size_t>(id)];
  if (n.op == TapeNode::Op::leaf) return m.potentials[static_cast<size_t>(n.var)];
  return n.value;
}

double factor_max(const Factor& f) {
  double mx = 0.0;
  for (double v : f.values) mx = std::max(mx, std::abs(v));
  return mx;
}

}  // namespace

MarginalResult marginalize(const Mrf& m, const EliminationOrder& order) {
  const int n = m.variable_count();
  if (n == 0) throw std::invalid_argument("cannot marginalize an empty model");
  {
    std::vector<char> seen(static_cast<size_t>(n), 0);
    if (static_cast<int>(order.order.size()) != n)
      throw std::invalid_argument("elimination order must cover every variable");
    for (int v : order.order) {
      if (v < 0 || v >= n || seen[static_cast<size_t>(v)])
        throw std::invalid_argument("elimination order is not a permutation");
      seen[static_cast<size_t>(v)] = 1;
    }
  }

  MarginalResult res;
  Tape& t = res.tape;
  std::vector<int> pos(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) pos[static_cast<size_t>(order.order[static_cast<size_t>(i)])] = i;

  // Bucket of a factor: its scope variable that is eliminated first.
  // Scalars go to a separate pool combined at the very end.
  std::vector<std::vector<int>> bucket(static_cast<size_t>(n));
  // min-heap by (value size, node id): combine small factors first
  using Item = std::pair<int64_t, int>;
  std::vector<int> scalars;

  auto place = [&](int id) {
    const Factor& f = node_value(t, m, id);
    if (f.scope.empty()) {
      scalars.push_back(id);
      return;
    }
    int best = f.scope[0];
    for (int v : f.scope)
      if (pos[static_cast<size_t>(v)] < pos[static_cast<size_t>(best)]) best = v;
    bucket[static_cast<size_t>(best)].push_back(id);
  };

  // Largest absolute value per node, to spot over/underflow with one scan.
  std::vector<double> node_max;

  for (size_t i = 0; i < m.potentials.size(); ++i) {
    TapeNode node;
    node.op = TapeNode::Op::leaf;
    node.var = static_cast<int>(i);
    t.nodes.push_back(std::move(node));
    node_max.push_back(factor_max(m.potentials[i]));
    place(static_cast<int>(t.nodes.size()) - 1);
  }

  auto record_product = [&](int a, int b) {
    TapeNode node;
    node.op = TapeNode::Op::product;
    node.a = a;
    node.b = b;
    node.value = factor_product(node_value(t, m, a), node_value(t, m, b));
    t.forward_ops += static_cast<uint64_t>(node.value.size());
    const double mx = factor_max(node.value);
    if (mx == 0.0 && node_max[static_cast<size_t>(a)] > 0.0 &&
        node_max[static_cast<size_t>(b)] > 0.0)
      t.warnings.push_back("product underflowed to all zeros at node " +
                           std::to_string(t.nodes.size()));
    if (std::isinf(mx))
      t.warnings.push_back("arithmetic overflow to +inf at node " +
                           std::to_string(t.nodes.size()));
    t.nodes.push_back(std::move(node));
    node_max.push_back(mx);
    return static_cast<int>(t.nodes.size()) - 1;
  };

  for (int v : order.order) {
    auto& bk = bucket[static_cast<size_t>(v)];
    if (bk.empty()) continue;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (int id : bk) heap.emplace(node_value(t, m, id).size(), id);
    bk.clear();
    while (heap.size() > 1) {
      auto [sa, a] = heap.top();
      heap.pop();
      auto [sb, b] = heap.top();
      heap.pop();
      const int id = record_product(a, b);
      heap.emplace(node_value(t, m, id).size(), id);
    }
    const int last = heap.top().second;
    TapeNode node;
    node.op = TapeNode::Op::sum_out;
    node.a = last;
    node.var = v;
    t.forward_ops += static_cast<uint64_t>(node_value(t, m, last).size());
    node.value = factor_sum_out(node_value(t, m, last), v);
    node_max.push_back(factor_max(node.value));
    t.nodes.push_back(std::move(node));
    place(static_cast<int>(t.nodes.size()) - 1);
  }

  // Every variable is eliminated, so only scalars remain; fold them.
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (int id : scalars) heap.emplace(1, id);
  while (heap.size() > 1) {
    auto [sa, a] = heap.top();
    heap.pop();
    auto [sb, b] = heap.top();
    heap.pop();
    const int id = record_product(a, b);
    heap.emplace(1, id);
  }
  t.root = heap.top().second;
  const Factor& root = node_value(t, m, t.root);
  if (!root.is_scalar()) throw std::logic_error("marginalization did not reach a scalar");
  res.value = root.scalar();
  return res;
}

Gradient backward(const Tape& t, const Mrf& m) {
  if (t.root < 0) throw std::invalid_argument("tape has no root");
  if (!node_value(t, m, t.root).is_scalar())
    throw std::invalid_argument("backward needs a scalar-rooted tape");
  const BayesianNetwork& bn = *m.bn;

  Gradient g;
  g.values.assign(static_cast<size_t>(bn.parameter_count()), 0.0);

  std::vector<Factor> adj(t.nodes.size());
  std::vector<char> has(t.nodes.size(), 0);
  adj[static_cast<size_t>(t.root)] = Factor::make_scalar(1.0);
  has[static_cast<size_t>(t.root)] = 1;

  auto add_into = [&](int id, Factor&& delta) {
    if (!has[static_cast<size_t>(id)]) {
      adj[static_cast<size_t>(id)] = std::move(delta);
      has[static_cast<size_t>(id)] = 1;
      return;
    }
    Factor& dst = adj[static_cast<size_t>(id)];
    for (size_t i = 0; i < dst.values.size(); ++i) dst.values[i] += delta.values[i];
  };

  for (int id = static_cast<int>(t.nodes.size()) - 1; id >= 0; --id) {
    if (!has[static_cast<size_t>(id)]) continue;
    const TapeNode& node = t.nodes[static_cast<size_t>(id)];
    const Factor& up = adj[static_cast<size_t>(id)];
    switch (node.op) {
      case TapeNode::Op::leaf: {
        const Provenance& prov = m.provenance[static_cast<size_t>(node.var)];
        for (size_t i = 0; i < up.values.size(); ++i) {
          if (!prov.masked[i])
            g.values[static_cast<size_t>(prov.origin[i])] += up.values[i];
        }
        break;
      }
      case TapeNode::Op::product: {
        // d/da = sum over scope(c)\scope(a) of adj(c) * b, and
        // symmetrically for b: one fused pass over scope(c).
        const Factor& a = node_value(t, m, node.a);
        const Factor& b = node_value(t, m, node.b);
        const Factor& c = node.value;
        Factor da{a.scope, a.cards, std::vector<double>(a.values.size(), 0.0)};
        Factor db{b.scope, b.cards, std::vector<double>(b.values.size(), 0.0)};
        const std::vector<int64_t> sa = aligned_strides(c, a);
        const std::vector<int64_t> sb = aligned_strides(c, b);
        const int nd = static_cast<int>(c.scope.size());
        std::vector<int> idx(static_cast<size_t>(nd), 0);
        int64_t oa = 0, ob = 0;
        const int64_t total = c.size();
        for (int64_t i = 0; i < total; ++i) {
          const double u = up.values[static_cast<size_t>(i)];
          da.values[static_cast<size_t>(oa)] += u * b.values[static_cast<size_t>(ob)];
          db.values[static_cast<size_t>(ob)] += u * a.values[static_cast<size_t>(oa)];
          for (int d = nd - 1; d >= 0; --d) {
            if (++idx[static_cast<size_t>(d)] < c.cards[static_cast<size_t>(d)]) {
              oa += sa[static_cast<size_t>(d)];
              ob += sb[static_cast<size_t>(d)];
              break;
            }
            idx[static_cast<size_t>(d)] = 0;
            oa -= sa[static_cast<size_t>(d)] * (c.cards[static_cast<size_t>(d)] - 1);
            ob -= sb[static_cast<size_t>(d)] * (c.cards[static_cast<size_t>(d)] - 1);
          }
        }
        g.backward_ops += static_cast<uint64_t>(2 * total);
        add_into(node.a, std::move(da));
        add_into(node.b, std::move(db));
        break;
      }
      case TapeNode::Op::sum_out: {
        // The adjoint broadcasts back over the eliminated variable.
        const Factor& a = node_value(t, m, node.a);
        Factor da{a.scope, a.cards, std::vector<double>(a.values.size(), 0.0)};
        const std::vector<int64_t> sc = aligned_strides(a, node.value);
        const int nd = static_cast<int>(a.scope.size());
        std::vector<int> idx(static_cast<size_t>(nd), 0);
        int64_t oc = 0;
        const int64_t total = a.size();
        for (int64_t i = 0; i < total; ++i) {
          da.values[static_cast<size_t>(i)] = up.values[static_cast<size_t>(oc)];
          for (int d = nd - 1; d >= 0; --d) {
            if (++idx[static_cast<size_t>(d)] < a.cards[static_cast<size_t>(d)]) {
              oc += sc[static_cast<size_t>(d)];
              break;
            }
            idx[static_cast<size_t>(d)] = 0;
            oc -= sc[static_cast<size_t>(d)] * (a.cards[static_cast<size_t>(d)] - 1);
          }
        }
        g.backward_ops += static_cast<uint64_t>(total);
        add_into(node.a, std::move(da));
        break;
      }
    }
    adj[static_cast<size_t>(id)] = Factor{};  // free as we go
  }
  return g;
}

double ve_probability(const BayesianNetwork& bn, const Assignment& mask) {
  Mrf base = moralize(bn);
  Mrf masked = apply_evidence(base, mask);
  EliminationOrder ord = elimination_order(masked);
  return marginalize(masked, ord).value;
}

}  // namespace yodo
