#include "yodo/factor.hpp"

#include <stdexcept>

namespace yodo {

std::vector<int64_t> aligned_strides(const Factor& outer, const Factor& inner) {
  // Strides of inner's own storage, last dimension fastest.
  std::vector<int64_t> own(inner.scope.size(), 1);
  for (size_t i = inner.scope.size(); i-- > 1;)
    own[i - 1] = own[i] * inner.cards[i];

  std::vector<int64_t> out(outer.scope.size(), 0);
  size_t j = 0;
  for (size_t i = 0; i < outer.scope.size(); ++i) {
    if (j < inner.scope.size() && inner.scope[j] == outer.scope[i]) {
      if (inner.cards[j] != outer.cards[i])
        throw std::invalid_argument("cardinality mismatch for shared variable");
      out[i] = own[j];
      ++j;
    }
  }
  if (j != inner.scope.size())
    throw std::invalid_argument("inner scope is not a subset of outer scope");
  return out;
}

Factor factor_product(const Factor& a, const Factor& b) {
  Factor c;
  // Merge the two sorted scopes.
  size_t ia = 0, ib = 0;
  while (ia < a.scope.size() || ib < b.scope.size()) {
    if (ib == b.scope.size() || (ia < a.scope.size() && a.scope[ia] < b.scope[ib])) {
      c.scope.push_back(a.scope[ia]);
      c.cards.push_back(a.cards[ia]);
      ++ia;
    } else if (ia == a.scope.size() || b.scope[ib] < a.scope[ia]) {
      c.scope.push_back(b.scope[ib]);
      c.cards.push_back(b.cards[ib]);
      ++ib;
    } else {
      if (a.cards[ia] != b.cards[ib])
        throw std::invalid_argument("cardinality mismatch for shared variable");
      c.scope.push_back(a.scope[ia]);
      c.cards.push_back(a.cards[ia]);
      ++ia;
      ++ib;
    }
  }
  int64_t total = 1;
  for (int k : c.cards) total *= k;
  c.values.resize(static_cast<size_t>(total));

  const std::vector<int64_t> sa = aligned_strides(c, a);
  const std::vector<int64_t> sb = aligned_strides(c, b);
  const int nd = static_cast<int>(c.scope.size());
  std::vector<int> idx(static_cast<size_t>(nd), 0);
  int64_t oa = 0, ob = 0;
  for (int64_t i = 0; i < total; ++i) {
    c.values[static_cast<size_t>(i)] = a.values[static_cast<size_t>(oa)] * b.values[static_cast<size_t>(ob)];
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
  return c;
}

Factor factor_sum_out(const Factor& a, int var) {
  Factor c;
  bool found = false;
  for (size_t i = 0; i < a.scope.size(); ++i) {
    if (a.scope[i] == var) {
      found = true;
      continue;
    }
    c.scope.push_back(a.scope[i]);
    c.cards.push_back(a.cards[i]);
  }
  if (!found) throw std::invalid_argument("variable to sum out is not in scope");
  int64_t total = 1;
  for (int k : c.cards) total *= k;
  c.values.assign(static_cast<size_t>(total), 0.0);

  // Walk a once, accumulating into c with a stride of zero on var's axis.
  const std::vector<int64_t> sc = aligned_strides(a, c);
  const int nd = static_cast<int>(a.scope.size());
  std::vector<int> idx(static_cast<size_t>(nd), 0);
  int64_t oc = 0;
  const int64_t asz = a.size();
  for (int64_t i = 0; i < asz; ++i) {
    c.values[static_cast<size_t>(oc)] += a.values[static_cast<size_t>(i)];
    for (int d = nd - 1; d >= 0; --d) {
      if (++idx[static_cast<size_t>(d)] < a.cards[static_cast<size_t>(d)]) {
        oc += sc[static_cast<size_t>(d)];
        break;
      }
      idx[static_cast<size_t>(d)] = 0;
      oc -= sc[static_cast<size_t>(d)] * (a.cards[static_cast<size_t>(d)] - 1);
    }
  }
  return c;
}

}  // namespace yodo
