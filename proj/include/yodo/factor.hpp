#pragma once

#include <cstdint>
#include <vector>

namespace yodo {

/// Dense potential over a set of variables. `scope` is kept sorted by
/// variable index; `values` is row-major over the scope with the last
/// scope variable fastest. An empty scope is a scalar with one value.
struct Factor {
  std::vector<int> scope;
  std::vector<int> cards;  // aligned with scope
  std::vector<double> values;

  int64_t size() const { return static_cast<int64_t>(values.size()); }
  bool is_scalar() const { return scope.empty(); }
  double scalar() const { return values[0]; }

  static Factor make_scalar(double v) { return Factor{{}, {}, {v}}; }
};

/// Pointwise product over the union scope. Throws std::invalid_argument
/// when a shared variable carries different cardinalities.
Factor factor_product(const Factor& a, const Factor& b);

/// Marginalizes `var` out of `a`. The variable must be in scope.
Factor factor_sum_out(const Factor& a, int var);

/// Strides of `inner`'s storage along each dimension of `outer`'s scope
/// (0 where `outer` has a variable that `inner` lacks). `inner.scope`
/// must be a subset of `outer.scope`.
std::vector<int64_t> aligned_strides(const Factor& outer, const Factor& inner);

}  // namespace yodo
