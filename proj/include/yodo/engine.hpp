#pragma once

#include <string>

#include "yodo/mrf.hpp"

namespace yodo {

struct EliminationOrder {
  std::vector<int> order;  // permutation of all MRF variables
  int induced_width = 0;   // largest intermediate scope minus one
};

/// Greedy min-fill over the MRF interaction graph. Ties fall to the
/// smaller degree, then the smaller variable index, so the result is
/// deterministic. Pluggable in principle: marginalize accepts any
/// permutation of the variables.
EliminationOrder elimination_order(const Mrf& m);

struct TapeNode {
  enum class Op { leaf, product, sum_out };
  Op op = Op::leaf;
  int a = -1, b = -1;  // operand node ids
  int var = -1;        // leaf: potential index; sum_out: eliminated variable
  Factor value;        // result (leaves read from the MRF instead)
};

/// Record of one forward pass; enough to replay derivatives backwards.
struct Tape {
  std::vector<TapeNode> nodes;
  int root = -1;
  uint64_t forward_ops = 0;
  std::vector<std::string> warnings;
};

struct MarginalResult {
  double value = 0.0;
  Tape tape;
};

/// Forward pass: eliminates every variable in `order`, recording each
/// product and sum on the tape. Returns g = sum of all unmasked full
/// configurations, e.g. P(K=k) after apply_evidence({K=k}).
MarginalResult marginalize(const Mrf& m, const EliminationOrder& order);

/// dg/dtheta for every network parameter, aligned with param_enumerate.
/// Entries zeroed by evidence get gradient zero.
struct Gradient {
  std::vector<double> values;
  uint64_t backward_ops = 0;

  double at(int64_t param_index) const { return values[static_cast<size_t>(param_index)]; }
};

/// Single reverse sweep over the tape; costs a small constant times the
/// forward pass (asserted in tests as <= 4x by entry count).
Gradient backward(const Tape& tape, const Mrf& m);

/// One plain marginalization from scratch: moralize, mask, order, forward
/// pass. This is the unit of the finite-difference cost model and of the
/// bench baseline.
double ve_probability(const BayesianNetwork& bn, const Assignment& mask);

}  // namespace yodo
