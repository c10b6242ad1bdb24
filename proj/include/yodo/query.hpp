#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "yodo/model.hpp"

namespace yodo {

/// P(target_var = target_state | evidence); empty evidence is a marginal.
struct Query {
  int target_var = -1;
  int target_state = -1;
  Assignment evidence;

  bool marginal() const { return evidence.empty(); }
  /// Mask for the numerator pass: {target} ∪ evidence.
  Assignment full_mask() const;
};

/// Resolves "VAR=state" strings against the network. Throws
/// std::invalid_argument on unknown names, duplicate evidence or a target
/// that also appears in the evidence.
Query parse_query(const BayesianNetwork& bn, std::string_view target,
                  const std::vector<std::string>& evidence);

/// Human-readable "P(T=t | E1=e1, E2=e2)".
std::string query_str(const BayesianNetwork& bn, const Query& q);

}  // namespace yodo
