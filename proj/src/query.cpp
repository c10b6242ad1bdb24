#include "yodo/query.hpp"

#include <algorithm>
#include <stdexcept>

namespace yodo {

namespace {

std::pair<int, int> resolve(const BayesianNetwork& bn, std::string_view spec) {
  const size_t eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 >= spec.size())
    throw std::invalid_argument("expected VAR=state, got '" + std::string(spec) + "'");
  const std::string_view var = spec.substr(0, eq);
  const std::string_view state = spec.substr(eq + 1);
  const int v = bn.variable_index(var);
  if (v < 0)
    throw std::invalid_argument("unknown variable '" + std::string(var) + "'");
  const int s = bn.state_index(v, state);
  if (s < 0)
    throw std::invalid_argument("variable '" + std::string(var) + "' has no state '" +
                                std::string(state) + "'");
  return {v, s};
}

}  // namespace

Assignment Query::full_mask() const {
  Assignment a = evidence;
  a.emplace_back(target_var, target_state);
  return normalize_assignment(std::move(a));
}

Query parse_query(const BayesianNetwork& bn, std::string_view target,
                  const std::vector<std::string>& evidence) {
  Query q;
  std::tie(q.target_var, q.target_state) = resolve(bn, target);
  for (const std::string& e : evidence) {
    auto [v, s] = resolve(bn, e);
    if (v == q.target_var)
      throw std::invalid_argument("target variable '" + bn.variable(v).name +
                                  "' also appears in the evidence");
    q.evidence.emplace_back(v, s);
  }
  try {
    q.evidence = normalize_assignment(std::move(q.evidence));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("evidence mentions a variable twice");
  }
  return q;
}

std::string query_str(const BayesianNetwork& bn, const Query& q) {
  std::string s = "P(" + bn.variable(q.target_var).name + "=" +
                  bn.variable(q.target_var).states[static_cast<size_t>(q.target_state)];
  if (!q.evidence.empty()) {
    s += " |";
    bool first = true;
    for (const auto& [v, st] : q.evidence) {
      s += first ? " " : ", ";
      first = false;
      s += bn.variable(v).name + "=" + bn.variable(v).states[static_cast<size_t>(st)];
    }
  }
  return s + ")";
}

}  // namespace yodo
