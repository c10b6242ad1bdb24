#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace yodo {

/// A (variable index, state index) pair list describing an observed
/// configuration. Kept sorted by variable index, one entry per variable.
using Assignment = std::vector<std::pair<int, int>>;

/// Sorts by variable index and rejects duplicate variables.
Assignment normalize_assignment(Assignment a);

struct Variable {
  std::string name;
  std::vector<std::string> states;
  std::vector<std::string> properties;  // opaque metadata from the input file
  int def_line = 0;

  int card() const { return static_cast<int>(states.size()); }
};

/// Conditional probability table for one variable. Entries are stored
/// configuration-major: table[config * card + state], where config runs
/// row-major over the parents (last parent fastest).
struct Cpt {
  int child = -1;
  std::vector<int> parents;
  std::vector<double> table;
  std::vector<std::string> properties;
  int def_line = 0;

  int64_t config_count(const std::vector<Variable>& vars) const {
    int64_t n = 1;
    for (int p : parents) n *= vars[static_cast<size_t>(p)].card();
    return n;
  }
};

/// Raw, not-yet-validated network pieces as read from a file or assembled
/// by hand. BayesianNetwork::build turns these into a usable network.
struct NetworkParts {
  std::string name = "network";
  std::vector<Variable> variables;
  std::vector<Cpt> cpts;  // cpts[v] belongs to variables[v]
  std::vector<std::string> properties;
};

/// Identifies one CPT entry theta_i: the table of `cpt`, parent
/// configuration `config`, child state `state`.
struct ParamRef {
  int cpt = 0;
  int state = 0;
  int config = 0;

  bool operator==(const ParamRef&) const = default;
};

struct ValidationIssue {
  bool is_error = true;  // false: warning only
  std::string where;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const {
    for (const auto& i : issues)
      if (i.is_error) return false;
    return true;
  }
  int error_count() const {
    int n = 0;
    for (const auto& i : issues) n += i.is_error ? 1 : 0;
    return n;
  }
  std::string str() const;
};

/// Structural and numeric diagnostics: column sums off by more than 1e-9,
/// negative entries, cycles, parent/table shape mismatches. Diagnostics,
/// not exceptions; an empty error list means the parts are valid.
ValidationReport validate_parts(const NetworkParts& parts);

struct ValidationError : std::runtime_error {
  explicit ValidationError(const ValidationReport& r)
      : std::runtime_error(r.str()), report(r) {}
  ValidationReport report;
};

/// Immutable discrete Bayesian network. Construction validates the parts,
/// renormalizes CPT columns that are within tolerance of summing to one,
/// and fixes the canonical parameter order (topological variable order,
/// then parent configuration, then child state).
class BayesianNetwork {
 public:
  static BayesianNetwork build(NetworkParts parts);

  int variable_count() const { return static_cast<int>(parts_.variables.size()); }
  int arc_count() const;
  const Variable& variable(int v) const { return parts_.variables[static_cast<size_t>(v)]; }
  const Cpt& cpt(int v) const { return parts_.cpts[static_cast<size_t>(v)]; }
  int card(int v) const { return variable(v).card(); }
  const NetworkParts& parts() const { return parts_; }
  const std::vector<int>& topo_order() const { return topo_; }

  /// -1 when no variable has this name.
  int variable_index(std::string_view name) const;
  /// -1 when the variable has no such state label.
  int state_index(int v, std::string_view state) const;

  int64_t parameter_count() const { return param_count_; }
  int64_t param_index(const ParamRef& p) const;
  ParamRef param_at(int64_t index) const;
  std::vector<ParamRef> param_enumerate() const;
  double param_value(const ParamRef& p) const;

  /// All parameters bound to p by the sum-to-one constraint of its CPT
  /// column, excluding p itself, in child-state order.
  std::vector<ParamRef> cpt_group(const ParamRef& p) const;

  /// Display form "C=c|P1=p1;P2=p2" (root CPTs: "C=c"). Names are
  /// sanitized so the result is CSV-safe.
  std::string param_name(const ParamRef& p) const;

  /// Copy with one CPT column replaced. The column must have `card(cpt)`
  /// entries. No revalidation; meant for covariation-style re-inference.
  BayesianNetwork with_column(int cpt, int config, const std::vector<double>& column) const;

  const int64_t* cpt_base() const { return cpt_base_.data(); }

 private:
  BayesianNetwork() = default;
  void check_param(const ParamRef& p) const;

  NetworkParts parts_;
  std::vector<int> topo_;        // canonical topological order, ties by index
  std::vector<int64_t> cpt_base_;  // first parameter index per cpt
  int64_t param_count_ = 0;
};

/// Diagnostics for an already-built network (always clean by construction)
/// or, more usefully, for raw parts.
inline ValidationReport validate_network(const BayesianNetwork& bn) {
  return validate_parts(bn.parts());
}
inline ValidationReport validate_network(const NetworkParts& parts) {
  return validate_parts(parts);
}

}  // namespace yodo
