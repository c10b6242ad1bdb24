#include "yodo/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

namespace yodo {

namespace {

constexpr double kSumTolerance = 1e-9;
// Columns closer to one than this are left untouched so that a load /
// serialize / load cycle reproduces entries bit-exactly.
constexpr double kRenormSkip = 1e-14;

std::string sanitize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case ',': case ';': case '|': case '=': case '\n': case '\r':
        out.push_back('_');
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

}  // namespace

Assignment normalize_assignment(Assignment a) {
  std::sort(a.begin(), a.end());
  for (size_t i = 1; i < a.size(); ++i) {
    if (a[i].first == a[i - 1].first)
      throw std::invalid_argument("assignment mentions a variable twice");
  }
  return a;
}

std::string ValidationReport::str() const {
  std::ostringstream os;
  for (const auto& i : issues) {
    os << (i.is_error ? "error" : "warning") << " [" << i.where << "]: "
       << i.message << "\n";
  }
  return os.str();
}

ValidationReport validate_parts(const NetworkParts& parts) {
  ValidationReport rep;
  auto error = [&](std::string where, std::string msg) {
    rep.issues.push_back({true, std::move(where), std::move(msg)});
  };
  auto warn = [&](std::string where, std::string msg) {
    rep.issues.push_back({false, std::move(where), std::move(msg)});
  };

  const int n = static_cast<int>(parts.variables.size());
  if (parts.cpts.size() != parts.variables.size())
    error(parts.name, "network needs exactly one probability table per variable");

  std::set<std::string> seen_names;
  for (int v = 0; v < n; ++v) {
    const Variable& var = parts.variables[static_cast<size_t>(v)];
    if (var.name.empty()) error("variable #" + std::to_string(v), "empty name");
    if (!seen_names.insert(var.name).second)
      error(var.name, "duplicate variable name");
    if (var.card() == 0) error(var.name, "variable has no states");
    if (var.card() == 1) warn(var.name, "variable has a single state");
    std::set<std::string> st(var.states.begin(), var.states.end());
    if (st.size() != var.states.size())
      error(var.name, "duplicate state label");
  }

  const int m = static_cast<int>(parts.cpts.size());
  for (int c = 0; c < m; ++c) {
    const Cpt& cpt = parts.cpts[static_cast<size_t>(c)];
    std::string where = (c < n) ? parts.variables[static_cast<size_t>(c)].name
                                : "cpt #" + std::to_string(c);
    if (cpt.def_line > 0) where += " (line " + std::to_string(cpt.def_line) + ")";
    if (cpt.child != c) {
      error(where, "probability table is not aligned with its variable");
      continue;
    }
    bool shape_ok = true;
    std::set<int> pset;
    for (int p : cpt.parents) {
      if (p < 0 || p >= n) {
        error(where, "parent index out of range");
        shape_ok = false;
      } else if (!pset.insert(p).second) {
        error(where, "duplicate parent");
        shape_ok = false;
      } else if (p == c) {
        error(where, "variable listed as its own parent");
        shape_ok = false;
      }
    }
    if (!shape_ok || c >= n) continue;

    const int card = parts.variables[static_cast<size_t>(c)].card();
    if (card == 0) continue;
    const int64_t configs = cpt.config_count(parts.variables);
    if (static_cast<int64_t>(cpt.table.size()) != configs * card) {
      error(where, "table has " + std::to_string(cpt.table.size()) +
                       " entries, expected " + std::to_string(configs * card));
      continue;
    }
    for (int64_t cfg = 0; cfg < configs; ++cfg) {
      double sum = 0.0;
      bool entries_ok = true;
      for (int s = 0; s < card; ++s) {
        const double x = cpt.table[static_cast<size_t>(cfg * card + s)];
        if (!std::isfinite(x)) {
          error(where, "non-finite entry in configuration " + std::to_string(cfg));
          entries_ok = false;
          break;
        }
        if (x < 0.0) {
          error(where, "negative entry " + std::to_string(x) +
                           " in configuration " + std::to_string(cfg));
          entries_ok = false;
          break;
        }
        if (x > 1.0 + kSumTolerance) {
          error(where, "entry " + std::to_string(x) + " above one in configuration " +
                           std::to_string(cfg));
          entries_ok = false;
          break;
        }
        sum += x;
      }
      if (entries_ok && std::abs(sum - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os << "column for configuration " << cfg << " sums to " << sum
           << ", expected 1 within 1e-9";
        error(where, os.str());
      }
    }
  }
  if (!rep.ok()) return rep;

  // Acyclicity via Kahn's algorithm; report any leftover vertices.
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  std::vector<std::vector<int>> children(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) {
    for (int p : parts.cpts[static_cast<size_t>(c)].parents) {
      children[static_cast<size_t>(p)].push_back(c);
      ++indeg[static_cast<size_t>(c)];
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<size_t>(v)] == 0) ready.push(v);
  int emitted = 0;
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    ++emitted;
    for (int c : children[static_cast<size_t>(v)])
      if (--indeg[static_cast<size_t>(c)] == 0) ready.push(c);
  }
  if (emitted != n) {
    std::string cyc;
    for (int v = 0; v < n; ++v) {
      if (indeg[static_cast<size_t>(v)] > 0) {
        if (!cyc.empty()) cyc += ", ";
        cyc += parts.variables[static_cast<size_t>(v)].name;
      }
    }
    error(parts.name, "parent structure contains a cycle through: " + cyc);
  }
  return rep;
}

BayesianNetwork BayesianNetwork::build(NetworkParts parts) {
  ValidationReport rep = validate_parts(parts);
  if (!rep.ok()) throw ValidationError(rep);

  BayesianNetwork bn;
  bn.parts_ = std::move(parts);
  const int n = bn.variable_count();

  // Renormalize columns that are off by more than float noise but inside
  // the accepted tolerance.
  for (int v = 0; v < n; ++v) {
    Cpt& cpt = bn.parts_.cpts[static_cast<size_t>(v)];
    const int card = bn.card(v);
    const int64_t configs = cpt.config_count(bn.parts_.variables);
    for (int64_t cfg = 0; cfg < configs; ++cfg) {
      double sum = 0.0;
      for (int s = 0; s < card; ++s) sum += cpt.table[static_cast<size_t>(cfg * card + s)];
      if (std::abs(sum - 1.0) > kRenormSkip) {
        for (int s = 0; s < card; ++s) cpt.table[static_cast<size_t>(cfg * card + s)] /= sum;
      }
    }
  }

  // Canonical topological order: Kahn with the smallest variable index first.
  std::vector<int> indeg(static_cast<size_t>(n), 0);
  std::vector<std::vector<int>> children(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) {
    for (int p : bn.parts_.cpts[static_cast<size_t>(c)].parents) {
      children[static_cast<size_t>(p)].push_back(c);
      ++indeg[static_cast<size_t>(c)];
    }
  }
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[static_cast<size_t>(v)] == 0) ready.push(v);
  bn.topo_.reserve(static_cast<size_t>(n));
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    bn.topo_.push_back(v);
    for (int c : children[static_cast<size_t>(v)])
      if (--indeg[static_cast<size_t>(c)] == 0) ready.push(c);
  }

  bn.cpt_base_.assign(static_cast<size_t>(n), 0);
  int64_t base = 0;
  for (int v : bn.topo_) {
    bn.cpt_base_[static_cast<size_t>(v)] = base;
    base += static_cast<int64_t>(bn.parts_.cpts[static_cast<size_t>(v)].table.size());
  }
  bn.param_count_ = base;
  return bn;
}

int BayesianNetwork::arc_count() const {
  int arcs = 0;
  for (const Cpt& c : parts_.cpts) arcs += static_cast<int>(c.parents.size());
  return arcs;
}

int BayesianNetwork::variable_index(std::string_view name) const {
  for (int v = 0; v < variable_count(); ++v)
    if (variable(v).name == name) return v;
  return -1;
}

int BayesianNetwork::state_index(int v, std::string_view state) const {
  const auto& st = variable(v).states;
  for (int s = 0; s < static_cast<int>(st.size()); ++s)
    if (st[static_cast<size_t>(s)] == state) return s;
  return -1;
}

void BayesianNetwork::check_param(const ParamRef& p) const {
  if (p.cpt < 0 || p.cpt >= variable_count())
    throw std::out_of_range("parameter cpt index out of range");
  const int card = this->card(p.cpt);
  const int64_t configs = cpt(p.cpt).config_count(parts_.variables);
  if (p.state < 0 || p.state >= card)
    throw std::out_of_range("parameter state index out of range");
  if (p.config < 0 || p.config >= configs)
    throw std::out_of_range("parameter configuration index out of range");
}

int64_t BayesianNetwork::param_index(const ParamRef& p) const {
  check_param(p);
  return cpt_base_[static_cast<size_t>(p.cpt)] +
         static_cast<int64_t>(p.config) * card(p.cpt) + p.state;
}

ParamRef BayesianNetwork::param_at(int64_t index) const {
  if (index < 0 || index >= param_count_)
    throw std::out_of_range("parameter index out of range");
  for (int v : topo_) {
    const int64_t base = cpt_base_[static_cast<size_t>(v)];
    const int64_t size = static_cast<int64_t>(parts_.cpts[static_cast<size_t>(v)].table.size());
    if (index >= base && index < base + size) {
      const int64_t local = index - base;
      const int c = card(v);
      return ParamRef{v, static_cast<int>(local % c), static_cast<int>(local / c)};
    }
  }
  throw std::out_of_range("parameter index out of range");
}

std::vector<ParamRef> BayesianNetwork::param_enumerate() const {
  std::vector<ParamRef> out;
  out.reserve(static_cast<size_t>(param_count_));
  for (int v : topo_) {
    const int card = this->card(v);
    const int64_t configs = cpt(v).config_count(parts_.variables);
    for (int64_t cfg = 0; cfg < configs; ++cfg)
      for (int s = 0; s < card; ++s)
        out.push_back(ParamRef{v, s, static_cast<int>(cfg)});
  }
  return out;
}

double BayesianNetwork::param_value(const ParamRef& p) const {
  check_param(p);
  return cpt(p.cpt).table[static_cast<size_t>(
      static_cast<int64_t>(p.config) * card(p.cpt) + p.state)];
}

std::vector<ParamRef> BayesianNetwork::cpt_group(const ParamRef& p) const {
  check_param(p);
  std::vector<ParamRef> out;
  const int card = this->card(p.cpt);
  out.reserve(static_cast<size_t>(card > 0 ? card - 1 : 0));
  for (int s = 0; s < card; ++s)
    if (s != p.state) out.push_back(ParamRef{p.cpt, s, p.config});
  return out;
}

std::string BayesianNetwork::param_name(const ParamRef& p) const {
  check_param(p);
  const Cpt& c = cpt(p.cpt);
  std::string out = sanitize(variable(p.cpt).name) + "=" +
                    sanitize(variable(p.cpt).states[static_cast<size_t>(p.state)]);
  if (c.parents.empty()) return out;
  out += "|";
  // Decode the row-major configuration (last parent fastest).
  std::vector<int> coords(c.parents.size(), 0);
  int64_t rest = p.config;
  for (size_t i = c.parents.size(); i-- > 0;) {
    const int pc = card(c.parents[i]);
    coords[i] = static_cast<int>(rest % pc);
    rest /= pc;
  }
  for (size_t i = 0; i < c.parents.size(); ++i) {
    if (i > 0) out += ";";
    const int pv = c.parents[i];
    out += sanitize(variable(pv).name) + "=" +
           sanitize(variable(pv).states[static_cast<size_t>(coords[i])]);
  }
  return out;
}

BayesianNetwork BayesianNetwork::with_column(int cpt_index, int config,
                                             const std::vector<double>& column) const {
  if (cpt_index < 0 || cpt_index >= variable_count())
    throw std::out_of_range("cpt index out of range");
  const int card = this->card(cpt_index);
  if (static_cast<int>(column.size()) != card)
    throw std::invalid_argument("replacement column has the wrong length");
  BayesianNetwork bn = *this;
  Cpt& c = bn.parts_.cpts[static_cast<size_t>(cpt_index)];
  const int64_t configs = c.config_count(bn.parts_.variables);
  if (config < 0 || config >= configs)
    throw std::out_of_range("configuration index out of range");
  for (int s = 0; s < card; ++s)
    c.table[static_cast<size_t>(static_cast<int64_t>(config) * card + s)] = column[static_cast<size_t>(s)];
  return bn;
}

}  // namespace yodo
