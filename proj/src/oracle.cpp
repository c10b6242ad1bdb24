#include "yodo/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "yodo/engine.hpp"

namespace yodo {

double joint_enumeration_probability(const NetworkParts& parts, const Assignment& assignment) {
  const Assignment ev = normalize_assignment(assignment);
  const int n = static_cast<int>(parts.variables.size());
  std::vector<int> coord(static_cast<size_t>(n), 0);
  std::vector<int> free_vars;
  for (const auto& [v, s] : ev) {
    if (v < 0 || v >= n) throw std::out_of_range("assignment variable out of range");
    if (s < 0 || s >= parts.variables[static_cast<size_t>(v)].card())
      throw std::out_of_range("assignment state out of range");
    coord[static_cast<size_t>(v)] = s;
  }
  {
    std::vector<char> fixed(static_cast<size_t>(n), 0);
    for (const auto& [v, s] : ev) fixed[static_cast<size_t>(v)] = 1;
    int64_t configs = 1;
    for (int v = 0; v < n; ++v) {
      if (fixed[static_cast<size_t>(v)]) continue;
      free_vars.push_back(v);
      configs *= parts.variables[static_cast<size_t>(v)].card();
      if (configs > kEnumerationLimit)
        throw std::invalid_argument("joint space too large for enumeration (over 2^24)");
    }
  }

  double total = 0.0;
  while (true) {
    double prod = 1.0;
    for (int v = 0; v < n; ++v) {
      const Cpt& c = parts.cpts[static_cast<size_t>(v)];
      int64_t cfg = 0;
      for (int p : c.parents)
        cfg = cfg * parts.variables[static_cast<size_t>(p)].card() + coord[static_cast<size_t>(p)];
      prod *= c.table[static_cast<size_t>(
          cfg * parts.variables[static_cast<size_t>(v)].card() + coord[static_cast<size_t>(v)])];
    }
    total += prod;

    size_t k = free_vars.size();
    while (k > 0) {
      const int v = free_vars[k - 1];
      if (++coord[static_cast<size_t>(v)] < parts.variables[static_cast<size_t>(v)].card()) break;
      coord[static_cast<size_t>(v)] = 0;
      --k;
    }
    if (k == 0) break;
  }
  return total;
}

double joint_enumeration_probability(const BayesianNetwork& bn, const Assignment& assignment) {
  return joint_enumeration_probability(bn.parts(), assignment);
}

ProbabilityFn enumeration_probability_fn() {
  return [](const BayesianNetwork& bn, const Assignment& a) {
    return joint_enumeration_probability(bn, a);
  };
}

ProbabilityFn engine_probability_fn() {
  return [](const BayesianNetwork& bn, const Assignment& a) { return ve_probability(bn, a); };
}

double query_probability(const BayesianNetwork& bn, const Query& q, const ProbabilityFn& prob) {
  const double num = prob(bn, q.full_mask());
  if (q.marginal()) return num;
  const double den = prob(bn, q.evidence);
  if (den <= 0.0) throw std::domain_error("evidence has probability zero");
  return num / den;
}

BayesianNetwork covary_parameter(const BayesianNetwork& bn, const ParamRef& p, double theta) {
  const double theta0 = bn.param_value(p);
  if (1.0 - theta0 <= 0.0)
    throw std::domain_error("proportional covariation is undefined at theta0 = 1");
  const int card = bn.card(p.cpt);
  std::vector<double> column(static_cast<size_t>(card));
  const double scale = (1.0 - theta) / (1.0 - theta0);
  for (int s = 0; s < card; ++s) {
    const double old = bn.param_value(ParamRef{p.cpt, s, p.config});
    column[static_cast<size_t>(s)] = (s == p.state) ? theta : old * scale;
  }
  return bn.with_column(p.cpt, p.config, column);
}

double finite_difference_sensitivity(const BayesianNetwork& bn, const Query& q,
                                     const ParamRef& p, double h,
                                     const ProbabilityFn& prob) {
  const double theta0 = bn.param_value(p);
  if (1.0 - theta0 <= 0.0)
    throw std::domain_error("finite differences undefined at theta0 = 1");
  if (h <= 0.0) throw std::invalid_argument("step must be positive");

  auto f = [&](double theta) {
    return query_probability(covary_parameter(bn, p, theta), q, prob);
  };

  if (theta0 - h > 0.0 && theta0 + h < 1.0)
    return (f(theta0 + h) - f(theta0 - h)) / (2.0 * h);
  const double h2 = std::min(theta0, 1.0 - theta0) / 2.0;
  if (h2 > 0.0)
    return (f(theta0 + h2) - f(theta0 - h2)) / (2.0 * h2);
  // theta0 == 0: one-sided forward difference.
  return (f(h) - f(0.0)) / h;
}

std::vector<CurveSample> reinference_curve(const BayesianNetwork& bn, const Query& q,
                                           const ParamRef& p, const std::vector<double>& grid,
                                           const ProbabilityFn& prob) {
  for (double g : grid) {
    if (!(g >= 0.0 && g < 1.0))
      throw std::invalid_argument("curve grid points must lie in [0, 1)");
  }
  std::vector<CurveSample> out;
  out.reserve(grid.size());
  for (double g : grid)
    out.push_back({g, query_probability(covary_parameter(bn, p, g), q, prob)});
  return out;
}

int64_t fd_baseline_evaluations(const BayesianNetwork& bn) { return 2 * bn.parameter_count(); }

}  // namespace yodo
