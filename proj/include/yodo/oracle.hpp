#pragma once

#include <functional>

#include "yodo/query.hpp"

namespace yodo {

/// Guard for the naive oracle: refuse joint spaces beyond 2^24 entries.
constexpr int64_t kEnumerationLimit = int64_t{1} << 24;

/// P(assignment) by summing the product of CPT entries over every full
/// configuration consistent with the assignment. Shares nothing with the
/// variable-elimination engine, so agreement between the two is evidence
/// of correctness. Throws std::invalid_argument past kEnumerationLimit.
double joint_enumeration_probability(const NetworkParts& parts, const Assignment& assignment);
double joint_enumeration_probability(const BayesianNetwork& bn, const Assignment& assignment);

/// Evaluates one masked probability on a (possibly mutated) network.
/// The two stock implementations are the naive oracle above and the
/// engine's ve_probability; callers pick how much independence they need.
using ProbabilityFn = std::function<double(const BayesianNetwork&, const Assignment&)>;

ProbabilityFn enumeration_probability_fn();
ProbabilityFn engine_probability_fn();

/// Conditional query probability via two masked evaluations.
double query_probability(const BayesianNetwork& bn, const Query& q, const ProbabilityFn& prob);

/// Copy of the network with p set to theta and its CPT column siblings
/// scaled proportionally: theta_j = theta_j0 * (1-theta) / (1-theta0).
/// Throws std::domain_error when theta0 = 1.
BayesianNetwork covary_parameter(const BayesianNetwork& bn, const ParamRef& p, double theta);

/// Central difference of the covaried query probability; h shrinks once
/// when theta0 ± h leaves (0,1) and falls back to a one-sided difference
/// at the boundary. |result| approximates the sensitivity value.
double finite_difference_sensitivity(const BayesianNetwork& bn, const Query& q,
                                     const ParamRef& p, double h,
                                     const ProbabilityFn& prob);

struct CurveSample {
  double theta = 0.0;
  double probability = 0.0;
};

/// Query probability re-inferred from scratch at each grid point under
/// proportional covariation. Grid values must lie in [0, 1).
std::vector<CurveSample> reinference_curve(const BayesianNetwork& bn, const Query& q,
                                           const ParamRef& p, const std::vector<double>& grid,
                                           const ProbabilityFn& prob);

/// Number of evaluator calls a finite-difference baseline needs for the
/// whole network: two per parameter.
int64_t fd_baseline_evaluations(const BayesianNetwork& bn);

}  // namespace yodo
