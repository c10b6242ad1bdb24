#pragma once

#include <optional>

#include "yodo/engine.hpp"
#include "yodo/query.hpp"

namespace yodo {

struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The query probability as a function of one parameter under proportional
/// covariation: f(t) = (c1·t + c2) / (c3·t + c4). Marginal queries and
/// conditional ones whose denominator does not depend on the parameter are
/// linear (c3 = 0, c4 = 1); otherwise the function is a rectangular
/// hyperbola f(t) = r / (t - s) + t0 with the center and residue below.
struct SensFunction {
  enum class Kind { linear, hyperbolic };
  Kind kind = Kind::linear;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 1.0;
  // Hyperbola form (only when kind == hyperbolic):
  double s = 0.0;  // center, -c4/c3
  double t = 0.0;  // asymptote, c1/c3
  double r = 0.0;  // residue, c2/c3 + s*t

  double value_at(double x) const { return (c1 * x + c2) / (c3 * x + c4); }
  double derivative_at(double x) const {
    const double d = c3 * x + c4;
    return (c1 * c4 - c2 * c3) / (d * d);
  }
  double determinant() const { return c1 * c4 - c2 * c3; }
};

enum class Monotonicity { increasing, decreasing, constant };

/// Everything reported for one parameter. Degenerate parameters
/// (theta0 = 1, where proportional covariation is undefined) carry only
/// `param` and `value`.
struct MetricRow {
  ParamRef param;
  double value = 0.0;  // theta0
  bool degenerate = false;

  SensFunction f;
  double fprime = 0.0;            // signed f'(theta0)
  double sens_value = 0.0;        // |f'(theta0)|
  std::optional<double> vertex;   // admissible hyperbola vertex
  std::optional<double> proximity;  // |theta0 - vertex|
  std::optional<bool> vertex_in_unit_interval;
  double second_deriv = 0.0;      // signed f''(theta0)
  double second_deriv_abs = 0.0;
  double max_first_deriv = 0.0;   // sup over [0,1]; may be +inf
  Monotonicity monotonicity = Monotonicity::constant;
  bool in_sensitivity_set = false;
};

struct AnalyzeStats {
  int moralize_calls = 0;
  int forward_passes = 0;
  int backward_passes = 0;
  int induced_width = 0;
  uint64_t forward_ops = 0;
  uint64_t backward_ops = 0;
};

struct SensitivityReport {
  Query query;
  double probability = 0.0;
  std::vector<MetricRow> rows;  // in canonical parameter order
  AnalyzeStats stats;
  std::vector<std::string> warnings;
};

/// f'(theta0) from raw gradients via the covariation chain rule:
/// dg/dtheta_p minus the proportional response of the co-varied siblings.
/// Empty when theta0 = 1 (the covariation denominator vanishes).
std::optional<double> covaried_derivative(const Gradient& grad, const ParamRef& p,
                                          const BayesianNetwork& bn);

/// For a linear g(theta): c1 = f'(theta0), c2 = g(theta0) - c1*theta0.
std::pair<double, double> linear_coefficients(double g_value, double fprime, double theta0);

/// Builds the full rational-function model for one parameter from the
/// numerator pass and, for conditional queries, the denominator pass.
/// Empty when theta0 = 1.
std::optional<SensFunction> sensitivity_function(const BayesianNetwork& bn, const ParamRef& p,
                                                 const Gradient& num_grad, double num_value,
                                                 const Gradient* den_grad, double den_value);

double sensitivity_value(const SensFunction& f, double theta0);

/// Admissible vertex location of the hyperbola branch, where |f'| = 1.
std::optional<double> vertex_location(const SensFunction& f);
std::optional<double> vertex_proximity(const SensFunction& f, double theta0);

/// (signed, absolute) second derivative at theta0.
std::pair<double, double> second_derivative(const SensFunction& f, double theta0);

/// sup over theta in [0,1] of |f'(theta)|; +inf when the pole lies inside.
double max_abs_derivative(const SensFunction& f);

struct AnalyzeOptions {
  bool inject_gradient_error = false;  // test hook for the verify command
};

/// One-way sensitivity metrics for every parameter of the network: one
/// moralization, one taped forward+backward pass on {target} ∪ evidence
/// and, for conditional queries, one more pair on the evidence alone.
SensitivityReport analyze_all(const BayesianNetwork& bn, const Query& q,
                              const AnalyzeOptions& opts = {});

}  // namespace yodo
