#include "yodo/sensmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace yodo {

namespace {

constexpr double kConstantTol = 1e-12;

double coeff_scale(const SensFunction& f) {
  double m = 1.0;
  m = std::max(m, std::abs(f.c1));
  m = std::max(m, std::abs(f.c2));
  m = std::max(m, std::abs(f.c3));
  m = std::max(m, std::abs(f.c4));
  return m;
}

bool is_constant(const SensFunction& f) {
  return std::abs(f.determinant()) <= kConstantTol * coeff_scale(f);
}

}  // namespace

std::optional<double> covaried_derivative(const Gradient& grad, const ParamRef& p,
                                          const BayesianNetwork& bn) {
  const double theta0 = bn.param_value(p);
  if (1.0 - theta0 <= 0.0) return std::nullopt;
  double sib = 0.0;
  for (const ParamRef& j : bn.cpt_group(p))
    sib += grad.at(bn.param_index(j)) * bn.param_value(j);
  return grad.at(bn.param_index(p)) - sib / (1.0 - theta0);
}

std::pair<double, double> linear_coefficients(double g_value, double fprime, double theta0) {
  return {fprime, g_value - fprime * theta0};
}

std::optional<SensFunction> sensitivity_function(const BayesianNetwork& bn, const ParamRef& p,
                                                 const Gradient& num_grad, double num_value,
                                                 const Gradient* den_grad, double den_value) {
  const auto d_num = covaried_derivative(num_grad, p, bn);
  if (!d_num) return std::nullopt;
  const double theta0 = bn.param_value(p);

  SensFunction f;
  std::tie(f.c1, f.c2) = linear_coefficients(num_value, *d_num, theta0);
  if (den_grad != nullptr) {
    const auto d_den = covaried_derivative(*den_grad, p, bn);
    if (!d_den) return std::nullopt;
    std::tie(f.c3, f.c4) = linear_coefficients(den_value, *d_den, theta0);
  } else {
    f.c3 = 0.0;
    f.c4 = 1.0;
  }

  // A conditional query whose denominator is flat in this parameter is a
  // linear function in disguise; normalize so the linear invariants
  // (c3 = 0, c4 = 1) hold exactly.
  const double scale = std::max({1.0, std::abs(f.c1), std::abs(f.c2), std::abs(f.c4)});
  if (std::abs(f.c3) <= 1e-12 * scale) {
    if (f.c4 <= 0.0)
      throw AnalysisError("sensitivity function has a vanishing denominator");
    f.c1 /= f.c4;
    f.c2 /= f.c4;
    f.c3 = 0.0;
    f.c4 = 1.0;
    f.kind = SensFunction::Kind::linear;
  } else {
    f.kind = SensFunction::Kind::hyperbolic;
    f.s = -f.c4 / f.c3;
    f.t = f.c1 / f.c3;
    f.r = f.c2 / f.c3 + f.s * f.t;
  }
  return f;
}

double sensitivity_value(const SensFunction& f, double theta0) {
  return std::abs(f.derivative_at(theta0));
}

std::optional<double> vertex_location(const SensFunction& f) {
  if (f.kind != SensFunction::Kind::hyperbolic) return std::nullopt;
  if (f.s == 0.0 || f.r == 0.0 || is_constant(f)) return std::nullopt;
  // The branch on the admissible side of the pole: right of it when the
  // center lies left of [0,1], left of it otherwise.
  return f.s < 0.0 ? f.s + std::sqrt(std::abs(f.r)) : f.s - std::sqrt(std::abs(f.r));
}

std::optional<double> vertex_proximity(const SensFunction& f, double theta0) {
  const auto v = vertex_location(f);
  if (!v) return std::nullopt;
  return std::abs(theta0 - *v);
}

std::pair<double, double> second_derivative(const SensFunction& f, double theta0) {
  const double d = f.c3 * theta0 + f.c4;
  const double signed_value = -2.0 * f.c3 * f.determinant() / (d * d * d);
  return {signed_value, std::abs(signed_value)};
}

double max_abs_derivative(const SensFunction& f) {
  const double det = std::abs(f.determinant());
  if (f.kind == SensFunction::Kind::linear) return std::abs(f.c1);
  const double pole = -f.c4 / f.c3;
  if (pole >= 0.0 && pole <= 1.0) return std::numeric_limits<double>::infinity();
  const double at0 = det / (f.c4 * f.c4);
  const double d1 = f.c3 + f.c4;
  const double at1 = det / (d1 * d1);
  return std::max(at0, at1);
}

SensitivityReport analyze_all(const BayesianNetwork& bn, const Query& q,
                              const AnalyzeOptions& opts) {
  SensitivityReport rep;
  rep.query = q;

  Mrf base = moralize(bn);
  rep.stats.moralize_calls = 1;
  EliminationOrder ord = elimination_order(base);
  rep.stats.induced_width = ord.induced_width;

  Mrf num_mrf = apply_evidence(base, q.full_mask());
  MarginalResult num = marginalize(num_mrf, ord);
  Gradient num_grad = backward(num.tape, num_mrf);
  rep.stats.forward_passes = 1;
  rep.stats.backward_passes = 1;
  rep.stats.forward_ops = num.tape.forward_ops;
  rep.stats.backward_ops = num_grad.backward_ops;
  for (auto& w : num.tape.warnings) rep.warnings.push_back(w);

  double den_value = 1.0;
  Gradient den_grad;
  const bool conditional = !q.marginal();
  if (conditional) {
    Mrf den_mrf = apply_evidence(base, q.evidence);
    MarginalResult den = marginalize(den_mrf, ord);
    den_grad = backward(den.tape, den_mrf);
    rep.stats.forward_passes = 2;
    rep.stats.backward_passes = 2;
    rep.stats.forward_ops += den.tape.forward_ops;
    rep.stats.backward_ops += den_grad.backward_ops;
    for (auto& w : den.tape.warnings) rep.warnings.push_back(w);
    den_value = den.value;
    if (den_value <= 0.0)
      throw AnalysisError("evidence has probability zero");
  }
  if (std::isinf(num.value) || std::isinf(den_value))
    throw AnalysisError("inference overflowed to +inf");
  rep.probability = num.value / den_value;

  if (opts.inject_gradient_error && !num_grad.values.empty())
    num_grad.values[num_grad.values.size() / 2] += 0.5;  // test hook

  const std::vector<ParamRef> params = bn.param_enumerate();
  rep.rows.reserve(params.size());
  for (const ParamRef& p : params) {
    MetricRow row;
    row.param = p;
    row.value = bn.param_value(p);
    const auto f = sensitivity_function(bn, p, num_grad, num.value,
                                        conditional ? &den_grad : nullptr, den_value);
    if (!f) {
      row.degenerate = true;
      rep.rows.push_back(row);
      continue;
    }
    row.f = *f;
    row.fprime = f->derivative_at(row.value);
    row.sens_value = std::abs(row.fprime);
    row.vertex = vertex_location(*f);
    row.proximity = vertex_proximity(*f, row.value);
    if (row.vertex) row.vertex_in_unit_interval = (*row.vertex >= 0.0 && *row.vertex <= 1.0);
    std::tie(row.second_deriv, row.second_deriv_abs) = second_derivative(*f, row.value);
    row.in_sensitivity_set = !is_constant(*f);
    if (!row.in_sensitivity_set) {
      row.monotonicity = Monotonicity::constant;
      row.max_first_deriv = row.sens_value;  // numerically ~0
    } else {
      row.monotonicity = f->determinant() > 0.0 ? Monotonicity::increasing
                                                : Monotonicity::decreasing;
      row.max_first_deriv = max_abs_derivative(*f);
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace yodo
