// Python bindings for the yodo core: network loading, one-shot analysis,
// plain probabilities and the finite-difference cross-check.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "yodo/bif.hpp"
#include "yodo/engine.hpp"
#include "yodo/oracle.hpp"
#include "yodo/query.hpp"
#include "yodo/report_io.hpp"
#include "yodo/sensmetrics.hpp"
#include "yodo/synthetic.hpp"

namespace py = pybind11;
using namespace yodo;

namespace {

const char* monotonicity_str(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
    default: return "constant";
  }
}

struct PyRow {
  std::string parameter;
  double value = 0.0;
  bool degenerate = false;
  double fprime = 0.0;
  double sens_value = 0.0;
  std::optional<double> vertex;
  std::optional<double> proximity;
  double second_deriv = 0.0;
  double max_first_deriv = 0.0;
  std::string monotonicity = "constant";
  bool in_sensitivity_set = false;
  std::vector<double> coefficients;  // (c1, c2, c3, c4)
};

struct PyReport {
  BayesianNetwork bn;
  SensitivityReport rep;
  std::string query;
  std::vector<PyRow> rows;

  std::string to_csv(std::optional<int64_t> top) const {
    return serialize_report(bn, rep, ReportFormat::csv, top);
  }
  std::string to_json(std::optional<int64_t> top) const {
    return serialize_report(bn, rep, ReportFormat::json, top);
  }
};

Query make_query(const BayesianNetwork& bn, const std::string& target,
                 const std::vector<std::string>& evidence) {
  return parse_query(bn, target, evidence);
}

ParamRef find_param(const BayesianNetwork& bn, const std::string& name) {
  for (int64_t i = 0; i < bn.parameter_count(); ++i) {
    ParamRef p = bn.param_at(i);
    if (bn.param_name(p) == name) return p;
  }
  throw std::invalid_argument("unknown parameter '" + name + "'");
}

PyReport analyze(const BayesianNetwork& bn, const std::string& target,
                 const std::vector<std::string>& evidence) {
  Query q = make_query(bn, target, evidence);
  PyReport out{bn, {}, query_str(bn, q), {}};
  {
    py::gil_scoped_release release;
    out.rep = analyze_all(bn, q);
  }
  out.rows.reserve(out.rep.rows.size());
  for (const auto& r : out.rep.rows) {
    PyRow row;
    row.parameter = bn.param_name(r.param);
    row.value = r.value;
    row.degenerate = r.degenerate;
    if (!r.degenerate) {
      row.fprime = r.fprime;
      row.sens_value = r.sens_value;
      row.vertex = r.vertex;
      row.proximity = r.proximity;
      row.second_deriv = r.second_deriv;
      row.max_first_deriv = r.max_first_deriv;
      row.monotonicity = monotonicity_str(r.monotonicity);
      row.in_sensitivity_set = r.in_sensitivity_set;
      row.coefficients = {r.f.c1, r.f.c2, r.f.c3, r.f.c4};
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

double probability(const BayesianNetwork& bn, const std::string& target,
                   const std::vector<std::string>& evidence) {
  Query q = make_query(bn, target, evidence);
  py::gil_scoped_release release;
  const double den = q.marginal() ? 1.0 : ve_probability(bn, q.evidence);
  if (den <= 0.0) throw std::domain_error("evidence has probability zero");
  return ve_probability(bn, q.full_mask()) / den;
}

double finite_difference(const BayesianNetwork& bn, const std::string& target,
                         const std::vector<std::string>& evidence, const std::string& parameter,
                         double h) {
  Query q = make_query(bn, target, evidence);
  ParamRef p = find_param(bn, parameter);
  py::gil_scoped_release release;
  return finite_difference_sensitivity(bn, q, p, h, engine_probability_fn());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "one-way sensitivity analysis for discrete Bayesian networks";

  py::class_<PyRow>(m, "Row")
      .def_readonly("parameter", &PyRow::parameter)
      .def_readonly("value", &PyRow::value)
      .def_readonly("degenerate", &PyRow::degenerate)
      .def_readonly("fprime", &PyRow::fprime)
      .def_readonly("sens_value", &PyRow::sens_value)
      .def_readonly("vertex", &PyRow::vertex)
      .def_readonly("proximity", &PyRow::proximity)
      .def_readonly("second_deriv", &PyRow::second_deriv)
      .def_readonly("max_first_deriv", &PyRow::max_first_deriv)
      .def_readonly("monotonicity", &PyRow::monotonicity)
      .def_readonly("in_sensitivity_set", &PyRow::in_sensitivity_set)
      .def_readonly("coefficients", &PyRow::coefficients)
      .def("__repr__", [](const PyRow& r) {
        return "<Row " + r.parameter + " sens_value=" + std::to_string(r.sens_value) + ">";
      });

  py::class_<PyReport>(m, "Report")
      .def_property_readonly("probability", [](const PyReport& r) { return r.rep.probability; })
      .def_property_readonly("query", [](const PyReport& r) { return r.query; })
      .def_property_readonly("rows", [](const PyReport& r) { return r.rows; })
      .def_property_readonly("induced_width",
                             [](const PyReport& r) { return r.rep.stats.induced_width; })
      .def_property_readonly("warnings", [](const PyReport& r) { return r.rep.warnings; })
      .def("to_csv", &PyReport::to_csv, py::arg("top") = py::none())
      .def("to_json", &PyReport::to_json, py::arg("top") = py::none());

  py::class_<BayesianNetwork>(m, "Network")
      .def_property_readonly("name",
                             [](const BayesianNetwork& bn) { return bn.parts().name; })
      .def_property_readonly("variable_count", &BayesianNetwork::variable_count)
      .def_property_readonly("arc_count", &BayesianNetwork::arc_count)
      .def_property_readonly("parameter_count", &BayesianNetwork::parameter_count)
      .def_property_readonly("variables",
                             [](const BayesianNetwork& bn) {
                               std::vector<std::string> names;
                               for (int v = 0; v < bn.variable_count(); ++v)
                                 names.push_back(bn.variable(v).name);
                               return names;
                             })
      .def("states",
           [](const BayesianNetwork& bn, const std::string& variable) {
             const int v = bn.variable_index(variable);
             if (v < 0) throw std::invalid_argument("unknown variable '" + variable + "'");
             return bn.variable(v).states;
           },
           py::arg("variable"))
      .def("parameter_names",
           [](const BayesianNetwork& bn) {
             std::vector<std::string> names;
             for (int64_t i = 0; i < bn.parameter_count(); ++i)
               names.push_back(bn.param_name(bn.param_at(i)));
             return names;
           })
      .def("probability", &probability, py::arg("target"),
           py::arg("evidence") = std::vector<std::string>{},
           "P(target | evidence), evidence items as 'VAR=state'")
      .def("analyze", &analyze, py::arg("target"),
           py::arg("evidence") = std::vector<std::string>{},
           "sensitivity metrics for every parameter of the network")
      .def("finite_difference", &finite_difference, py::arg("target"), py::arg("evidence"),
           py::arg("parameter"), py::arg("h") = 1e-5,
           "finite-difference estimate of one sensitivity value, for cross-checking")
      .def("to_bif", [](const BayesianNetwork& bn) { return write_bif(bn); })
      .def("__repr__", [](const BayesianNetwork& bn) {
        return "<Network " + bn.parts().name + ": " + std::to_string(bn.variable_count()) +
               " variables, " + std::to_string(bn.parameter_count()) + " parameters>";
      });

  m.def("load_network", [](const std::string& path) { return load_bif_file(path); },
        py::arg("path"), "read a network file (BIF dialect)");
  m.def("parse_bif", [](const std::string& text) { return parse_bif(text); }, py::arg("text"),
        "parse network text (BIF dialect)");
  m.def(
      "synthesize",
      [](const std::string& kind, int nodes, int max_parents, int max_states, uint64_t seed) {
        SyntheticSpec spec;
        if (kind == "polytree")
          spec.kind = SyntheticSpec::Kind::polytree;
        else if (kind == "dag")
          spec.kind = SyntheticSpec::Kind::dag;
        else
          throw std::invalid_argument("kind must be 'polytree' or 'dag'");
        spec.nodes = nodes;
        spec.max_parents = max_parents;
        spec.max_states = max_states;
        spec.seed = seed;
        return synthesize(spec);
      },
      py::arg("kind") = "polytree", py::arg("nodes") = 100, py::arg("max_parents") = 3,
      py::arg("max_states") = 3, py::arg("seed") = 0,
      "deterministic random network generator");
}
