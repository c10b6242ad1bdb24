#include "yodo/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace yodo {

namespace {

std::string fmt6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const char* mono_str(Monotonicity m) {
  switch (m) {
    case Monotonicity::increasing: return "increasing";
    case Monotonicity::decreasing: return "decreasing";
    case Monotonicity::constant: return "constant";
  }
  return "constant";
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  return out;
}

std::vector<const MetricRow*> sorted_rows(const BayesianNetwork& bn,
                                          const SensitivityReport& rep,
                                          std::optional<int64_t> top) {
  std::vector<const MetricRow*> rows;
  rows.reserve(rep.rows.size());
  for (const MetricRow& r : rep.rows) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [&](const MetricRow* a, const MetricRow* b) {
    if (a->degenerate != b->degenerate) return !a->degenerate;  // undefined last
    if (!a->degenerate && a->sens_value != b->sens_value)
      return a->sens_value > b->sens_value;
    return bn.param_index(a->param) < bn.param_index(b->param);
  });
  if (top && *top >= 0 && static_cast<size_t>(*top) < rows.size())
    rows.resize(static_cast<size_t>(*top));
  return rows;
}

}  // namespace

std::string serialize_report(const BayesianNetwork& bn, const SensitivityReport& rep,
                             ReportFormat format, std::optional<int64_t> top) {
  const auto rows = sorted_rows(bn, rep, top);
  std::ostringstream os;
  if (format == ReportFormat::csv) {
    os << "parameter,value,sens_value,proximity,second_deriv,max_first_deriv,"
          "monotonicity,in_sensitivity_set\n";
    for (const MetricRow* r : rows) {
      os << bn.param_name(r->param) << "," << fmt6(r->value) << ",";
      if (r->degenerate) {
        os << "undefined,undefined,undefined,undefined,undefined,undefined\n";
        continue;
      }
      os << fmt6(r->sens_value) << ",";
      os << (r->proximity ? fmt6(*r->proximity) : "undefined") << ",";
      os << fmt6(r->second_deriv) << ",";
      os << fmt6(r->max_first_deriv) << ",";
      os << mono_str(r->monotonicity) << ",";
      os << (r->in_sensitivity_set ? "true" : "false") << "\n";
    }
    return os.str();
  }

  os << "[";
  bool first = true;
  for (const MetricRow* r : rows) {
    os << (first ? "\n" : ",\n");
    first = false;
    os << "  {\"parameter\": \"" << json_escape(bn.param_name(r->param)) << "\", ";
    os << "\"value\": " << fmt6(r->value) << ", ";
    if (r->degenerate) {
      os << "\"sens_value\": null, \"proximity\": null, \"second_deriv\": null, "
            "\"max_first_deriv\": null, \"monotonicity\": null, "
            "\"in_sensitivity_set\": null}";
      continue;
    }
    os << "\"sens_value\": " << fmt6(r->sens_value) << ", ";
    os << "\"proximity\": " << (r->proximity ? fmt6(*r->proximity) : "null") << ", ";
    os << "\"second_deriv\": " << fmt6(r->second_deriv) << ", ";
    os << "\"max_first_deriv\": ";
    if (std::isinf(r->max_first_deriv)) {
      os << "\"inf\"";
    } else {
      os << fmt6(r->max_first_deriv);
    }
    os << ", ";
    os << "\"monotonicity\": \"" << mono_str(r->monotonicity) << "\", ";
    os << "\"in_sensitivity_set\": " << (r->in_sensitivity_set ? "true" : "false") << "}";
  }
  os << (first ? "]" : "\n]") << "\n";
  return os.str();
}

}  // namespace yodo
