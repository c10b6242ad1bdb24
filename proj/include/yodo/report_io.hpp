#pragma once

#include <optional>
#include <string>

#include "yodo/sensmetrics.hpp"

namespace yodo {

enum class ReportFormat { csv, json };

/// Renders the report rows sorted by sensitivity value (descending, ties
/// by canonical parameter order, undefined rows last). Floats use six
/// significant digits; undefined cells print "undefined" in CSV and null
/// in JSON; an unbounded derivative prints "inf". `top` keeps only the
/// first N rows after sorting.
std::string serialize_report(const BayesianNetwork& bn, const SensitivityReport& rep,
                             ReportFormat format, std::optional<int64_t> top = std::nullopt);

}  // namespace yodo
