#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "yodo/model.hpp"

namespace yodo {

struct ParseError : std::runtime_error {
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ", col " +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
  int line;
  int col;
};

/// Reads the textual BIF dialect: network / variable / probability blocks,
/// `table` rows (child state slowest, parent configurations row-major) and
/// per-configuration rows keyed by explicit parent state tuples. `property`
/// lines are kept as opaque metadata. Throws ParseError with a location on
/// any malformed input; never crashes on garbage.
NetworkParts parse_bif_parts(std::string_view text);

/// parse_bif_parts followed by validation and canonical construction.
/// Throws ParseError or ValidationError.
BayesianNetwork parse_bif(std::string_view text);

/// Reads a file from disk; throws std::runtime_error when unreadable.
BayesianNetwork load_bif_file(const std::string& path);

/// Writes the dialect back out. Parsing the result reproduces every CPT
/// entry bit-exactly (values are printed with 17 significant digits).
std::string write_bif(const NetworkParts& parts);
std::string write_bif(const BayesianNetwork& bn);

}  // namespace yodo
