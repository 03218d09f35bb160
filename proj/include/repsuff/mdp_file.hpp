#pragma once

#include "repsuff/mdp.hpp"

#include <string>

namespace repsuff {

struct ParseError : std::runtime_error {
  ParseError(int line_, int col_, const std::string& message);
  int line;
  int col;
};

struct MdpFileContents {
  TabularMDP mdp;
  Policy policy;     // uniform when the file has no policy section
  Occupancy start;   // uniform when the file has no start section
  bool policy_specified = false;
  bool start_specified = false;
};

/// Strict line-based parser for the .mdp format (see README for the
/// grammar). Unknown keywords are rejected; every diagnostic carries a
/// line and column.
MdpFileContents parse_mdp_file(const std::string& text);
MdpFileContents load_mdp_file(const std::string& path);

/// Canonical serialization; export(parse(export(x))) == export(x) holds
/// byte for byte.
std::string export_mdp_file(const TabularMDP& mdp, const Policy& policy,
                            const Occupancy& start);

/// Shortest decimal that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace repsuff
