#pragma once

#include <string>
#include <vector>

namespace tml {

struct SourcePos {
  int line = 0;    // 1-based; 0 means "no position" (programmatic models)
  int column = 0;  // 1-based
};

enum class Severity { Error, Warning };

// Diagnostic codes form a closed set, documented in the README:
//   E_SYNTAX, E_DUPLICATE_ID, E_UNRESOLVED_REF, E_EMPTY_REGION,
//   E_NO_CREATE, E_ILLEGAL_BOUNDARY_FLOW, E_CYCLIC_NESTING,
//   E_UNKNOWN_MODE, E_DUPLICATE_ATOM, E_NESTED_IMPLICATION
struct Diagnostic {
  std::string code;
  std::string message;
  SourcePos pos;
  Severity severity = Severity::Error;
};

std::string format_diagnostic(const Diagnostic& d);

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (d.severity == Severity::Error) return true;
  return false;
}

}  // namespace tml
