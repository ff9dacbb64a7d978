#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tml/chrono.hpp"
#include "tml/diagnostic.hpp"

namespace tml {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string code, const std::string& message, SourcePos pos)
      : std::runtime_error(message), code_(std::move(code)), pos_(pos) {}
  const std::string& code() const { return code_; }
  SourcePos pos() const { return pos_; }

 private:
  std::string code_;
  SourcePos pos_;
};

struct ParseResult {
  std::optional<Document> doc;  // set only when diagnostics carry no error
  std::vector<Diagnostic> diagnostics;
};

// Parses a .tm file: thimac blocks, flow/trigger statements, region, atom,
// event, chronology, choose and constraint declarations. Structural
// validation (validate_static) runs after a successful parse and its
// diagnostics are included. Never partially succeeds: any error diagnostic
// means no document.
ParseResult parse_model(std::string_view text);

// Canonical serialization: identifiers sorted, fixed two-space indentation.
// parse_model(serialize_model(d)) yields a document structurally equal to d,
// and semantically equal documents serialize identically.
std::string serialize_model(const Document& doc);

// Formula surface syntax: atoms, !, &, | and parentheses, precedence
// ! > & > |, | and & right-associative. Implications are rejected
// (they belong to constraints). Throws ParseError.
Formula parse_formula(std::string_view text);

// "lhs => rhs" or "lhs ~> rhs"; either side is a plain formula. A nested
// implication is rejected with an explicit message. A bare formula (no
// arrow) is also rejected.
Constraint parse_constraint(std::string_view name, std::string_view text);

// "formula @ actual|absent|potential"
AnnotatedFormula parse_annotated(std::string_view text);

// Comma-separated annotated formulas.
std::vector<AnnotatedFormula> parse_annotated_list(std::string_view text);

// Comma-separated "atom=mode" pairs, modes in {actual, absent, potential,
// hole}. Duplicate atoms and unknown mode words throw ParseError. Unlisted
// atoms are conventionally Potential; complete_assignment applies that
// default over a formula's atom set.
ModeAssignment parse_mode_assignment(std::string_view text);

ModeAssignment complete_assignment(ModeAssignment assignment,
                                   const Formula& formula);

}  // namespace tml
