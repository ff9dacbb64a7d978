#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tml/text.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

tml::Document parse_ok(const std::string& text) {
  auto result = tml::parse_model(text);
  for (const auto& d : result.diagnostics) INFO(tml::format_diagnostic(d));
  REQUIRE(result.doc.has_value());
  return *result.doc;
}

const tml::Diagnostic* find_code(const std::vector<tml::Diagnostic>& diags,
                                 const std::string& code) {
  for (const auto& d : diags)
    if (d.code == code) return &d;
  return nullptr;
}

}  // namespace

TEST_CASE("library fixture parses with its atoms and events") {
  auto doc = parse_ok(slurp(std::string(FIXTURES_DIR) + "/library.tm"));
  CHECK(doc.atoms.size() == 4);
  CHECK(doc.atoms.count("S"));
  CHECK(doc.atoms.count("R"));
  CHECK(doc.atoms.count("L"));
  CHECK(doc.atoms.count("Q"));
  CHECK(doc.events.size() == 6);
  for (const char* id : {"E1", "E2", "E3", "E4", "E5", "E6"})
    CHECK(doc.events.count(id));
  CHECK(doc.constraints.size() == 4);
  CHECK(doc.chronologies.count("borrowing"));
}

TEST_CASE("missing create surfaces through parse_model") {
  auto result = tml::parse_model("thimac T { }");
  CHECK_FALSE(result.doc.has_value());
  CHECK(find_code(result.diagnostics, "E_NO_CREATE"));
}

TEST_CASE("empty region is rejected with its position") {
  auto result = tml::parse_model("thimac T { create; }\nregion S = { };\n");
  CHECK_FALSE(result.doc.has_value());
  const auto* d = find_code(result.diagnostics, "E_EMPTY_REGION");
  REQUIRE(d);
  CHECK(d->pos.line == 2);
}

TEST_CASE("every diagnostic carries a position") {
  auto result = tml::parse_model("thimac T { create; }\nflow T.create -> ;\n");
  CHECK_FALSE(result.doc.has_value());
  REQUIRE_FALSE(result.diagnostics.empty());
  for (const auto& d : result.diagnostics) {
    CHECK(d.pos.line >= 1);
    CHECK(d.pos.column >= 1);
  }
}

TEST_CASE("duplicate identifiers are rejected") {
  auto result = tml::parse_model(
      "thimac T { create; }\n"
      "region A = { T.create };\n"
      "region A = { T.create };\n");
  CHECK_FALSE(result.doc.has_value());
  CHECK(find_code(result.diagnostics, "E_DUPLICATE_ID"));
}

TEST_CASE("unresolved references are rejected") {
  auto result = tml::parse_model(
      "thimac T { create; }\natom A = NoSuchRegion;\n");
  CHECK_FALSE(result.doc.has_value());
  CHECK(find_code(result.diagnostics, "E_UNRESOLVED_REF"));
}

TEST_CASE("round-trip: parse then serialize then parse is structural identity") {
  for (const char* name : {"waiter.tm", "library.tm"}) {
    auto doc = parse_ok(slurp(std::string(FIXTURES_DIR) + "/" + name));
    std::string canonical = tml::serialize_model(doc);
    auto again = parse_ok(canonical);
    CHECK(doc == again);
    // and the canonical form is a fixed point
    CHECK(tml::serialize_model(again) == canonical);
  }
}

TEST_CASE("empty model serializes to empty text") {
  auto doc = parse_ok("");
  CHECK(tml::serialize_model(doc).empty());
}

TEST_CASE("declaration order does not affect the canonical form") {
  const char* forward =
      "thimac T { create; process; }\n"
      "thimac U { create; transfer; }\n"
      "flow T.create -> T.process;\n"
      "region RA = { T.create, T.process };\n"
      "atom A = RA;\n"
      "event E1 @ 1 { actual A; }\n";
  const char* shuffled =
      "thimac U { transfer; create; }\n"
      "event E1 @ 1 { actual A; }\n"
      "atom A = RA;\n"
      "region RA = { T.process, T.create };\n"
      "thimac T { process; create; }\n"
      "flow T.create -> T.process;\n";
  CHECK(tml::serialize_model(parse_ok(forward)) ==
        tml::serialize_model(parse_ok(shuffled)));
}

TEST_CASE("comments and CRLF are accepted") {
  auto doc = parse_ok("// leading comment\r\nthimac T { create; // trailing\r\n }\r\n");
  CHECK(doc.model.thimacs.count("T"));
}

TEST_CASE("parse_formula precedence and associativity") {
  tml::Formula f = tml::parse_formula("F|V|M");
  REQUIRE(f.kind() == tml::Formula::Kind::Or);
  CHECK(f.lhs().atom_name() == "F");
  REQUIRE(f.rhs().kind() == tml::Formula::Kind::Or);
  CHECK(f.rhs().lhs().atom_name() == "V");
  CHECK(f.rhs().rhs().atom_name() == "M");

  tml::Formula g = tml::parse_formula("!(R|L)");
  REQUIRE(g.kind() == tml::Formula::Kind::Not);
  CHECK(g.operand().kind() == tml::Formula::Kind::Or);

  // ! > & > |
  tml::Formula h = tml::parse_formula("!A&B|C");
  REQUIRE(h.kind() == tml::Formula::Kind::Or);
  REQUIRE(h.lhs().kind() == tml::Formula::Kind::And);
  CHECK(h.lhs().lhs().kind() == tml::Formula::Kind::Not);

  CHECK(tml::parse_formula("A & (B | C)").to_string() == "A&(B|C)");
  CHECK(tml::parse_formula("(A & B) | C").to_string() == "A&B|C");
}

TEST_CASE("nested implication is rejected with an explicit message") {
  try {
    tml::parse_formula("A => (B => C)");
    FAIL("expected ParseError");
  } catch (const tml::ParseError& e) {
    CHECK(e.code() == "E_NESTED_IMPLICATION");
  }
  CHECK_THROWS_AS(tml::parse_constraint("c", "A => (B => C)"),
                  tml::ParseError);
  CHECK_THROWS_AS(tml::parse_constraint("c", "(A => B) ~> C"),
                  tml::ParseError);
}

TEST_CASE("parse_constraint recognizes both arrow kinds") {
  tml::Constraint simultaneous = tml::parse_constraint("c1", "S => !(R|L)");
  CHECK(simultaneous.kind == tml::Constraint::Kind::Simultaneous);
  CHECK(simultaneous.lhs.to_string() == "S");
  CHECK(simultaneous.rhs.to_string() == "!(R|L)");

  tml::Constraint triggering = tml::parse_constraint("c2", "Q ~> S|R");
  CHECK(triggering.kind == tml::Constraint::Kind::Triggering);

  CHECK_THROWS_AS(tml::parse_constraint("c3", "A | B"), tml::ParseError);
}

TEST_CASE("parse_mode_assignment") {
  auto a = tml::parse_mode_assignment("A=actual,B=potential");
  CHECK(a.at("A") == tml::Mode::Actual);
  CHECK(a.at("B") == tml::Mode::Potential);

  auto waiter = tml::parse_mode_assignment("M=absent,F=absent");
  CHECK(waiter.at("M") == tml::Mode::Absent);
  CHECK(waiter.at("F") == tml::Mode::Absent);

  try {
    tml::parse_mode_assignment("A=actual,A=absent");
    FAIL("expected ParseError");
  } catch (const tml::ParseError& e) {
    CHECK(e.code() == "E_DUPLICATE_ATOM");
  }
  try {
    tml::parse_mode_assignment("A=maybe");
    FAIL("expected ParseError");
  } catch (const tml::ParseError& e) {
    CHECK(e.code() == "E_UNKNOWN_MODE");
  }
}

TEST_CASE("complete_assignment defaults unlisted atoms to potential") {
  tml::Formula f = tml::parse_formula("A|B|C");
  auto a = tml::complete_assignment(tml::parse_mode_assignment("A=actual"), f);
  CHECK(a.at("A") == tml::Mode::Actual);
  CHECK(a.at("B") == tml::Mode::Potential);
  CHECK(a.at("C") == tml::Mode::Potential);
}

TEST_CASE("parse_annotated") {
  auto af = tml::parse_annotated("(F|V|M) @ actual");
  CHECK(af.mode == tml::Mode::Actual);
  CHECK(af.formula.to_string() == "F|V|M");

  auto list = tml::parse_annotated_list("(F|V|M)@actual, M@absent, F@absent");
  REQUIRE(list.size() == 3);
  CHECK(list[1].formula.atom_name() == "M");
  CHECK(list[1].mode == tml::Mode::Absent);

  // hole is a static status, not an annotation
  CHECK_THROWS_AS(tml::parse_annotated("A @ hole"), tml::ParseError);
}

TEST_CASE("syntax errors name a position") {
  try {
    tml::parse_formula("A | | B");
    FAIL("expected ParseError");
  } catch (const tml::ParseError& e) {
    CHECK(e.code() == "E_SYNTAX");
    CHECK(e.pos().column == 5);
  }
}
