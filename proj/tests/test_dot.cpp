#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tml/chrono.hpp"
#include "tml/dot.hpp"
#include "tml/text.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

tml::Document load_fixture(const std::string& name) {
  auto result = tml::parse_model(slurp(std::string(FIXTURES_DIR) + "/" + name));
  for (const auto& d : result.diagnostics) INFO(tml::format_diagnostic(d));
  REQUIRE(result.doc.has_value());
  return *result.doc;
}

size_t count_occurrences(const std::string& haystack,
                         const std::string& needle) {
  size_t count = 0;
  for (size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size()))
    ++count;
  return count;
}

}  // namespace

TEST_CASE("dot output is deterministic") {
  auto waiter = load_fixture("waiter.tm");
  CHECK(tml::dot_static(waiter.model) == tml::dot_static(waiter.model));
  const auto& chrono = waiter.chronologies.at("serving");
  CHECK(tml::dot_chronology(chrono) == tml::dot_chronology(chrono));
}

TEST_CASE("static dot matches the golden files") {
  for (const char* name : {"waiter", "library"}) {
    auto doc = load_fixture(std::string(name) + ".tm");
    std::string golden = slurp(std::string(GOLDEN_DIR) + "/" + name + ".dot");
    CHECK(tml::dot_static(doc.model) == golden);
  }
}

TEST_CASE("chronology dot matches the golden file") {
  auto library = load_fixture("library.tm");
  std::string golden = slurp(std::string(GOLDEN_DIR) + "/library-chrono.dot");
  CHECK(tml::dot_chronology(library.chronologies.at("borrowing")) == golden);
}

TEST_CASE("empty model emits a minimal digraph") {
  CHECK(tml::dot_static(tml::StaticModel{}) == "digraph static_model {\n}\n");
}

TEST_CASE("every node and edge appears exactly once") {
  auto library = load_fixture("library.tm");
  std::string dot = tml::dot_static(library.model);
  for (const auto& [id, thimac] : library.model.thimacs) {
    CHECK(count_occurrences(dot, "subgraph cluster_") ==
          library.model.thimacs.size());
    for (const auto& action : thimac.actions)
      CHECK(count_occurrences(dot, "\"" + action + "\" [label=") == 1);
  }
  size_t flow_edges = 0;
  for (const auto& flow : library.model.flows)
    flow_edges +=
        count_occurrences(dot, "\"" + flow.from + "\" -> \"" + flow.to + "\";");
  CHECK(flow_edges == library.model.flows.size());
  CHECK(count_occurrences(dot, "style=dashed") ==
        library.model.triggers.size());
}

TEST_CASE("single-event chronology renders one box and no edges") {
  tml::Chronology lone{"lone", {"E1"}, {}};
  std::string dot = tml::dot_chronology(lone);
  CHECK(count_occurrences(dot, "\"E1\" [label=\"E1\"];") == 1);
  CHECK(count_occurrences(dot, "->") == 0);
}

TEST_CASE("a trace styles actual and absent occurrences differently") {
  auto library = load_fixture("library.tm");
  const auto& chrono = library.chronologies.at("borrowing");
  tml::Trace trace = {{"E1", tml::Mode::Actual},
                      {"E2", tml::Mode::Actual},
                      {"E3", tml::Mode::Actual},
                      {"E4", tml::Mode::Absent}};
  std::string dot = tml::dot_chronology(chrono, &trace);
  CHECK(dot.find("\"E1\" [label=\"E1\", style=filled") != std::string::npos);
  CHECK(dot.find("\"E4\" [label=\"E4\", style=dotted") != std::string::npos);
  // untouched events carry no style
  CHECK(dot.find("\"E6\" [label=\"E6\"];") != std::string::npos);

  tml::Trace bad = {{"E9", tml::Mode::Actual}};
  CHECK_THROWS_AS(tml::dot_chronology(chrono, &bad), std::invalid_argument);
}

TEST_CASE("alternative edges carry the branch label") {
  auto library = load_fixture("library.tm");
  std::string dot = tml::dot_chronology(library.chronologies.at("borrowing"));
  // E4 fans out to E5 and E6
  CHECK(count_occurrences(dot, "[label=\"\xE2\x88\xA8\"]") == 2);
  // E2 ~> E3 renders dashed
  CHECK(dot.find("\"E2\" -> \"E3\" [style=dashed];") != std::string::npos);
}
