#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "tml/chrono.hpp"
#include "tml/text.hpp"

using tml::Mode;

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

std::vector<std::string> ids(const tml::Trace& trace) {
  std::vector<std::string> out;
  for (const auto& item : trace) out.push_back(item.event);
  return out;
}

tml::Trace actual_trace(std::initializer_list<const char*> events) {
  tml::Trace out;
  for (const char* e : events) out.push_back({e, Mode::Actual});
  return out;
}

// true when `from` -> `to` is a declared step of the chronology
bool connected(const tml::Chronology& chronology, const std::string& from,
               const std::string& to) {
  for (const auto& edge : chronology.edges) {
    if (edge.source != from) continue;
    if (std::find(edge.targets.begin(), edge.targets.end(), to) !=
        edge.targets.end())
      return true;
  }
  return false;
}

}  // namespace

TEST_CASE("default_start is the source of the first declared edge") {
  auto library = load_fixture("library.tm");
  CHECK(tml::default_start(library.chronologies.at("borrowing")) == "E1");
  auto waiter = load_fixture("waiter.tm");
  CHECK(tml::default_start(waiter.chronologies.at("serving")) == "E0");
}

TEST_CASE("bound 1 yields the singleton trace") {
  auto library = load_fixture("library.tm");
  auto traces = tml::enumerate_traces(library.chronologies.at("borrowing"),
                                      "E1", 1, false);
  REQUIRE(traces.size() == 1);
  CHECK(ids(traces[0]) == std::vector<std::string>{"E1"});
}

TEST_CASE("unknown start event is rejected") {
  auto library = load_fixture("library.tm");
  CHECK_THROWS_AS(tml::enumerate_traces(library.chronologies.at("borrowing"),
                                        "E99", 5, false),
                  std::invalid_argument);
}

TEST_CASE("traces are maximal, sorted, duplicate-free and replayable") {
  auto library = load_fixture("library.tm");
  const auto& chrono = library.chronologies.at("borrowing");
  auto traces = tml::enumerate_traces(chrono, "E1", 12, false);
  REQUIRE_FALSE(traces.empty());
  CHECK(std::is_sorted(traces.begin(), traces.end(),
                       [](const tml::Trace& a, const tml::Trace& b) {
                         return ids(a) < ids(b);
                       }));
  for (size_t i = 1; i < traces.size(); ++i)
    CHECK(ids(traces[i - 1]) != ids(traces[i]));
  for (const auto& trace : traces) {
    CHECK(trace.size() <= 12);
    for (size_t i = 1; i < trace.size(); ++i)
      CHECK(connected(chrono, trace[i - 1].event, trace[i].event));
  }
}

TEST_CASE("state_sequence folds constituents over an all-potential start") {
  auto library = load_fixture("library.tm");
  auto states = tml::state_sequence(actual_trace({"E1", "E2", "E3"}), library);
  REQUIRE(states.size() == 4);

  const tml::State all_potential{{"S", Mode::Potential},
                                 {"R", Mode::Potential},
                                 {"L", Mode::Potential},
                                 {"Q", Mode::Potential}};
  CHECK(states[0] == all_potential);
  CHECK(states[1] == tml::State{{"S", Mode::Actual},
                                {"R", Mode::Absent},
                                {"L", Mode::Absent},
                                {"Q", Mode::Potential}});
  // E2 only retracts S; everything else persists
  CHECK(states[2].at("S") == Mode::Absent);
  CHECK(states[2].at("R") == Mode::Absent);
  CHECK(states[3] == tml::State{{"S", Mode::Absent},
                                {"R", Mode::Absent},
                                {"L", Mode::Actual},
                                {"Q", Mode::Absent}});

  CHECK(tml::state_sequence({}, library) ==
        std::vector<tml::State>{all_potential});
}

TEST_CASE("state_sequence has the prefix property") {
  auto library = load_fixture("library.tm");
  tml::Trace full = actual_trace({"E1", "E2", "E3", "E4", "E5"});
  auto full_states = tml::state_sequence(full, library);
  for (size_t k = 0; k <= full.size(); ++k) {
    tml::Trace prefix(full.begin(), full.begin() + k);
    auto prefix_states = tml::state_sequence(prefix, library);
    REQUIRE(prefix_states.size() == k + 1);
    for (size_t i = 0; i <= k; ++i) CHECK(prefix_states[i] == full_states[i]);
  }
}

TEST_CASE("state_sequence rejects undeclared atoms") {
  auto library = load_fixture("library.tm");
  tml::Document broken = library;
  broken.events["EX"] = tml::Event{"EX", 9, Mode::Actual,
                                   {{"NoSuchAtom", Mode::Actual}}, {}};
  CHECK_THROWS_AS(tml::state_sequence(actual_trace({"EX"}), broken),
                  tml::UnboundAtomError);
}

TEST_CASE("an absent occurrence forces its constituents absent") {
  auto library = load_fixture("library.tm");
  tml::Trace trace = actual_trace({"E1", "E2", "E3"});
  trace[2].mode = Mode::Absent;  // the loan never happens
  auto states = tml::state_sequence(trace, library);
  CHECK(states[3].at("L") == Mode::Absent);
}

TEST_CASE("library constraints hold to bound 12") {
  auto library = load_fixture("library.tm");
  auto violations = tml::check_constraints(
      library, library.chronologies.at("borrowing"), library.constraints, 12);
  CHECK(violations.empty());
}

TEST_CASE("a faulty event declaration is caught with trace and position") {
  auto library = load_fixture("library.tm");
  tml::Document mutated = library;
  // E4 forgets to retract the loan: L stays Actual while Q turns Actual
  mutated.events["E4"].constituents = {{"Q", Mode::Actual}};
  auto violations = tml::check_constraints(
      mutated, mutated.chronologies.at("borrowing"), mutated.constraints, 12);
  REQUIRE_FALSE(violations.empty());
  bool found = false;
  for (const auto& violation : violations)
    if (violation.constraint == "only_loan" && violation.position == 5)
      found = true;
  CHECK(found);
}

TEST_CASE("verify_consequence") {
  auto library = load_fixture("library.tm");
  const auto& chrono = library.chronologies.at("borrowing");

  auto proven = tml::verify_consequence(
      library, chrono, tml::parse_constraint("c", "L => !Q"), 12);
  CHECK(proven.proven);
  CHECK(proven.traces_checked > 0);

  auto refuted = tml::verify_consequence(
      library, chrono, tml::parse_constraint("c", "S => Q"), 12);
  CHECK_FALSE(refuted.proven);
  REQUIRE(refuted.counterexample.has_value());
  CHECK(refuted.counterexample->state.at("S") == Mode::Actual);
  CHECK(refuted.counterexample->state.at("Q") != Mode::Actual);

  tml::Chronology empty{"none", {}, {}};
  auto vacuous = tml::verify_consequence(
      library, empty, tml::parse_constraint("c", "S => Q"), 12);
  CHECK(vacuous.proven);
  CHECK(vacuous.traces_checked == 0);
}

TEST_CASE("mark_absent flips the occurrence and its reachable successors") {
  auto library = load_fixture("library.tm");
  const auto& chrono = library.chronologies.at("borrowing");

  tml::Trace trace = actual_trace({"E1", "E2", "E3", "E4", "E5"});
  tml::Trace marked = tml::mark_absent(trace, chrono, "E4");
  REQUIRE(marked.size() == trace.size());
  CHECK(marked[3].mode == Mode::Absent);
  CHECK(marked[4].mode == Mode::Absent);  // E5 is downstream of E4
  CHECK(marked[0].mode == Mode::Actual);
  CHECK(marked[2].mode == Mode::Actual);

  // Q is declared only by E4; with E4 absent it can never turn Actual
  for (const auto& state : tml::state_sequence(marked, library))
    CHECK(state.at("Q") != Mode::Actual);

  // marking the final event flips only it
  tml::Trace tail = tml::mark_absent(trace, chrono, "E5");
  for (size_t i = 0; i + 1 < tail.size(); ++i)
    CHECK(tail[i].mode == Mode::Actual);
  CHECK(tail.back().mode == Mode::Absent);

  CHECK_THROWS_AS(tml::mark_absent(trace, chrono, "E6"),
                  std::invalid_argument);
}

TEST_CASE("mark_absent propagates through the waiter chronology") {
  auto waiter = load_fixture("waiter.tm");
  const auto& chrono = waiter.chronologies.at("serving");
  tml::Trace trace = actual_trace({"E0", "E1", "E2", "E3", "E0", "E6", "E7",
                                   "E9", "E0", "E11", "E12", "E15"});
  tml::Trace marked = tml::mark_absent(trace, chrono, "E2");
  CHECK(marked[2].mode == Mode::Absent);
  CHECK(marked[3].mode == Mode::Absent);  // the fish delivery depends on it
  CHECK(marked[0].mode == Mode::Actual);
  CHECK(marked[1].mode == Mode::Actual);
}
