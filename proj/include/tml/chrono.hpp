#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tml/kernel.hpp"
#include "tml/logic.hpp"

namespace tml {

struct ChronoEdge {
  enum class Kind { Sequence, Trigger, Alternative };
  Kind kind;
  std::string source;
  std::vector<std::string> targets;  // 1 for Sequence/Trigger, >=2 otherwise
};

struct Chronology {
  std::string name;
  std::vector<std::string> nodes;  // event ids, sorted
  std::vector<ChronoEdge> edges;
};

// Exactly-N exclusivity over a complete trace: the members of the group
// must occur N times in total.
struct ChooseGroup {
  int count = 1;
  std::vector<std::string> events;
};

struct TraceItem {
  std::string event;
  Mode mode;  // Actual or Absent
};

// One bounded legal walk through a chronology.
using Trace = std::vector<TraceItem>;

// Atom modes at one trace position.
using State = ModeAssignment;

struct Constraint {
  enum class Kind { Simultaneous, Triggering };  // "=>" vs "~>"
  std::string name;
  Formula lhs;
  Kind kind;
  Formula rhs;
};

// Everything a .tm file declares.
struct Document {
  StaticModel model;
  std::map<std::string, std::string> atoms;  // atom -> region name
  std::map<std::string, Event> events;
  std::map<std::string, Chronology> chronologies;
  std::vector<ChooseGroup> chooses;
  std::vector<Constraint> constraints;
};

bool operator==(const ChronoEdge& a, const ChronoEdge& b);
bool operator==(const Chronology& a, const Chronology& b);
bool operator==(const ChooseGroup& a, const ChooseGroup& b);
bool operator==(const Constraint& a, const Constraint& b);
bool operator==(const Document& a, const Document& b);

// The start event used when the caller names none: the source of the
// first declared edge (chronologies may be cyclic, so there need not be a
// node without predecessors).
std::string default_start(const Chronology& chronology);

// All maximal walks from `start`: a walk is extended along declared edges
// until the current event has no successor or the bound is reached. At a
// branching point exactly one successor is taken per walk. With
// complete_only, walks violating any choose group are dropped. Output is
// duplicate-free and sorted lexicographically by event sequence.
// Throws std::invalid_argument for an unknown start event.
std::vector<Trace> enumerate_traces(const Chronology& chronology,
                                    const std::string& start, int bound,
                                    bool complete_only,
                                    const std::vector<ChooseGroup>& chooses = {});

// Left fold of constituent declarations over an all-Potential initial
// state. Result has one state per trace position plus the initial one.
// An Absent occurrence contributes Absent for all its constituents.
// Throws UnboundAtomError for constituents naming undeclared atoms.
std::vector<State> state_sequence(const Trace& trace, const Document& doc);

struct Violation {
  std::string constraint;
  std::string chronology;
  int trace_index = 0;  // index into the enumerated trace list
  int position = 0;     // state index (0 = initial all-Potential state)
  Trace trace;
  State state;
};

// Checks every constraint against every trace of the chronology (complete
// traces, bounded). Simultaneous: wherever the left side evaluates Actual,
// the right side must too, in the same state. Triggering: some state at
// that position or later must make the right side Actual.
std::vector<Violation> check_constraints(const Document& doc,
                                         const Chronology& chronology,
                                         const std::vector<Constraint>& constraints,
                                         int bound);

struct ConsequenceResult {
  bool proven = false;  // proven to the bound, not in general
  int traces_checked = 0;
  std::optional<Violation> counterexample;
};

ConsequenceResult verify_consequence(const Document& doc,
                                     const Chronology& chronology,
                                     const Constraint& candidate, int bound);

// Flips the first occurrence of `event_id` to Absent, together with every
// later occurrence of an event reachable from it in the chronology graph.
// Trace length is preserved. Throws std::invalid_argument when the event
// does not occur in the trace.
Trace mark_absent(const Trace& trace, const Chronology& chronology,
                  const std::string& event_id);

}  // namespace tml
