#include "tml/chrono.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace tml {

bool operator==(const ChronoEdge& a, const ChronoEdge& b) {
  return a.kind == b.kind && a.source == b.source && a.targets == b.targets;
}
bool operator==(const Chronology& a, const Chronology& b) {
  return a.name == b.name && a.nodes == b.nodes && a.edges == b.edges;
}
bool operator==(const ChooseGroup& a, const ChooseGroup& b) {
  return a.count == b.count && a.events == b.events;
}
bool operator==(const Constraint& a, const Constraint& b) {
  return a.name == b.name && a.kind == b.kind && a.lhs == b.lhs &&
         a.rhs == b.rhs;
}
bool operator==(const Document& a, const Document& b) {
  return a.model == b.model && a.atoms == b.atoms && a.events == b.events &&
         a.chronologies == b.chronologies && a.chooses == b.chooses &&
         a.constraints == b.constraints;
}

std::string default_start(const Chronology& chronology) {
  if (chronology.edges.empty()) {
    if (chronology.nodes.empty())
      throw std::invalid_argument("chronology '" + chronology.name +
                                  "' has no events");
    return chronology.nodes.front();
  }
  return chronology.edges.front().source;
}

namespace {

// Successors per event, sorted and deduplicated for deterministic walks.
std::map<std::string, std::vector<std::string>> successor_map(
    const Chronology& chronology) {
  std::map<std::string, std::set<std::string>> collected;
  for (const auto& edge : chronology.edges)
    for (const auto& target : edge.targets)
      collected[edge.source].insert(target);
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [source, targets] : collected)
    out.emplace(source, std::vector<std::string>(targets.begin(), targets.end()));
  return out;
}

bool satisfies_chooses(const Trace& trace,
                       const std::vector<ChooseGroup>& chooses) {
  for (const auto& group : chooses) {
    int occurrences = 0;
    for (const auto& item : trace)
      if (std::find(group.events.begin(), group.events.end(), item.event) !=
          group.events.end())
        ++occurrences;
    if (occurrences != group.count) return false;
  }
  return true;
}

}  // namespace

std::vector<Trace> enumerate_traces(const Chronology& chronology,
                                    const std::string& start, int bound,
                                    bool complete_only,
                                    const std::vector<ChooseGroup>& chooses) {
  if (bound < 1) throw std::invalid_argument("trace bound must be >= 1");
  if (std::find(chronology.nodes.begin(), chronology.nodes.end(), start) ==
      chronology.nodes.end())
    throw std::invalid_argument("unknown start event '" + start +
                                "' in chronology '" + chronology.name + "'");

  auto successors = successor_map(chronology);
  std::vector<Trace> out;
  std::vector<std::string> walk{start};

  auto extend = [&](auto&& self) -> void {
    auto it = successors.find(walk.back());
    bool maximal = it == successors.end() ||
                   static_cast<int>(walk.size()) >= bound;
    if (maximal) {
      Trace trace;
      trace.reserve(walk.size());
      for (const auto& event : walk) trace.push_back({event, Mode::Actual});
      if (!complete_only || satisfies_chooses(trace, chooses))
        out.push_back(std::move(trace));
      return;
    }
    for (const auto& next : it->second) {
      walk.push_back(next);
      self(self);
      walk.pop_back();
    }
  };
  extend(extend);

  std::sort(out.begin(), out.end(), [](const Trace& a, const Trace& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [](const TraceItem& x, const TraceItem& y) { return x.event < y.event; });
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Trace& a, const Trace& b) {
                          if (a.size() != b.size()) return false;
                          for (size_t i = 0; i < a.size(); ++i)
                            if (a[i].event != b[i].event) return false;
                          return true;
                        }),
            out.end());
  return out;
}

std::vector<State> state_sequence(const Trace& trace, const Document& doc) {
  State initial;
  for (const auto& [atom, _] : doc.atoms) initial[atom] = Mode::Potential;

  std::vector<State> out;
  out.reserve(trace.size() + 1);
  out.push_back(initial);
  State current = initial;
  for (const auto& item : trace) {
    auto it = doc.events.find(item.event);
    if (it == doc.events.end())
      throw std::invalid_argument("trace references undeclared event '" +
                                  item.event + "'");
    for (const auto& constituent : it->second.constituents) {
      if (!current.count(constituent.atom))
        throw UnboundAtomError(constituent.atom);
      // an absent occurrence de-creates: even its 'actual' atoms stay absent
      current[constituent.atom] =
          item.mode == Mode::Absent ? Mode::Absent : constituent.mode;
    }
    out.push_back(current);
  }
  return out;
}

namespace {

std::vector<Violation> check_on_trace(const Constraint& constraint,
                                      const std::vector<State>& states) {
  std::vector<Violation> out;
  for (size_t pos = 0; pos < states.size(); ++pos) {
    if (eval_tm(constraint.lhs, states[pos]) != Mode::Actual) continue;
    bool holds;
    if (constraint.kind == Constraint::Kind::Simultaneous) {
      holds = eval_tm(constraint.rhs, states[pos]) == Mode::Actual;
    } else {
      holds = false;
      for (size_t later = pos; later < states.size(); ++later)
        if (eval_tm(constraint.rhs, states[later]) == Mode::Actual) {
          holds = true;
          break;
        }
    }
    if (!holds) {
      Violation v;
      v.constraint = constraint.name;
      v.position = static_cast<int>(pos);
      v.state = states[pos];
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace

std::vector<Violation> check_constraints(const Document& doc,
                                         const Chronology& chronology,
                                         const std::vector<Constraint>& constraints,
                                         int bound) {
  std::vector<Violation> out;
  if (chronology.nodes.empty()) return out;
  auto traces = enumerate_traces(chronology, default_start(chronology), bound,
                                 /*complete_only=*/true, doc.chooses);
  for (size_t index = 0; index < traces.size(); ++index) {
    auto states = state_sequence(traces[index], doc);
    for (const auto& constraint : constraints) {
      for (Violation& violation : check_on_trace(constraint, states)) {
        violation.chronology = chronology.name;
        violation.trace_index = static_cast<int>(index);
        violation.trace = traces[index];
        out.push_back(std::move(violation));
      }
    }
  }
  return out;
}

ConsequenceResult verify_consequence(const Document& doc,
                                     const Chronology& chronology,
                                     const Constraint& candidate, int bound) {
  ConsequenceResult result;
  if (chronology.nodes.empty()) {
    result.proven = true;  // vacuous
    return result;
  }
  auto traces = enumerate_traces(chronology, default_start(chronology), bound,
                                 /*complete_only=*/true, doc.chooses);
  result.traces_checked = static_cast<int>(traces.size());
  for (size_t index = 0; index < traces.size(); ++index) {
    auto states = state_sequence(traces[index], doc);
    auto violations = check_on_trace(candidate, states);
    if (!violations.empty()) {
      violations.front().chronology = chronology.name;
      violations.front().trace_index = static_cast<int>(index);
      violations.front().trace = traces[index];
      result.counterexample = std::move(violations.front());
      return result;
    }
  }
  result.proven = true;
  return result;
}

Trace mark_absent(const Trace& trace, const Chronology& chronology,
                  const std::string& event_id) {
  size_t marked = trace.size();
  for (size_t i = 0; i < trace.size(); ++i)
    if (trace[i].event == event_id) {
      marked = i;
      break;
    }
  if (marked == trace.size())
    throw std::invalid_argument("event '" + event_id +
                                "' does not occur in the trace");

  // Events reachable from the marked one in the chronology graph; later
  // occurrences of those flip too (absence propagates, it never triggers).
  auto successors = successor_map(chronology);
  std::set<std::string> reachable{event_id};
  std::vector<std::string> frontier{event_id};
  while (!frontier.empty()) {
    std::string current = std::move(frontier.back());
    frontier.pop_back();
    auto it = successors.find(current);
    if (it == successors.end()) continue;
    for (const auto& next : it->second)
      if (reachable.insert(next).second) frontier.push_back(next);
  }

  Trace out = trace;
  out[marked].mode = Mode::Absent;
  for (size_t i = marked + 1; i < out.size(); ++i)
    if (reachable.count(out[i].event)) out[i].mode = Mode::Absent;
  return out;
}

}  // namespace tml
