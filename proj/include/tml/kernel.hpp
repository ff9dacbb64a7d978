#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tml/diagnostic.hpp"
#include "tml/mode.hpp"

namespace tml {

// The five generic actions. No other kinds exist.
enum class ActionKind { Create, Process, Release, Transfer, Receive };

const char* to_string(ActionKind k);
std::optional<ActionKind> action_kind_from(std::string_view word);

struct ActionNode {
  std::string id;     // dotted path, e.g. "Waiter.FishDish.release"
  std::string owner;  // id of the owning thimac
  ActionKind kind;
};

struct Thimac {
  std::string id;  // dotted path for nested thimacs
  std::string name;
  std::optional<std::string> parent;
  std::vector<std::string> actions;   // action ids, sorted
  std::vector<std::string> children;  // child thimac ids, sorted
};

struct FlowArc {
  std::string from;
  std::string to;
};

struct TriggerArc {
  std::string from;
  std::string to;
};

// A named nonempty subdiagram of the static model. Internal arcs are the
// arcs of the model induced by the node set, so they need no own storage.
struct Region {
  std::string name;
  std::vector<std::string> nodes;  // action ids, sorted, nonempty
};

struct StaticModel {
  std::map<std::string, Thimac> thimacs;
  std::map<std::string, ActionNode> actions;
  std::vector<FlowArc> flows;
  std::vector<TriggerArc> triggers;
  std::map<std::string, Region> regions;
};

// An atom/constituent realization inside an event: Actual or Absent only.
struct Constituent {
  std::string atom;
  Mode mode;  // Mode::Actual or Mode::Absent
};

// A region joined with a time tick. Events declared in a .tm file carry no
// region binding (the grammar has none); realize() attaches a snapshot of
// the region so deactualize() can return it unchanged.
struct Event {
  std::string id;
  int time = 0;
  Mode mode = Mode::Actual;  // Actual or Absent, never Potential/Hole
  std::vector<Constituent> constituents;
  std::optional<Region> region;
};

class UnknownRegionError : public std::runtime_error {
 public:
  explicit UnknownRegionError(const std::string& name)
      : std::runtime_error("unknown region: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Structural checks: mandatory create per thimac, boundary flows are
// transfer-to-transfer, references resolve, thimac nesting is a forest.
// All violations are accumulated; an empty result means the model is valid.
std::vector<Diagnostic> validate_static(const StaticModel& model);

// Throws UnknownRegionError if the name is not declared.
const Region& resolve_region(const StaticModel& model, const std::string& name);

// Joins a region with a time tick. Only Actual and Absent are event modes;
// anything else throws std::invalid_argument.
Event realize(const Region& region, int time, Mode mode);

// Recovers the region an event was realized from, bit-identical.
// Throws std::invalid_argument for events without a region snapshot.
const Region& deactualize(const Event& event);

// Status-level negations. Both are the mode negation table restricted to
// the direction their name states: a subsisting region negates to an
// absent event, an actual event negates to its subsisting region.
inline Mode negate_region(Mode region_status) { return neg(region_status); }
inline Mode negate_event(Mode event_status) { return neg(event_status); }

bool operator==(const Region& a, const Region& b);
bool operator==(const StaticModel& a, const StaticModel& b);
bool operator==(const Thimac& a, const Thimac& b);
bool operator==(const ActionNode& a, const ActionNode& b);
bool operator==(const FlowArc& a, const FlowArc& b);
bool operator==(const TriggerArc& a, const TriggerArc& b);
bool operator==(const Constituent& a, const Constituent& b);
bool operator==(const Event& a, const Event& b);

}  // namespace tml
