#include "tml/kernel.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tml {

const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::Create: return "create";
    case ActionKind::Process: return "process";
    case ActionKind::Release: return "release";
    case ActionKind::Transfer: return "transfer";
    case ActionKind::Receive: return "receive";
  }
  return "?";
}

std::optional<ActionKind> action_kind_from(std::string_view word) {
  if (word == "create") return ActionKind::Create;
  if (word == "process") return ActionKind::Process;
  if (word == "release") return ActionKind::Release;
  if (word == "transfer") return ActionKind::Transfer;
  if (word == "receive") return ActionKind::Receive;
  return std::nullopt;
}

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Actual: return "actual";
    case Mode::Absent: return "absent";
    case Mode::Potential: return "potential";
    case Mode::Hole: return "hole";
  }
  return "?";
}

std::optional<Mode> mode_from(std::string_view word) {
  if (word == "actual") return Mode::Actual;
  if (word == "absent") return Mode::Absent;
  if (word == "potential") return Mode::Potential;
  if (word == "hole") return Mode::Hole;
  return std::nullopt;
}

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream os;
  os << (d.severity == Severity::Error ? "error" : "warning");
  if (d.pos.line > 0) os << " at " << d.pos.line << ":" << d.pos.column;
  os << " [" << d.code << "] " << d.message;
  return os.str();
}

namespace {

void diag(std::vector<Diagnostic>& out, std::string code, std::string message) {
  out.push_back({std::move(code), std::move(message), {}, Severity::Error});
}

}  // namespace

std::vector<Diagnostic> validate_static(const StaticModel& model) {
  std::vector<Diagnostic> out;

  for (const auto& [id, thimac] : model.thimacs) {
    bool has_create = false;
    for (const auto& action_id : thimac.actions) {
      auto it = model.actions.find(action_id);
      if (it == model.actions.end()) {
        diag(out, "E_UNRESOLVED_REF",
             "thimac '" + id + "' lists unknown action '" + action_id + "'");
        continue;
      }
      if (it->second.owner != id)
        diag(out, "E_UNRESOLVED_REF",
             "action '" + action_id + "' is listed by thimac '" + id +
                 "' but owned by '" + it->second.owner + "'");
      if (it->second.kind == ActionKind::Create) has_create = true;
    }
    if (!has_create)
      diag(out, "E_NO_CREATE", "thimac '" + id + "' has no create action");
    if (thimac.parent && !model.thimacs.count(*thimac.parent))
      diag(out, "E_UNRESOLVED_REF",
           "thimac '" + id + "' names unknown parent '" + *thimac.parent + "'");
    for (const auto& child : thimac.children)
      if (!model.thimacs.count(child))
        diag(out, "E_UNRESOLVED_REF",
             "thimac '" + id + "' names unknown child '" + child + "'");
  }

  // parent links must form a forest
  for (const auto& [id, thimac] : model.thimacs) {
    std::set<std::string> seen{id};
    const Thimac* cur = &thimac;
    while (cur->parent) {
      auto it = model.thimacs.find(*cur->parent);
      if (it == model.thimacs.end()) break;  // already reported above
      if (!seen.insert(it->first).second) {
        diag(out, "E_CYCLIC_NESTING",
             "thimac nesting cycle through '" + id + "'");
        break;
      }
      cur = &it->second;
    }
  }

  auto endpoint = [&](const std::string& id,
                      const char* what) -> const ActionNode* {
    auto it = model.actions.find(id);
    if (it == model.actions.end()) {
      diag(out, "E_UNRESOLVED_REF",
           std::string(what) + " references unknown action '" + id + "'");
      return nullptr;
    }
    return &it->second;
  };

  for (const auto& flow : model.flows) {
    const ActionNode* from = endpoint(flow.from, "flow");
    const ActionNode* to = endpoint(flow.to, "flow");
    if (!from || !to) continue;
    if (from->owner != to->owner &&
        (from->kind != ActionKind::Transfer || to->kind != ActionKind::Transfer))
      diag(out, "E_ILLEGAL_BOUNDARY_FLOW",
           "flow " + flow.from + " -> " + flow.to +
               " crosses a thimac boundary without transfer on both ends");
  }
  for (const auto& trigger : model.triggers) {
    endpoint(trigger.from, "trigger");
    endpoint(trigger.to, "trigger");
  }

  for (const auto& [name, region] : model.regions) {
    if (region.nodes.empty())
      diag(out, "E_EMPTY_REGION", "region '" + name + "' is empty");
    for (const auto& node : region.nodes)
      if (!model.actions.count(node))
        diag(out, "E_UNRESOLVED_REF",
             "region '" + name + "' references unknown action '" + node + "'");
  }

  return out;
}

const Region& resolve_region(const StaticModel& model, const std::string& name) {
  auto it = model.regions.find(name);
  if (it == model.regions.end()) throw UnknownRegionError(name);
  return it->second;
}

Event realize(const Region& region, int time, Mode mode) {
  if (mode != Mode::Actual && mode != Mode::Absent)
    throw std::invalid_argument(
        std::string("event mode must be actual or absent, got ") +
        to_string(mode));
  Event event;
  event.id = region.name + "@" + std::to_string(time);
  event.time = time;
  event.mode = mode;
  event.region = region;
  return event;
}

const Region& deactualize(const Event& event) {
  if (!event.region)
    throw std::invalid_argument("event '" + event.id +
                                "' carries no region snapshot");
  return *event.region;
}

bool operator==(const Region& a, const Region& b) {
  return a.name == b.name && a.nodes == b.nodes;
}
bool operator==(const ActionNode& a, const ActionNode& b) {
  return a.id == b.id && a.owner == b.owner && a.kind == b.kind;
}
bool operator==(const Thimac& a, const Thimac& b) {
  return a.id == b.id && a.name == b.name && a.parent == b.parent &&
         a.actions == b.actions && a.children == b.children;
}
bool operator==(const FlowArc& a, const FlowArc& b) {
  return a.from == b.from && a.to == b.to;
}
bool operator==(const TriggerArc& a, const TriggerArc& b) {
  return a.from == b.from && a.to == b.to;
}
bool operator==(const StaticModel& a, const StaticModel& b) {
  return a.thimacs == b.thimacs && a.actions == b.actions &&
         a.flows == b.flows && a.triggers == b.triggers &&
         a.regions == b.regions;
}
bool operator==(const Constituent& a, const Constituent& b) {
  return a.atom == b.atom && a.mode == b.mode;
}
bool operator==(const Event& a, const Event& b) {
  return a.id == b.id && a.time == b.time && a.mode == b.mode &&
         a.constituents == b.constituents && a.region == b.region;
}

}  // namespace tml
