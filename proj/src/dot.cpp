#include "tml/dot.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace tml {

namespace {

std::string sanitize(const std::string& id) {
  std::string out = id;
  for (char& c : out)
    if (c == '.') c = '_';
  return out;
}

void emit_thimac(const StaticModel& model, const Thimac& thimac, int depth,
                 std::ostringstream& os) {
  std::string indent(2 * static_cast<size_t>(depth + 1), ' ');
  os << indent << "subgraph cluster_" << sanitize(thimac.id) << " {\n";
  os << indent << "  label=\"" << thimac.name << "\";\n";
  for (const auto& action_id : thimac.actions) {
    auto it = model.actions.find(action_id);
    if (it == model.actions.end()) continue;
    os << indent << "  \"" << action_id << "\" [label=\""
       << to_string(it->second.kind) << "\"];\n";
  }
  for (const auto& child_id : thimac.children) {
    auto it = model.thimacs.find(child_id);
    if (it != model.thimacs.end()) emit_thimac(model, it->second, depth + 1, os);
  }
  os << indent << "}\n";
}

}  // namespace

std::string dot_static(const StaticModel& model) {
  std::ostringstream os;
  os << "digraph static_model {\n";
  if (!model.thimacs.empty()) {
    os << "  compound=true;\n";
    os << "  node [shape=box, fontname=\"Helvetica\"];\n";
  }
  for (const auto& [id, thimac] : model.thimacs)
    if (!thimac.parent) emit_thimac(model, thimac, 0, os);
  for (const auto& flow : model.flows)
    os << "  \"" << flow.from << "\" -> \"" << flow.to << "\";\n";
  for (const auto& trigger : model.triggers)
    os << "  \"" << trigger.from << "\" -> \"" << trigger.to
       << "\" [style=dashed];\n";
  os << "}\n";
  return os.str();
}

std::string dot_chronology(const Chronology& chronology, const Trace* trace) {
  std::map<std::string, Mode> occurrence_mode;
  if (trace) {
    std::set<std::string> nodes(chronology.nodes.begin(),
                                chronology.nodes.end());
    for (size_t i = 0; i < trace->size(); ++i) {
      const TraceItem& item = (*trace)[i];
      if (!nodes.count(item.event))
        throw std::invalid_argument("trace event '" + item.event +
                                    "' is not part of chronology '" +
                                    chronology.name + "'");
      occurrence_mode[item.event] = item.mode;  // last occurrence wins
    }
  }

  std::ostringstream os;
  os << "digraph chronology_" << sanitize(chronology.name) << " {\n";
  if (!chronology.nodes.empty())
    os << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const auto& node : chronology.nodes) {
    os << "  \"" << node << "\" [label=\"" << node << "\"";
    auto it = occurrence_mode.find(node);
    if (it != occurrence_mode.end()) {
      if (it->second == Mode::Actual)
        os << ", style=filled, fillcolor=gray75";
      else
        os << ", style=dotted";
    }
    os << "];\n";
  }
  for (const auto& edge : chronology.edges) {
    for (const auto& target : edge.targets) {
      os << "  \"" << edge.source << "\" -> \"" << target << "\"";
      switch (edge.kind) {
        case ChronoEdge::Kind::Sequence:
          break;
        case ChronoEdge::Kind::Trigger:
          os << " [style=dashed]";
          break;
        case ChronoEdge::Kind::Alternative:
          os << " [label=\"\xE2\x88\xA8\"]";  // the disjunction mark
          break;
      }
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace tml
