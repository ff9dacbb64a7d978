#include "tml/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tml {

namespace {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind;
  std::string text;
  SourcePos pos;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, column = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (i < text.size() && text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, column};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) ||
              text[i] == '_'))
        advance(1);
      out.push_back({Token::Kind::Ident,
                     std::string(text.substr(start, i - start)), pos});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = i;
      while (i < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i])))
        advance(1);
      out.push_back({Token::Kind::Int,
                     std::string(text.substr(start, i - start)), pos});
      continue;
    }
    auto two = text.substr(i, 2);
    if (two == "->" || two == "~>" || two == "=>") {
      out.push_back({Token::Kind::Punct, std::string(two), pos});
      advance(2);
      continue;
    }
    if (std::string_view("{}();,=@|.:!&").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::Punct, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw ParseError("E_SYNTAX",
                     std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back({Token::Kind::End, "", {line, column}});
  return out;
}

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[index_]; }
  const Token& next() {
    const Token& t = tokens_[index_];
    if (t.kind != Token::Kind::End) ++index_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool accept_punct(std::string_view p) {
    if (peek().kind == Token::Kind::Punct && peek().text == p) {
      next();
      return true;
    }
    return false;
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p))
      throw ParseError("E_SYNTAX",
                       "expected '" + std::string(p) + "', got '" +
                           peek().text + "'",
                       peek().pos);
  }
  Token expect_ident() {
    if (peek().kind != Token::Kind::Ident)
      throw ParseError("E_SYNTAX", "expected identifier, got '" + peek().text + "'",
                       peek().pos);
    return next();
  }
  Token expect_int() {
    if (peek().kind != Token::Kind::Int)
      throw ParseError("E_SYNTAX", "expected integer, got '" + peek().text + "'",
                       peek().pos);
    return next();
  }

 private:
  std::vector<Token> tokens_;
  size_t index_ = 0;
};

// ---- formula grammar -------------------------------------------------

Formula parse_or_expr(TokenStream& ts);

Formula parse_primary(TokenStream& ts) {
  if (ts.accept_punct("(")) {
    Formula inner = parse_or_expr(ts);
    if (ts.peek().kind == Token::Kind::Punct &&
        (ts.peek().text == "=>" || ts.peek().text == "~>"))
      throw ParseError("E_NESTED_IMPLICATION",
                       "nested implication: '=>' and '~>' are only allowed at "
                       "the top level of a constraint",
                       ts.peek().pos);
    ts.expect_punct(")");
    return inner;
  }
  Token t = ts.expect_ident();
  return Formula::atom(t.text);
}

Formula parse_unary(TokenStream& ts) {
  if (ts.accept_punct("!")) return Formula::negation(parse_unary(ts));
  return parse_primary(ts);
}

Formula parse_and_expr(TokenStream& ts) {
  Formula lhs = parse_unary(ts);
  if (ts.accept_punct("&"))
    return Formula::conjunction(std::move(lhs), parse_and_expr(ts));
  return lhs;
}

Formula parse_or_expr(TokenStream& ts) {
  Formula lhs = parse_and_expr(ts);
  if (ts.accept_punct("|"))
    return Formula::disjunction(std::move(lhs), parse_or_expr(ts));
  return lhs;
}

Mode expect_annotation_mode(TokenStream& ts) {
  Token t = ts.expect_ident();
  auto mode = mode_from(t.text);
  if (!mode || *mode == Mode::Hole)
    throw ParseError("E_UNKNOWN_MODE",
                     "annotation mode must be actual, absent or potential, "
                     "got '" + t.text + "'",
                     t.pos);
  return *mode;
}

// ---- raw declarations (syntax phase) ---------------------------------

struct RawPath {
  std::string thimac;  // dotted thimac path
  std::string action;  // action keyword
  SourcePos pos;
  std::string action_id() const { return thimac + "." + action; }
};

struct RawArc {
  bool trigger = false;
  RawPath from, to;
};

struct RawRegion {
  std::string name;
  std::vector<RawPath> nodes;
  SourcePos pos;
};

struct RawAtom {
  std::string name, region;
  SourcePos pos;
};

struct RawConstituent {
  Mode mode;
  std::string atom;
  SourcePos pos;
};

struct RawEvent {
  std::string id;
  int time = 0;
  std::vector<RawConstituent> constituents;
  SourcePos pos;
};

struct RawEdge {
  ChronoEdge::Kind kind;
  std::string source;
  std::vector<std::string> targets;
  SourcePos pos;
};

struct RawChronology {
  std::string name;
  std::vector<RawEdge> edges;
  SourcePos pos;
};

struct RawChoose {
  int count = 1;
  std::vector<std::string> events;
  SourcePos pos;
};

struct RawConstraint {
  std::optional<Constraint> constraint;
  SourcePos pos;
};

struct RawFile {
  std::vector<RawArc> arcs;
  std::vector<RawRegion> regions;
  std::vector<RawAtom> atoms;
  std::vector<RawEvent> events;
  std::vector<RawChronology> chronologies;
  std::vector<RawChoose> chooses;
  std::vector<RawConstraint> constraints;
};

class ModelParser {
 public:
  ModelParser(TokenStream& ts, Document& doc, std::vector<Diagnostic>& diags)
      : ts_(ts), doc_(doc), diags_(diags) {}

  RawFile parse_file() {
    RawFile raw;
    while (!ts_.at_end()) {
      Token head = ts_.expect_ident();
      if (head.text == "thimac") {
        parse_thimac("", std::nullopt);
      } else if (head.text == "flow" || head.text == "trigger") {
        RawArc arc;
        arc.trigger = head.text == "trigger";
        arc.from = parse_path();
        ts_.expect_punct(arc.trigger ? "~>" : "->");
        arc.to = parse_path();
        ts_.expect_punct(";");
        raw.arcs.push_back(std::move(arc));
      } else if (head.text == "region") {
        RawRegion region;
        region.pos = head.pos;
        region.name = ts_.expect_ident().text;
        ts_.expect_punct("=");
        ts_.expect_punct("{");
        if (!ts_.accept_punct("}")) {
          region.nodes.push_back(parse_path());
          while (ts_.accept_punct(",")) region.nodes.push_back(parse_path());
          ts_.expect_punct("}");
        }
        ts_.expect_punct(";");
        raw.regions.push_back(std::move(region));
      } else if (head.text == "atom") {
        RawAtom atom;
        atom.pos = head.pos;
        atom.name = ts_.expect_ident().text;
        ts_.expect_punct("=");
        atom.region = ts_.expect_ident().text;
        ts_.expect_punct(";");
        raw.atoms.push_back(std::move(atom));
      } else if (head.text == "event") {
        raw.events.push_back(parse_event(head.pos));
      } else if (head.text == "chronology") {
        raw.chronologies.push_back(parse_chronology(head.pos));
      } else if (head.text == "choose") {
        RawChoose choose;
        choose.pos = head.pos;
        choose.count = std::stoi(ts_.expect_int().text);
        Token of = ts_.expect_ident();
        if (of.text != "of")
          throw ParseError("E_SYNTAX", "expected 'of', got '" + of.text + "'",
                           of.pos);
        ts_.expect_punct("(");
        choose.events.push_back(ts_.expect_ident().text);
        while (ts_.accept_punct("|"))
          choose.events.push_back(ts_.expect_ident().text);
        ts_.expect_punct(")");
        ts_.expect_punct(";");
        raw.chooses.push_back(std::move(choose));
      } else if (head.text == "constraint") {
        RawConstraint rc;
        rc.pos = head.pos;
        std::string name = ts_.expect_ident().text;
        ts_.expect_punct(":");
        Formula lhs = parse_or_expr(ts_);
        Constraint::Kind kind;
        if (ts_.accept_punct("=>")) {
          kind = Constraint::Kind::Simultaneous;
        } else if (ts_.accept_punct("~>")) {
          kind = Constraint::Kind::Triggering;
        } else {
          throw ParseError("E_SYNTAX",
                           "expected '=>' or '~>' in constraint, got '" +
                               ts_.peek().text + "'",
                           ts_.peek().pos);
        }
        Formula rhs = parse_or_expr(ts_);
        if (ts_.peek().kind == Token::Kind::Punct &&
            (ts_.peek().text == "=>" || ts_.peek().text == "~>"))
          throw ParseError("E_NESTED_IMPLICATION",
                           "nested implication in constraint '" + name + "'",
                           ts_.peek().pos);
        ts_.expect_punct(";");
        rc.constraint =
            Constraint{std::move(name), std::move(lhs), kind, std::move(rhs)};
        raw.constraints.push_back(std::move(rc));
      } else {
        throw ParseError("E_SYNTAX", "unexpected '" + head.text + "'",
                         head.pos);
      }
    }
    return raw;
  }

 private:
  void error(std::string code, std::string message, SourcePos pos) {
    diags_.push_back({std::move(code), std::move(message), pos, Severity::Error});
  }

  RawPath parse_path() {
    Token first = ts_.expect_ident();
    std::vector<std::string> segments{first.text};
    while (ts_.accept_punct(".")) segments.push_back(ts_.expect_ident().text);
    if (segments.size() < 2 || !action_kind_from(segments.back()))
      throw ParseError("E_SYNTAX",
                       "path must name a thimac and end in an action kind",
                       first.pos);
    RawPath path;
    path.pos = first.pos;
    path.action = segments.back();
    segments.pop_back();
    path.thimac = segments.front();
    for (size_t i = 1; i < segments.size(); ++i)
      path.thimac += "." + segments[i];
    return path;
  }

  void parse_thimac(const std::string& prefix,
                    std::optional<std::string> parent) {
    Token name = ts_.expect_ident();
    std::string qid = prefix.empty() ? name.text : prefix + "." + name.text;
    if (doc_.model.thimacs.count(qid))
      error("E_DUPLICATE_ID", "duplicate thimac '" + qid + "'", name.pos);
    Thimac thimac;
    thimac.id = qid;
    thimac.name = name.text;
    thimac.parent = std::move(parent);
    doc_.model.thimacs[qid] = thimac;
    ts_.expect_punct("{");
    while (!ts_.accept_punct("}")) {
      Token item = ts_.expect_ident();
      if (item.text == "thimac") {
        parse_thimac(qid, qid);
        continue;
      }
      auto kind = action_kind_from(item.text);
      if (!kind)
        throw ParseError("E_SYNTAX",
                         "expected an action kind or nested thimac, got '" +
                             item.text + "'",
                         item.pos);
      ts_.expect_punct(";");
      std::string action_id = qid + "." + item.text;
      if (doc_.model.actions.count(action_id)) {
        error("E_DUPLICATE_ID", "duplicate action '" + action_id + "'",
              item.pos);
        continue;
      }
      doc_.model.actions[action_id] = {action_id, qid, *kind};
      doc_.model.thimacs[qid].actions.push_back(action_id);
    }
    auto& stored = doc_.model.thimacs[qid];
    std::sort(stored.actions.begin(), stored.actions.end());
    if (!prefix.empty()) {
      doc_.model.thimacs[prefix].children.push_back(qid);
      std::sort(doc_.model.thimacs[prefix].children.begin(),
                doc_.model.thimacs[prefix].children.end());
    }
  }

  RawEvent parse_event(SourcePos pos) {
    RawEvent event;
    event.pos = pos;
    event.id = ts_.expect_ident().text;
    ts_.expect_punct("@");
    event.time = std::stoi(ts_.expect_int().text);
    ts_.expect_punct("{");
    do {
      Token word = ts_.expect_ident();
      auto mode = mode_from(word.text);
      if (!mode || (*mode != Mode::Actual && *mode != Mode::Absent))
        throw ParseError("E_UNKNOWN_MODE",
                         "event constituents are 'actual' or 'absent', got '" +
                             word.text + "'",
                         word.pos);
      Token atom = ts_.expect_ident();
      ts_.expect_punct(";");
      event.constituents.push_back({*mode, atom.text, atom.pos});
    } while (!ts_.accept_punct("}"));
    return event;
  }

  RawChronology parse_chronology(SourcePos pos) {
    RawChronology chrono;
    chrono.pos = pos;
    chrono.name = ts_.expect_ident().text;
    ts_.expect_punct("{");
    while (!ts_.accept_punct("}")) {
      RawEdge edge;
      Token source = ts_.expect_ident();
      edge.source = source.text;
      edge.pos = source.pos;
      if (ts_.accept_punct("~>")) {
        edge.kind = ChronoEdge::Kind::Trigger;
        edge.targets.push_back(ts_.expect_ident().text);
      } else {
        ts_.expect_punct("->");
        if (ts_.accept_punct("(")) {
          edge.targets.push_back(ts_.expect_ident().text);
          while (ts_.accept_punct("|"))
            edge.targets.push_back(ts_.expect_ident().text);
          ts_.expect_punct(")");
          if (edge.targets.size() < 2)
            throw ParseError("E_SYNTAX",
                             "alternative branch needs at least two targets",
                             edge.pos);
          edge.kind = ChronoEdge::Kind::Alternative;
        } else {
          edge.kind = ChronoEdge::Kind::Sequence;
          edge.targets.push_back(ts_.expect_ident().text);
        }
      }
      ts_.expect_punct(";");
      chrono.edges.push_back(std::move(edge));
    }
    return chrono;
  }

  TokenStream& ts_;
  Document& doc_;
  std::vector<Diagnostic>& diags_;
};

// ---- resolution phase -------------------------------------------------

class Resolver {
 public:
  Resolver(Document& doc, std::vector<Diagnostic>& diags)
      : doc_(doc), diags_(diags) {}

  void resolve(const RawFile& raw) {
    for (const auto& arc : raw.arcs) {
      std::string from = resolve_path(arc.from);
      std::string to = resolve_path(arc.to);
      if (from.empty() || to.empty()) continue;
      if (arc.trigger)
        doc_.model.triggers.push_back({from, to});
      else
        doc_.model.flows.push_back({from, to});
    }
    auto arc_less = [](const auto& a, const auto& b) {
      return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    };
    std::sort(doc_.model.flows.begin(), doc_.model.flows.end(), arc_less);
    std::sort(doc_.model.triggers.begin(), doc_.model.triggers.end(), arc_less);

    for (const auto& raw_region : raw.regions) {
      if (doc_.model.regions.count(raw_region.name)) {
        error("E_DUPLICATE_ID", "duplicate region '" + raw_region.name + "'",
              raw_region.pos);
        continue;
      }
      if (raw_region.nodes.empty()) {
        error("E_EMPTY_REGION", "region '" + raw_region.name + "' is empty",
              raw_region.pos);
        continue;
      }
      Region region;
      region.name = raw_region.name;
      for (const auto& path : raw_region.nodes) {
        std::string id = resolve_path(path);
        if (!id.empty()) region.nodes.push_back(id);
      }
      std::sort(region.nodes.begin(), region.nodes.end());
      region.nodes.erase(std::unique(region.nodes.begin(), region.nodes.end()),
                         region.nodes.end());
      doc_.model.regions[region.name] = std::move(region);
    }

    for (const auto& atom : raw.atoms) {
      if (doc_.atoms.count(atom.name)) {
        error("E_DUPLICATE_ID", "duplicate atom '" + atom.name + "'", atom.pos);
        continue;
      }
      if (!doc_.model.regions.count(atom.region))
        error("E_UNRESOLVED_REF",
              "atom '" + atom.name + "' binds unknown region '" + atom.region +
                  "'",
              atom.pos);
      doc_.atoms[atom.name] = atom.region;
    }

    for (const auto& raw_event : raw.events) {
      if (doc_.events.count(raw_event.id)) {
        error("E_DUPLICATE_ID", "duplicate event '" + raw_event.id + "'",
              raw_event.pos);
        continue;
      }
      Event event;
      event.id = raw_event.id;
      event.time = raw_event.time;
      event.mode = Mode::Actual;
      std::set<std::string> seen;
      for (const auto& constituent : raw_event.constituents) {
        if (!doc_.atoms.count(constituent.atom))
          error("E_UNRESOLVED_REF",
                "event '" + raw_event.id + "' references undeclared atom '" +
                    constituent.atom + "'",
                constituent.pos);
        if (!seen.insert(constituent.atom).second) {
          error("E_DUPLICATE_ATOM",
                "event '" + raw_event.id + "' declares atom '" +
                    constituent.atom + "' twice",
                constituent.pos);
          continue;
        }
        event.constituents.push_back({constituent.atom, constituent.mode});
      }
      std::sort(event.constituents.begin(), event.constituents.end(),
                [](const Constituent& a, const Constituent& b) {
                  return a.atom < b.atom;
                });
      doc_.events[event.id] = std::move(event);
    }

    for (const auto& raw_chrono : raw.chronologies) {
      if (doc_.chronologies.count(raw_chrono.name)) {
        error("E_DUPLICATE_ID",
              "duplicate chronology '" + raw_chrono.name + "'", raw_chrono.pos);
        continue;
      }
      Chronology chrono;
      chrono.name = raw_chrono.name;
      std::set<std::string> nodes;
      for (const auto& raw_edge : raw_chrono.edges) {
        check_event_ref(raw_edge.source, raw_edge.pos);
        nodes.insert(raw_edge.source);
        ChronoEdge edge;
        edge.kind = raw_edge.kind;
        edge.source = raw_edge.source;
        edge.targets = raw_edge.targets;
        for (const auto& target : edge.targets) {
          check_event_ref(target, raw_edge.pos);
          nodes.insert(target);
        }
        if (edge.kind == ChronoEdge::Kind::Alternative)
          std::sort(edge.targets.begin(), edge.targets.end());
        chrono.edges.push_back(std::move(edge));
      }
      chrono.nodes.assign(nodes.begin(), nodes.end());
      std::sort(chrono.edges.begin(), chrono.edges.end(),
                [](const ChronoEdge& a, const ChronoEdge& b) {
                  return std::tie(a.source, a.kind, a.targets) <
                         std::tie(b.source, b.kind, b.targets);
                });
      doc_.chronologies[chrono.name] = std::move(chrono);
    }

    for (const auto& raw_choose : raw.chooses) {
      ChooseGroup group;
      group.count = raw_choose.count;
      group.events = raw_choose.events;
      for (const auto& event : group.events)
        check_event_ref(event, raw_choose.pos);
      std::sort(group.events.begin(), group.events.end());
      doc_.chooses.push_back(std::move(group));
    }
    std::sort(doc_.chooses.begin(), doc_.chooses.end(),
              [](const ChooseGroup& a, const ChooseGroup& b) {
                return std::tie(a.count, a.events) < std::tie(b.count, b.events);
              });

    std::set<std::string> constraint_names;
    for (const auto& raw_constraint : raw.constraints) {
      const Constraint& constraint = *raw_constraint.constraint;
      if (!constraint_names.insert(constraint.name).second) {
        error("E_DUPLICATE_ID",
              "duplicate constraint '" + constraint.name + "'",
              raw_constraint.pos);
        continue;
      }
      for (const auto& atom : constraint.lhs.atoms())
        check_atom_ref(atom, raw_constraint.pos);
      for (const auto& atom : constraint.rhs.atoms())
        check_atom_ref(atom, raw_constraint.pos);
      doc_.constraints.push_back(constraint);
    }
    std::sort(doc_.constraints.begin(), doc_.constraints.end(),
              [](const Constraint& a, const Constraint& b) {
                return a.name < b.name;
              });
  }

 private:
  void error(std::string code, std::string message, SourcePos pos) {
    diags_.push_back({std::move(code), std::move(message), pos, Severity::Error});
  }

  std::string resolve_path(const RawPath& path) {
    if (!doc_.model.thimacs.count(path.thimac)) {
      error("E_UNRESOLVED_REF", "unknown thimac '" + path.thimac + "'",
            path.pos);
      return "";
    }
    std::string id = path.action_id();
    if (!doc_.model.actions.count(id)) {
      error("E_UNRESOLVED_REF",
            "thimac '" + path.thimac + "' has no '" + path.action + "' action",
            path.pos);
      return "";
    }
    return id;
  }

  void check_event_ref(const std::string& id, SourcePos pos) {
    if (!doc_.events.count(id))
      error("E_UNRESOLVED_REF", "undeclared event '" + id + "'", pos);
  }

  void check_atom_ref(const std::string& atom, SourcePos pos) {
    if (!doc_.atoms.count(atom))
      error("E_UNRESOLVED_REF", "constraint references undeclared atom '" +
                                    atom + "'",
            pos);
  }

  Document& doc_;
  std::vector<Diagnostic>& diags_;
};

}  // namespace

ParseResult parse_model(std::string_view text) {
  ParseResult result;
  Document doc;
  try {
    TokenStream ts(lex(text));
    ModelParser parser(ts, doc, result.diagnostics);
    RawFile raw = parser.parse_file();
    Resolver(doc, result.diagnostics).resolve(raw);
  } catch (const ParseError& e) {
    result.diagnostics.push_back(
        {e.code(), e.what(), e.pos(), Severity::Error});
    return result;
  }
  auto structural = validate_static(doc.model);
  result.diagnostics.insert(result.diagnostics.end(), structural.begin(),
                            structural.end());
  if (!has_errors(result.diagnostics)) result.doc = std::move(doc);
  return result;
}

namespace {

constexpr ActionKind kKindOrder[] = {ActionKind::Create, ActionKind::Process,
                                     ActionKind::Release, ActionKind::Transfer,
                                     ActionKind::Receive};

void serialize_thimac(const Document& doc, const Thimac& thimac, int depth,
                      std::string& out) {
  std::string indent(2 * static_cast<size_t>(depth), ' ');
  out += indent + "thimac " + thimac.name + " {\n";
  for (ActionKind kind : kKindOrder) {
    std::string id = thimac.id + "." + to_string(kind);
    if (std::find(thimac.actions.begin(), thimac.actions.end(), id) !=
        thimac.actions.end())
      out += indent + "  " + to_string(kind) + ";\n";
  }
  for (const auto& child_id : thimac.children) {
    auto it = doc.model.thimacs.find(child_id);
    if (it != doc.model.thimacs.end())
      serialize_thimac(doc, it->second, depth + 1, out);
  }
  out += indent + "}\n";
}

const char* arrow(Constraint::Kind kind) {
  return kind == Constraint::Kind::Simultaneous ? "=>" : "~>";
}

}  // namespace

std::string serialize_model(const Document& doc) {
  std::string out;
  for (const auto& [id, thimac] : doc.model.thimacs)
    if (!thimac.parent) serialize_thimac(doc, thimac, 0, out);
  for (const auto& flow : doc.model.flows)
    out += "flow " + flow.from + " -> " + flow.to + ";\n";
  for (const auto& trigger : doc.model.triggers)
    out += "trigger " + trigger.from + " ~> " + trigger.to + ";\n";
  for (const auto& [name, region] : doc.model.regions) {
    out += "region " + name + " = { ";
    for (size_t i = 0; i < region.nodes.size(); ++i) {
      if (i) out += ", ";
      out += region.nodes[i];
    }
    out += " };\n";
  }
  for (const auto& [name, region] : doc.atoms)
    out += "atom " + name + " = " + region + ";\n";
  for (const auto& [id, event] : doc.events) {
    out += "event " + id + " @ " + std::to_string(event.time) + " {\n";
    for (const auto& constituent : event.constituents)
      out += std::string("  ") + to_string(constituent.mode) + " " +
             constituent.atom + ";\n";
    out += "}\n";
  }
  for (const auto& [name, chrono] : doc.chronologies) {
    out += "chronology " + name + " {\n";
    for (const auto& edge : chrono.edges) {
      out += "  " + edge.source;
      switch (edge.kind) {
        case ChronoEdge::Kind::Sequence:
          out += " -> " + edge.targets.front();
          break;
        case ChronoEdge::Kind::Trigger:
          out += " ~> " + edge.targets.front();
          break;
        case ChronoEdge::Kind::Alternative: {
          out += " -> (";
          for (size_t i = 0; i < edge.targets.size(); ++i) {
            if (i) out += "|";
            out += edge.targets[i];
          }
          out += ")";
          break;
        }
      }
      out += ";\n";
    }
    out += "}\n";
  }
  for (const auto& group : doc.chooses) {
    out += "choose " + std::to_string(group.count) + " of (";
    for (size_t i = 0; i < group.events.size(); ++i) {
      if (i) out += "|";
      out += group.events[i];
    }
    out += ");\n";
  }
  for (const auto& constraint : doc.constraints)
    out += "constraint " + constraint.name + ": " +
           constraint.lhs.to_string() + " " + arrow(constraint.kind) + " " +
           constraint.rhs.to_string() + ";\n";
  return out;
}

Formula parse_formula(std::string_view text) {
  TokenStream ts(lex(text));
  Formula formula = parse_or_expr(ts);
  if (ts.peek().kind == Token::Kind::Punct &&
      (ts.peek().text == "=>" || ts.peek().text == "~>")) {
    SourcePos pos = ts.peek().pos;
    std::string op = ts.next().text;
    parse_or_expr(ts);  // surfaces nested-implication errors first
    throw ParseError("E_SYNTAX",
                     "'" + op + "' makes this a constraint, not a formula",
                     pos);
  }
  if (!ts.at_end())
    throw ParseError("E_SYNTAX", "unexpected '" + ts.peek().text + "'",
                     ts.peek().pos);
  return formula;
}

Constraint parse_constraint(std::string_view name, std::string_view text) {
  TokenStream ts(lex(text));
  Formula lhs = parse_or_expr(ts);
  Constraint::Kind kind;
  if (ts.accept_punct("=>")) {
    kind = Constraint::Kind::Simultaneous;
  } else if (ts.accept_punct("~>")) {
    kind = Constraint::Kind::Triggering;
  } else {
    throw ParseError("E_SYNTAX", "constraint needs '=>' or '~>'",
                     ts.peek().pos);
  }
  Formula rhs = parse_or_expr(ts);
  if (ts.peek().kind == Token::Kind::Punct &&
      (ts.peek().text == "=>" || ts.peek().text == "~>"))
    throw ParseError("E_NESTED_IMPLICATION", "nested implication",
                     ts.peek().pos);
  if (!ts.at_end())
    throw ParseError("E_SYNTAX", "unexpected '" + ts.peek().text + "'",
                     ts.peek().pos);
  Constraint constraint{std::string(name), std::move(lhs), kind,
                        std::move(rhs)};
  return constraint;
}

AnnotatedFormula parse_annotated(std::string_view text) {
  TokenStream ts(lex(text));
  Formula formula = parse_or_expr(ts);
  ts.expect_punct("@");
  Mode mode = expect_annotation_mode(ts);
  if (!ts.at_end())
    throw ParseError("E_SYNTAX", "unexpected '" + ts.peek().text + "'",
                     ts.peek().pos);
  return {std::move(formula), mode};
}

std::vector<AnnotatedFormula> parse_annotated_list(std::string_view text) {
  TokenStream ts(lex(text));
  std::vector<AnnotatedFormula> out;
  do {
    Formula formula = parse_or_expr(ts);
    ts.expect_punct("@");
    Mode mode = expect_annotation_mode(ts);
    out.push_back({std::move(formula), mode});
  } while (ts.accept_punct(","));
  if (!ts.at_end())
    throw ParseError("E_SYNTAX", "unexpected '" + ts.peek().text + "'",
                     ts.peek().pos);
  return out;
}

ModeAssignment parse_mode_assignment(std::string_view text) {
  TokenStream ts(lex(text));
  ModeAssignment out;
  do {
    Token atom = ts.expect_ident();
    ts.expect_punct("=");
    Token word = ts.expect_ident();
    auto mode = mode_from(word.text);
    if (!mode)
      throw ParseError("E_UNKNOWN_MODE", "unknown mode '" + word.text + "'",
                       word.pos);
    if (out.count(atom.text))
      throw ParseError("E_DUPLICATE_ATOM",
                       "atom '" + atom.text + "' assigned twice", atom.pos);
    out[atom.text] = *mode;
  } while (ts.accept_punct(","));
  if (!ts.at_end())
    throw ParseError("E_SYNTAX", "unexpected '" + ts.peek().text + "'",
                     ts.peek().pos);
  return out;
}

ModeAssignment complete_assignment(ModeAssignment assignment,
                                   const Formula& formula) {
  for (const auto& atom : formula.atoms())
    assignment.emplace(atom, Mode::Potential);
  return assignment;
}

}  // namespace tml
