#include "tml/logic.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace tml {

struct Formula::Node {
  Kind kind;
  std::string name;                // Atom
  std::vector<Formula> children;   // 1 for Not, 2 for And/Or
};

Formula Formula::atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty atom name");
  auto node = std::make_shared<Node>();
  node->kind = Kind::Atom;
  node->name = std::move(name);
  return Formula(std::move(node));
}

Formula Formula::negation(Formula operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Not;
  node->children.push_back(std::move(operand));
  return Formula(std::move(node));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::And;
  node->children.push_back(std::move(lhs));
  node->children.push_back(std::move(rhs));
  return Formula(std::move(node));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Or;
  node->children.push_back(std::move(lhs));
  node->children.push_back(std::move(rhs));
  return Formula(std::move(node));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const std::string& Formula::atom_name() const {
  if (node_->kind != Kind::Atom) throw std::logic_error("not an atom");
  return node_->name;
}

const Formula& Formula::operand() const {
  if (node_->kind != Kind::Not) throw std::logic_error("not a negation");
  return node_->children[0];
}

const Formula& Formula::lhs() const {
  if (node_->kind != Kind::And && node_->kind != Kind::Or)
    throw std::logic_error("not a binary connective");
  return node_->children[0];
}

const Formula& Formula::rhs() const {
  if (node_->kind != Kind::And && node_->kind != Kind::Or)
    throw std::logic_error("not a binary connective");
  return node_->children[1];
}

bool Formula::contains_not() const {
  switch (node_->kind) {
    case Kind::Atom: return false;
    case Kind::Not: return true;
    case Kind::And:
    case Kind::Or: return lhs().contains_not() || rhs().contains_not();
  }
  return false;
}

void Formula::collect_atoms(std::set<std::string>& out) const {
  switch (node_->kind) {
    case Kind::Atom: out.insert(node_->name); break;
    case Kind::Not: operand().collect_atoms(out); break;
    case Kind::And:
    case Kind::Or:
      lhs().collect_atoms(out);
      rhs().collect_atoms(out);
      break;
  }
}

std::set<std::string> Formula::atoms() const {
  std::set<std::string> out;
  collect_atoms(out);
  return out;
}

namespace {

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    case Formula::Kind::Not: return 3;
    case Formula::Kind::Atom: return 4;
  }
  return 4;
}

void print(const Formula& f, int parent_prec, std::string& out) {
  int prec = precedence(f.kind());
  bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.atom_name();
      break;
    case Formula::Kind::Not:
      out += '!';
      print(f.operand(), prec + 1, out);
      break;
    case Formula::Kind::And:
      print(f.lhs(), prec + 1, out);
      out += '&';
      print(f.rhs(), prec, out);  // right-associative
      break;
    case Formula::Kind::Or:
      print(f.lhs(), prec + 1, out);
      out += '|';
      print(f.rhs(), prec, out);
      break;
  }
  if (parens) out += ')';
}

int compare(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Formula::Kind::Atom:
      return a.atom_name().compare(b.atom_name());
    case Formula::Kind::Not:
      return compare(a.operand(), b.operand());
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      int c = compare(a.lhs(), b.lhs());
      return c != 0 ? c : compare(a.rhs(), b.rhs());
    }
  }
  return 0;
}

}  // namespace

std::string Formula::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

bool operator==(const Formula& a, const Formula& b) {
  return a.node_ == b.node_ || compare(a, b) == 0;
}
bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

Mode eval_tm(const Formula& formula, const ModeAssignment& assignment) {
  switch (formula.kind()) {
    case Formula::Kind::Atom: {
      auto it = assignment.find(formula.atom_name());
      if (it == assignment.end()) throw UnboundAtomError(formula.atom_name());
      return it->second;
    }
    case Formula::Kind::Not:
      return neg(eval_tm(formula.operand(), assignment));
    case Formula::Kind::And: {
      Mode l = eval_tm(formula.lhs(), assignment);
      Mode r = eval_tm(formula.rhs(), assignment);
      if (l == Mode::Hole || r == Mode::Hole) return Mode::Hole;
      return realization_rank(l) <= realization_rank(r) ? l : r;
    }
    case Formula::Kind::Or: {
      Mode l = eval_tm(formula.lhs(), assignment);
      Mode r = eval_tm(formula.rhs(), assignment);
      // an actual disjunct actualizes the disjunction, even past a Hole
      if (l == Mode::Actual || r == Mode::Actual) return Mode::Actual;
      if (l == Mode::Hole || r == Mode::Hole) return Mode::Hole;
      return realization_rank(l) >= realization_rank(r) ? l : r;
    }
  }
  throw std::logic_error("unreachable");
}

bool eval_classical(const Formula& formula,
                    const std::map<std::string, bool>& assignment) {
  switch (formula.kind()) {
    case Formula::Kind::Atom: {
      auto it = assignment.find(formula.atom_name());
      if (it == assignment.end()) throw UnboundAtomError(formula.atom_name());
      return it->second;
    }
    case Formula::Kind::Not:
      return !eval_classical(formula.operand(), assignment);
    case Formula::Kind::And:
      return eval_classical(formula.lhs(), assignment) &&
             eval_classical(formula.rhs(), assignment);
    case Formula::Kind::Or:
      return eval_classical(formula.lhs(), assignment) ||
             eval_classical(formula.rhs(), assignment);
  }
  throw std::logic_error("unreachable");
}

bool operator==(const AnnotatedFormula& a, const AnnotatedFormula& b) {
  return a.mode == b.mode && a.formula == b.formula;
}

std::string to_string(const AnnotatedFormula& af) {
  std::string out = af.formula.to_string();
  if (af.formula.kind() == Formula::Kind::And ||
      af.formula.kind() == Formula::Kind::Or)
    out = "(" + out + ")";
  out += "@";
  out += to_string(af.mode);
  return out;
}

const char* to_string(Rule r) {
  switch (r) {
    case Rule::AndI: return "AndI";
    case Rule::AndE: return "AndE";
    case Rule::OrI: return "OrI";
    case Rule::DS: return "DS";
    case Rule::NegE: return "NegE";
  }
  return "?";
}

const char* to_string(EntailmentStatus s) {
  switch (s) {
    case EntailmentStatus::Entailed: return "Entailed";
    case EntailmentStatus::NotEntailed: return "NotEntailed";
    case EntailmentStatus::InadmissiblePremises: return "InadmissiblePremises";
  }
  return "?";
}

AdmissibilityReport admissible_premises(
    const std::vector<AnnotatedFormula>& premises) {
  // Strip negations by walking the mode backwards along the neg cycle,
  // then look for an atom pinned to both Actual and Absent.
  std::map<std::string, std::set<Mode>> atom_modes;
  for (const auto& premise : premises) {
    Formula f = premise.formula;
    Mode m = premise.mode;
    while (f.kind() == Formula::Kind::Not) {
      m = neg_inverse(m);
      f = f.operand();
    }
    if (f.kind() == Formula::Kind::Atom) atom_modes[f.atom_name()].insert(m);
  }
  for (const auto& [atom, modes] : atom_modes) {
    if (modes.count(Mode::Actual) && modes.count(Mode::Absent))
      return {false, "atom '" + atom +
                         "' is required to be an actual and an absent event "
                         "simultaneously"};
  }
  return {true, ""};
}

namespace {

using Fact = std::pair<Formula, Mode>;

struct FactLess {
  bool operator()(const Fact& a, const Fact& b) const {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  }
};

void collect_subformulas(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  switch (f.kind()) {
    case Formula::Kind::Atom: break;
    case Formula::Kind::Not: collect_subformulas(f.operand(), out); break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_subformulas(f.lhs(), out);
      collect_subformulas(f.rhs(), out);
      break;
  }
}

// Lexicographic mode order used for countermodel reporting: most realized
// first, Hole last.
constexpr Mode kModeOrder[] = {Mode::Actual, Mode::Potential, Mode::Absent,
                               Mode::Hole};

}  // namespace

EntailmentVerdict derive_tm(const std::vector<AnnotatedFormula>& premises,
                            const AnnotatedFormula& goal,
                            const std::set<std::string>& extra_atoms) {
  EntailmentVerdict verdict;

  AdmissibilityReport admissibility = admissible_premises(premises);
  if (!admissibility.admissible) {
    verdict.status = EntailmentStatus::InadmissiblePremises;
    verdict.note = admissibility.conflict;
    return verdict;
  }

  std::set<std::string> universe = extra_atoms;
  goal.formula.collect_atoms(universe);
  for (const auto& premise : premises) premise.formula.collect_atoms(universe);

  // Derived facts stay inside the subformula closure of premises and goal;
  // this keeps the fixpoint finite.
  std::set<Formula> closure;
  collect_subformulas(goal.formula, closure);
  for (const auto& premise : premises)
    collect_subformulas(premise.formula, closure);

  std::map<Fact, int, FactLess> origin;  // -1 = premise, else step index
  std::vector<DerivationStep> steps;

  auto has = [&](const Formula& f, Mode m) {
    return origin.count(Fact{f, m}) > 0;
  };
  bool changed = true;
  auto add = [&](const Formula& f, Mode m, Rule rule,
                 std::vector<AnnotatedFormula> inputs) {
    Fact fact{f, m};
    if (origin.count(fact)) return;
    steps.push_back({rule, std::move(inputs), {f, m}});
    origin.emplace(std::move(fact), static_cast<int>(steps.size()) - 1);
    changed = true;
  };

  for (const auto& premise : premises)
    origin.emplace(Fact{premise.formula, premise.mode}, -1);

  while (changed) {
    changed = false;
    // Unary rules over current facts.
    std::vector<Fact> snapshot;
    snapshot.reserve(origin.size());
    for (const auto& [fact, _] : origin) snapshot.push_back(fact);
    for (const auto& [f, m] : snapshot) {
      AnnotatedFormula in{f, m};
      if (f.kind() == Formula::Kind::Not && m == Mode::Actual)
        add(f.operand(), Mode::Absent, Rule::NegE, {in});
      if (f.kind() == Formula::Kind::And && m == Mode::Actual) {
        add(f.lhs(), Mode::Actual, Rule::AndE, {in});
        add(f.rhs(), Mode::Actual, Rule::AndE, {in});
      }
    }
    // Rules aimed at closure formulas.
    for (const Formula& target : closure) {
      switch (target.kind()) {
        case Formula::Kind::Not: {
          const Formula& x = target.operand();
          if (has(x, Mode::Absent))
            add(target, Mode::Actual, Rule::NegE, {{x, Mode::Absent}});
          break;
        }
        case Formula::Kind::And: {
          if (has(target.lhs(), Mode::Actual) && has(target.rhs(), Mode::Actual))
            add(target, Mode::Actual, Rule::AndI,
                {{target.lhs(), Mode::Actual}, {target.rhs(), Mode::Actual}});
          break;
        }
        case Formula::Kind::Or: {
          const Formula& x = target.lhs();
          const Formula& y = target.rhs();
          // OrI: the fresh disjunct must be a declared atom, and only an
          // Actual premise lifts the disjunction to Actual.
          if (y.kind() == Formula::Kind::Atom &&
              universe.count(y.atom_name())) {
            if (has(x, Mode::Actual))
              add(target, Mode::Actual, Rule::OrI, {{x, Mode::Actual}});
            else if (has(x, Mode::Potential))
              add(target, Mode::Potential, Rule::OrI, {{x, Mode::Potential}});
          }
          if (x.kind() == Formula::Kind::Atom &&
              universe.count(x.atom_name())) {
            if (has(y, Mode::Actual))
              add(target, Mode::Actual, Rule::OrI, {{y, Mode::Actual}});
            else if (has(y, Mode::Potential))
              add(target, Mode::Potential, Rule::OrI, {{y, Mode::Potential}});
          }
          // DS needs the disjunction itself at Actual.
          if (has(target, Mode::Actual)) {
            AnnotatedFormula disj{target, Mode::Actual};
            if (has(x, Mode::Absent))
              add(y, Mode::Actual, Rule::DS, {disj, {x, Mode::Absent}});
            if (has(y, Mode::Absent))
              add(x, Mode::Actual, Rule::DS, {disj, {y, Mode::Absent}});
          }
          break;
        }
        case Formula::Kind::Atom:
          break;
      }
    }
  }

  for (const auto& [fact, idx] : origin)
    if (idx >= 0) verdict.derived.push_back({fact.first, fact.second});

  Fact goal_fact{goal.formula, goal.mode};
  auto goal_it = origin.find(goal_fact);
  if (goal_it != origin.end()) {
    verdict.status = EntailmentStatus::Entailed;
    // Reconstruct the chain that reaches the goal, premises first.
    std::set<int> used;
    std::vector<int> order;
    auto visit = [&](auto&& self, const Fact& fact) -> void {
      auto it = origin.find(fact);
      if (it == origin.end() || it->second < 0) return;
      if (used.count(it->second)) return;
      used.insert(it->second);
      for (const auto& input : steps[it->second].inputs)
        self(self, Fact{input.formula, input.mode});
      order.push_back(it->second);
    };
    visit(visit, goal_fact);
    for (int idx : order) verdict.steps.push_back(steps[idx]);
    return verdict;
  }

  verdict.status = EntailmentStatus::NotEntailed;

  // Brute-force countermodel search over the atom universe.
  std::vector<std::string> atoms(universe.begin(), universe.end());
  if (atoms.size() > 10)
    throw std::invalid_argument(
        "countermodel search limited to 10 atoms, got " +
        std::to_string(atoms.size()));
  std::uint64_t total = 1;
  for (size_t i = 0; i < atoms.size(); ++i) total *= 4;
  for (std::uint64_t code = 0; code < total; ++code) {
    ModeAssignment sigma;
    std::uint64_t rest = code;
    for (const auto& atom : atoms) {
      sigma[atom] = kModeOrder[rest % 4];
      rest /= 4;
    }
    bool satisfies = true;
    for (const auto& premise : premises)
      if (eval_tm(premise.formula, sigma) != premise.mode) {
        satisfies = false;
        break;
      }
    if (!satisfies) continue;
    if (eval_tm(goal.formula, sigma) != goal.mode) {
      verdict.countermodels.push_back(std::move(sigma));
      return verdict;
    }
  }
  verdict.note =
      "goal not derivable by the rules, yet no countermodel exists over the "
      "declared atoms";
  return verdict;
}

EntailmentVerdict entails_classical(const std::vector<Formula>& premises,
                                    const Formula& goal) {
  std::set<std::string> universe = goal.atoms();
  for (const auto& premise : premises) premise.collect_atoms(universe);
  if (universe.size() > 20)
    throw std::invalid_argument("truth-table check limited to 20 atoms, got " +
                                std::to_string(universe.size()));

  std::vector<std::string> atoms(universe.begin(), universe.end());
  EntailmentVerdict verdict;
  verdict.status = EntailmentStatus::Entailed;
  std::uint64_t total = std::uint64_t{1} << atoms.size();
  for (std::uint64_t code = 0; code < total; ++code) {
    std::map<std::string, bool> tau;
    for (size_t i = 0; i < atoms.size(); ++i)
      tau[atoms[i]] = ((code >> i) & 1) == 0;  // true first, lexicographic
    bool satisfies = true;
    for (const auto& premise : premises)
      if (!eval_classical(premise, tau)) {
        satisfies = false;
        break;
      }
    if (!satisfies) continue;
    if (!eval_classical(goal, tau)) {
      verdict.status = EntailmentStatus::NotEntailed;
      ModeAssignment counter;
      for (const auto& [atom, value] : tau)
        counter[atom] = value ? Mode::Actual : Mode::Absent;
      verdict.countermodels.push_back(std::move(counter));
      return verdict;
    }
  }
  verdict.note = "exhaustive truth-table check over " +
                 std::to_string(atoms.size()) + " atoms";
  return verdict;
}

bool collapse_check(const Formula& formula, const ModeAssignment& assignment) {
  if (formula.contains_not())
    throw std::invalid_argument(
        "collapse is undefined for formulas with negation");
  std::map<std::string, bool> tau;
  for (const auto& [atom, mode] : assignment) {
    if (mode != Mode::Actual && mode != Mode::Potential)
      throw std::invalid_argument(
          "collapse check needs modes in {actual, potential}");
    tau[atom] = mode == Mode::Actual;
  }
  Mode tm = eval_tm(formula, assignment);
  bool projected = tm == Mode::Actual;
  return projected == eval_classical(formula, tau);
}

}  // namespace tml
