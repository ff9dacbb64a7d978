#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tml/mode.hpp"

namespace tml {

// Propositional formula over named atoms with Not/And/Or. Implication is
// not a connective here; it exists only at the top level of constraints.
// Immutable; copies share structure.
class Formula {
 public:
  enum class Kind { Atom, Not, And, Or };

  static Formula atom(std::string name);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);

  Kind kind() const;
  const std::string& atom_name() const;  // Kind::Atom only
  const Formula& operand() const;        // Kind::Not only
  const Formula& lhs() const;            // And/Or
  const Formula& rhs() const;            // And/Or

  bool contains_not() const;
  void collect_atoms(std::set<std::string>& out) const;
  std::set<std::string> atoms() const;

  // Surface syntax: ! binds tightest, then &, then |; minimal parentheses.
  std::string to_string() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

// Total map atom -> Mode. Callers must cover every atom of the formulas
// they evaluate; eval_tm throws UnboundAtomError otherwise.
using ModeAssignment = std::map<std::string, Mode>;

class UnboundAtomError : public std::runtime_error {
 public:
  explicit UnboundAtomError(const std::string& atom)
      : std::runtime_error("unbound atom: " + atom), atom_(atom) {}
  const std::string& atom() const { return atom_; }

 private:
  std::string atom_;
};

// Four-mode evaluation. Atoms look up the assignment, Not applies neg,
// Or joins by maximum realization and And meets by minimum, with the Hole
// exceptions: a Hole operand makes the result Hole unless an Or has an
// Actual operand.
Mode eval_tm(const Formula& formula, const ModeAssignment& assignment);

// Standard two-valued semantics, the contrast oracle.
bool eval_classical(const Formula& formula,
                    const std::map<std::string, bool>& assignment);

// A formula together with its claimed realization status.
struct AnnotatedFormula {
  Formula formula;
  Mode mode;  // Actual, Absent or Potential
};

bool operator==(const AnnotatedFormula& a, const AnnotatedFormula& b);
std::string to_string(const AnnotatedFormula& af);

struct AdmissibilityReport {
  bool admissible = true;
  std::string conflict;  // empty when admissible
};

// A premise set is inadmissible when negation-stripping normalization
// forces one atom to be both Actual and Absent at the event level.
// Static-level pairs (e.g. Potential alongside Actual) are allowed.
AdmissibilityReport admissible_premises(
    const std::vector<AnnotatedFormula>& premises);

enum class Rule { AndI, AndE, OrI, DS, NegE };
const char* to_string(Rule r);

struct DerivationStep {
  Rule rule;
  std::vector<AnnotatedFormula> inputs;
  AnnotatedFormula output;
};

enum class EntailmentStatus { Entailed, NotEntailed, InadmissiblePremises };
const char* to_string(EntailmentStatus s);

struct EntailmentVerdict {
  EntailmentStatus status = EntailmentStatus::NotEntailed;
  std::vector<DerivationStep> steps;          // Entailed (tm engine)
  std::vector<ModeAssignment> countermodels;  // NotEntailed
  std::vector<AnnotatedFormula> derived;      // every fact the engine reached
  std::string note;
};

// Forward-chains AndI/AndE/OrI/DS/NegE to a fixpoint over the subformula
// closure of premises and goal. OrI only fires with an Actual premise
// (a Potential premise licenses the disjunction at Potential; an Absent
// premise licenses nothing). Inadmissible premises license nothing.
// When the goal is not derived, a countermodel is searched by brute force
// over assignments of the atom universe, in lexicographic order with modes
// ordered Actual, Potential, Absent, Hole.
EntailmentVerdict derive_tm(const std::vector<AnnotatedFormula>& premises,
                            const AnnotatedFormula& goal,
                            const std::set<std::string>& extra_atoms = {});

// Exhaustive truth-table check, at most 20 atoms (throws std::invalid_argument
// beyond that). Inconsistent premises entail everything. Countermodels are
// reported as assignments with true as Actual and false as Absent.
EntailmentVerdict entails_classical(const std::vector<Formula>& premises,
                                    const Formula& goal);

// Property verifier: for negation-free formulas and assignments over
// {Actual, Potential}, the four-mode semantics collapses onto the classical
// one under Actual -> true, Potential -> false. Throws std::invalid_argument
// when the formula contains Not or the assignment leaves the two modes.
bool collapse_check(const Formula& formula, const ModeAssignment& assignment);

}  // namespace tml
