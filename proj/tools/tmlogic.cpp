// tmlogic: command-line front end for .tm models, formulas and chronologies.
//
// Exit codes: 0 success / all hold, 1 violations or a failed entailment,
// 2 usage or parse errors.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tml/chrono.hpp"
#include "tml/dot.hpp"
#include "tml/kernel.hpp"
#include "tml/logic.hpp"
#include "tml/text.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json state_to_json(const tml::State& state) {
  json out = json::object();
  for (const auto& [atom, mode] : state) out[atom] = tml::to_string(mode);
  return out;
}

json trace_to_json(const tml::Trace& trace) {
  json out = json::array();
  for (const auto& item : trace)
    out.push_back({{"event", item.event}, {"mode", tml::to_string(item.mode)}});
  return out;
}

std::string trace_to_text(const tml::Trace& trace) {
  std::string out;
  for (size_t i = 0; i < trace.size(); ++i) {
    if (i) out += " ";
    if (trace[i].mode == tml::Mode::Absent) out += "!";
    out += trace[i].event;
  }
  return out;
}

// Parses a .tm file or reports diagnostics. Returns nullopt on failure and
// sets exit_code.
std::optional<tml::Document> load_document(const std::string& path,
                                           int& exit_code) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read '" << path << "'\n";
    exit_code = kExitUsage;
    return std::nullopt;
  }
  tml::ParseResult result = tml::parse_model(*text);
  for (const auto& d : result.diagnostics)
    std::cerr << path << ": " << tml::format_diagnostic(d) << "\n";
  if (!result.doc) {
    exit_code = kExitUsage;
    return std::nullopt;
  }
  exit_code = kExitOk;
  return std::move(result.doc);
}

const tml::Chronology* pick_chronology(const tml::Document& doc,
                                       const std::string& name) {
  if (!name.empty()) {
    auto it = doc.chronologies.find(name);
    if (it == doc.chronologies.end()) {
      std::cerr << "error: unknown chronology '" << name << "'\n";
      return nullptr;
    }
    return &it->second;
  }
  if (doc.chronologies.size() == 1) return &doc.chronologies.begin()->second;
  std::cerr << "error: --chronology required (file declares "
            << doc.chronologies.size() << ")\n";
  return nullptr;
}

tml::Formula annotated_to_classical(const tml::AnnotatedFormula& af) {
  // Actual reads as true; Absent and Potential read as "not actual".
  if (af.mode == tml::Mode::Actual) return af.formula;
  return tml::Formula::negation(af.formula);
}

void print_verdict(const std::string& engine,
                   const tml::EntailmentVerdict& verdict, bool as_json) {
  if (as_json) {
    json out;
    out["engine"] = engine;
    out["status"] = tml::to_string(verdict.status);
    if (!verdict.steps.empty()) {
      json steps = json::array();
      for (const auto& step : verdict.steps) {
        json inputs = json::array();
        for (const auto& input : step.inputs)
          inputs.push_back(tml::to_string(input));
        steps.push_back({{"rule", tml::to_string(step.rule)},
                         {"inputs", inputs},
                         {"output", tml::to_string(step.output)}});
      }
      out["steps"] = steps;
    }
    if (!verdict.countermodels.empty())
      out["countermodel"] = state_to_json(verdict.countermodels.front());
    if (!verdict.note.empty()) out["note"] = verdict.note;
    std::cout << out.dump() << "\n";
    return;
  }
  std::cout << engine << ": " << tml::to_string(verdict.status) << "\n";
  for (size_t i = 0; i < verdict.steps.size(); ++i) {
    const auto& step = verdict.steps[i];
    std::cout << "  " << (i + 1) << ". " << tml::to_string(step.rule) << ": ";
    for (size_t k = 0; k < step.inputs.size(); ++k) {
      if (k) std::cout << ", ";
      std::cout << tml::to_string(step.inputs[k]);
    }
    std::cout << " |- " << tml::to_string(step.output) << "\n";
  }
  if (!verdict.countermodels.empty()) {
    std::cout << "  countermodel:";
    for (const auto& [atom, mode] : verdict.countermodels.front())
      std::cout << " " << atom << "=" << tml::to_string(mode);
    std::cout << "\n";
  }
  if (!verdict.note.empty()) std::cout << "  note: " << verdict.note << "\n";
}

void print_violation(const tml::Violation& violation, bool as_json) {
  if (as_json) {
    json out;
    out["constraint"] = violation.constraint;
    out["chronology"] = violation.chronology;
    out["trace_index"] = violation.trace_index;
    out["position"] = violation.position;
    out["trace"] = trace_to_json(violation.trace);
    out["state"] = state_to_json(violation.state);
    std::cout << out.dump() << "\n";
    return;
  }
  std::cout << "violation: constraint=" << violation.constraint
            << " chronology=" << violation.chronology
            << " trace=" << violation.trace_index
            << " position=" << violation.position << " state={";
  bool first = true;
  for (const auto& [atom, mode] : violation.state) {
    if (!first) std::cout << ", ";
    first = false;
    std::cout << atom << "=" << tml::to_string(mode);
  }
  std::cout << "}\n  trace: " << trace_to_text(violation.trace) << "\n";
}

// "E1,E2,!E4,E5" — '!' marks an absent occurrence.
tml::Trace parse_trace_spec(const std::string& spec) {
  tml::Trace trace;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    while (!part.empty() && part.front() == ' ') part.erase(part.begin());
    while (!part.empty() && part.back() == ' ') part.pop_back();
    if (part.empty()) continue;
    tml::Mode mode = tml::Mode::Actual;
    if (part.front() == '!') {
      mode = tml::Mode::Absent;
      part.erase(part.begin());
    }
    trace.push_back({part, mode});
  }
  return trace;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Executable toolkit for thinging-machine models with "
               "four-mode propositional semantics"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--format-json,--json", as_json,
               "line-delimited JSON records instead of text");

  // check
  std::string check_file;
  auto* check = app.add_subcommand("check", "parse and validate a .tm file");
  check->add_option("file", check_file)->required();

  // eval
  std::string eval_assign, eval_formula;
  auto* eval = app.add_subcommand("eval", "evaluate a formula under modes");
  eval->add_option("--assign", eval_assign,
                   "comma-separated atom=mode pairs; unlisted atoms are "
                   "potential");
  eval->add_option("--formula", eval_formula)->required();

  // entail
  std::string entail_premises, entail_conclusion, entail_engine = "tm";
  auto* entail = app.add_subcommand("entail", "run an inference");
  entail->add_option("--premises", entail_premises)->required();
  entail->add_option("--conclusion", entail_conclusion)->required();
  entail->add_option("--engine", entail_engine)
      ->check(CLI::IsMember({"tm", "classical", "both"}));

  // simulate
  std::string sim_file, sim_chronology, sim_start;
  int sim_bound = 12;
  bool sim_complete = false;
  auto* simulate = app.add_subcommand("simulate", "enumerate legal traces");
  simulate->add_option("file", sim_file)->required();
  simulate->add_option("--chronology", sim_chronology);
  simulate->add_option("--start", sim_start);
  simulate->add_option("--bound", sim_bound);
  simulate->add_flag("--complete-only", sim_complete);

  // constraints
  std::string con_file;
  int con_bound = 12;
  auto* constraints =
      app.add_subcommand("constraints", "check declared constraints");
  constraints->add_option("file", con_file)->required();
  constraints->add_option("--bound", con_bound);

  // consequence
  std::string cons_file, cons_constraint, cons_chronology;
  int cons_bound = 12;
  auto* consequence =
      app.add_subcommand("consequence", "check a candidate constraint");
  consequence->add_option("file", cons_file)->required();
  consequence->add_option("--constraint", cons_constraint)->required();
  consequence->add_option("--chronology", cons_chronology);
  consequence->add_option("--bound", cons_bound);

  // export
  std::string exp_file, exp_what = "static", exp_trace, exp_out;
  auto* exp = app.add_subcommand("export", "emit DOT");
  exp->add_option("file", exp_file)->required();
  exp->add_option("--what", exp_what, "static or chronology[:<id>]");
  exp->add_option("--trace", exp_trace,
                  "comma-separated events, '!' prefix for absent");
  exp->add_option("--out", exp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) {
      auto text = read_file(check_file);
      if (!text) {
        std::cerr << "error: cannot read '" << check_file << "'\n";
        return kExitUsage;
      }
      tml::ParseResult result = tml::parse_model(*text);
      for (const auto& d : result.diagnostics) {
        if (as_json)
          std::cout << json{{"code", d.code},
                            {"message", d.message},
                            {"line", d.pos.line},
                            {"column", d.pos.column}}
                           .dump()
                    << "\n";
        else
          std::cout << check_file << ": " << tml::format_diagnostic(d) << "\n";
      }
      if (result.doc) {
        if (!as_json) std::cout << "ok\n";
        return kExitOk;
      }
      for (const auto& d : result.diagnostics)
        if (d.code == "E_SYNTAX") return kExitUsage;
      return kExitViolations;
    }

    if (*eval) {
      tml::Formula formula = tml::parse_formula(eval_formula);
      tml::ModeAssignment assignment =
          eval_assign.empty() ? tml::ModeAssignment{}
                              : tml::parse_mode_assignment(eval_assign);
      assignment = tml::complete_assignment(std::move(assignment), formula);
      tml::Mode mode = tml::eval_tm(formula, assignment);
      if (as_json)
        std::cout << json{{"formula", formula.to_string()},
                          {"mode", tml::to_string(mode)}}
                         .dump()
                  << "\n";
      else
        std::cout << tml::to_string(mode) << "\n";
      return kExitOk;
    }

    if (*entail) {
      auto premises = tml::parse_annotated_list(entail_premises);
      auto conclusion = tml::parse_annotated(entail_conclusion);
      bool all_entailed = true;
      if (entail_engine == "tm" || entail_engine == "both") {
        auto verdict = tml::derive_tm(premises, conclusion);
        print_verdict("tm", verdict, as_json);
        all_entailed &= verdict.status == tml::EntailmentStatus::Entailed;
      }
      if (entail_engine == "classical" || entail_engine == "both") {
        std::vector<tml::Formula> classical_premises;
        for (const auto& premise : premises)
          classical_premises.push_back(annotated_to_classical(premise));
        auto verdict = tml::entails_classical(
            classical_premises, annotated_to_classical(conclusion));
        print_verdict("classical", verdict, as_json);
        all_entailed &= verdict.status == tml::EntailmentStatus::Entailed;
      }
      return all_entailed ? kExitOk : kExitViolations;
    }

    if (*simulate) {
      int code;
      auto doc = load_document(sim_file, code);
      if (!doc) return code;
      const tml::Chronology* chrono = pick_chronology(*doc, sim_chronology);
      if (!chrono) return kExitUsage;
      std::string start = sim_start.empty() ? tml::default_start(*chrono)
                                            : sim_start;
      auto traces = tml::enumerate_traces(*chrono, start, sim_bound,
                                          sim_complete, doc->chooses);
      for (const auto& trace : traces) {
        if (as_json)
          std::cout << json{{"trace", trace_to_json(trace)}}.dump() << "\n";
        else
          std::cout << trace_to_text(trace) << "\n";
      }
      if (!as_json)
        std::cerr << traces.size() << " trace(s)\n";
      return kExitOk;
    }

    if (*constraints) {
      int code;
      auto doc = load_document(con_file, code);
      if (!doc) return code;
      size_t total = 0;
      for (const auto& [name, chrono] : doc->chronologies) {
        auto violations =
            tml::check_constraints(*doc, chrono, doc->constraints, con_bound);
        for (const auto& violation : violations) print_violation(violation, as_json);
        total += violations.size();
      }
      if (total == 0) {
        if (!as_json)
          std::cout << "all constraints hold (bound " << con_bound << ")\n";
        return kExitOk;
      }
      return kExitViolations;
    }

    if (*consequence) {
      int code;
      auto doc = load_document(cons_file, code);
      if (!doc) return code;
      const tml::Chronology* chrono = pick_chronology(*doc, cons_chronology);
      if (!chrono) return kExitUsage;
      tml::Constraint candidate =
          tml::parse_constraint("candidate", cons_constraint);
      for (const auto& atom : candidate.lhs.atoms())
        if (!doc->atoms.count(atom)) {
          std::cerr << "error: undeclared atom '" << atom << "'\n";
          return kExitUsage;
        }
      for (const auto& atom : candidate.rhs.atoms())
        if (!doc->atoms.count(atom)) {
          std::cerr << "error: undeclared atom '" << atom << "'\n";
          return kExitUsage;
        }
      auto result = tml::verify_consequence(*doc, *chrono, candidate, cons_bound);
      if (result.proven) {
        if (as_json)
          std::cout << json{{"result", "proven-to-bound"},
                            {"bound", cons_bound},
                            {"traces_checked", result.traces_checked}}
                           .dump()
                    << "\n";
        else
          std::cout << "Proven-to-bound (" << result.traces_checked
                    << " traces, bound " << cons_bound << ")\n";
        return kExitOk;
      }
      if (as_json) {
        json out{{"result", "counterexample"}};
        out["trace"] = trace_to_json(result.counterexample->trace);
        out["position"] = result.counterexample->position;
        out["state"] = state_to_json(result.counterexample->state);
        std::cout << out.dump() << "\n";
      } else {
        std::cout << "Counterexample\n";
        print_violation(*result.counterexample, false);
      }
      return kExitViolations;
    }

    if (*exp) {
      int code;
      auto doc = load_document(exp_file, code);
      if (!doc) return code;
      std::string output;
      if (exp_what == "static") {
        output = tml::dot_static(doc->model);
      } else if (exp_what.rfind("chronology", 0) == 0) {
        std::string name;
        if (exp_what.size() > 10 && exp_what[10] == ':')
          name = exp_what.substr(11);
        const tml::Chronology* chrono = pick_chronology(*doc, name);
        if (!chrono) return kExitUsage;
        if (exp_trace.empty()) {
          output = tml::dot_chronology(*chrono);
        } else {
          tml::Trace trace = parse_trace_spec(exp_trace);
          output = tml::dot_chronology(*chrono, &trace);
        }
      } else {
        std::cerr << "error: --what must be static or chronology[:<id>]\n";
        return kExitUsage;
      }
      if (exp_out.empty()) {
        std::cout << output;
      } else {
        std::ofstream out(exp_out, std::ios::binary);
        if (!out) {
          std::cerr << "error: cannot write '" << exp_out << "'\n";
          return kExitUsage;
        }
        out << output;
      }
      return kExitOk;
    }
  } catch (const tml::ParseError& e) {
    std::cerr << "error at " << e.pos().line << ":" << e.pos().column << " ["
              << e.code() << "] " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
