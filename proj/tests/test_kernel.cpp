#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "tml/kernel.hpp"
#include "tml/text.hpp"

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

bool has_code(const std::vector<tml::Diagnostic>& diags,
              const std::string& code) {
  for (const auto& d : diags)
    if (d.code == code) return true;
  return false;
}

tml::StaticModel one_thimac(std::vector<tml::ActionKind> kinds) {
  tml::StaticModel model;
  tml::Thimac t;
  t.id = t.name = "T";
  for (auto kind : kinds) {
    std::string id = std::string("T.") + tml::to_string(kind);
    model.actions[id] = {id, "T", kind};
    t.actions.push_back(id);
  }
  model.thimacs["T"] = std::move(t);
  return model;
}

}  // namespace

TEST_CASE("fixtures validate cleanly") {
  auto waiter = load_fixture("waiter.tm");
  CHECK(tml::validate_static(waiter.model).empty());
  auto library = load_fixture("library.tm");
  CHECK(tml::validate_static(library.model).empty());
}

TEST_CASE("missing create is diagnosed") {
  auto model = one_thimac({tml::ActionKind::Process});
  auto diags = tml::validate_static(model);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].code == "E_NO_CREATE");
}

TEST_CASE("boundary flow must be transfer to transfer") {
  tml::StaticModel model;
  for (std::string name : {"A", "B"}) {
    tml::Thimac t;
    t.id = t.name = name;
    for (auto kind : {tml::ActionKind::Create, tml::ActionKind::Release,
                      tml::ActionKind::Receive, tml::ActionKind::Transfer}) {
      std::string id = name + "." + tml::to_string(kind);
      model.actions[id] = {id, name, kind};
      t.actions.push_back(id);
    }
    model.thimacs[name] = std::move(t);
  }
  model.flows.push_back({"A.release", "B.receive"});
  auto diags = tml::validate_static(model);
  CHECK(has_code(diags, "E_ILLEGAL_BOUNDARY_FLOW"));

  model.flows.clear();
  model.flows.push_back({"A.transfer", "B.transfer"});
  CHECK(tml::validate_static(model).empty());
}

TEST_CASE("internal flows are unconstrained") {
  auto model = one_thimac({tml::ActionKind::Create, tml::ActionKind::Process,
                           tml::ActionKind::Release});
  model.flows.push_back({"T.process", "T.release"});
  model.flows.push_back({"T.release", "T.process"});
  CHECK(tml::validate_static(model).empty());
}

TEST_CASE("dangling references are diagnosed") {
  auto model = one_thimac({tml::ActionKind::Create});
  model.flows.push_back({"T.create", "T.nowhere"});
  CHECK(has_code(tml::validate_static(model), "E_UNRESOLVED_REF"));
}

TEST_CASE("cyclic thimac nesting is diagnosed") {
  tml::StaticModel model;
  for (std::string name : {"A", "B"}) {
    tml::Thimac t;
    t.id = t.name = name;
    std::string create = name + ".create";
    model.actions[create] = {create, name, tml::ActionKind::Create};
    t.actions.push_back(create);
    model.thimacs[name] = std::move(t);
  }
  model.thimacs["A"].parent = "B";
  model.thimacs["A"].children = {"B"};
  model.thimacs["B"].parent = "A";
  model.thimacs["B"].children = {"A"};
  CHECK(has_code(tml::validate_static(model), "E_CYCLIC_NESTING"));
}

TEST_CASE("diagnostics accumulate") {
  auto model = one_thimac({tml::ActionKind::Process});
  model.flows.push_back({"T.process", "T.nowhere"});
  model.regions["empty"] = {"empty", {}};
  auto diags = tml::validate_static(model);
  CHECK(has_code(diags, "E_NO_CREATE"));
  CHECK(has_code(diags, "E_UNRESOLVED_REF"));
  CHECK(has_code(diags, "E_EMPTY_REGION"));
}

TEST_CASE("resolve_region") {
  auto library = load_fixture("library.tm");
  const tml::Region& rs = tml::resolve_region(library.model, "RS");
  CHECK(rs.name == "RS");
  CHECK(rs.nodes == std::vector<std::string>{"Library.Stacks.process",
                                             "Library.Stacks.receive"});
  CHECK_THROWS_AS(tml::resolve_region(library.model, "X"),
                  tml::UnknownRegionError);
}

TEST_CASE("realize and deactualize") {
  tml::Region r{"r", {"T.create"}};
  tml::Event e = tml::realize(r, 5, tml::Mode::Actual);
  CHECK(e.time == 5);
  CHECK(e.mode == tml::Mode::Actual);
  CHECK(tml::deactualize(e) == r);
  CHECK(tml::deactualize(tml::realize(r, 5, tml::Mode::Absent)) == r);
  CHECK_THROWS_AS(tml::realize(r, 1, tml::Mode::Potential),
                  std::invalid_argument);
  CHECK_THROWS_AS(tml::realize(r, 1, tml::Mode::Hole), std::invalid_argument);
}

TEST_CASE("deactualize round-trips every fixture region in both modes") {
  for (const char* name : {"waiter.tm", "library.tm"}) {
    auto doc = load_fixture(name);
    for (const auto& [_, region] : doc.model.regions) {
      for (auto mode : {tml::Mode::Actual, tml::Mode::Absent}) {
        CHECK(tml::deactualize(tml::realize(region, 7, mode)) == region);
      }
    }
  }
}

TEST_CASE("status-level negations follow the mode table") {
  CHECK(tml::negate_region(tml::Mode::Potential) == tml::Mode::Absent);
  CHECK(tml::negate_event(tml::Mode::Actual) == tml::Mode::Potential);
}
