#include <algorithm>
#include <fstream>
#include <sstream>

#include "certus/argument.hpp"
#include "certus/binder.hpp"
#include "certus/error.hpp"
#include "certus/parser.hpp"
#include "doctest.h"

using namespace certus;

namespace {

std::vector<std::string> codes_of(const Compilation& c) {
  std::vector<std::string> out;
  for (const auto& f : c.findings) out.push_back(f.code);
  return out;
}

Compilation compile_text(const std::string& doc) { return compile(load_document(doc), Ladder::standard()); }

const char* kLowOrHigh = R"doc(
definitions: |
  with lowOrHigh(p1: Premise, p2: Premise) as
    cases {
      p1 overlaps very_low or p2 overlaps very_low -> very_low;
      p1 overlaps low or p2 overlaps low -> low;
      otherwise -> high
    }
)doc";

}  // namespace

TEST_CASE("the shipped operator example binds at both call sites") {
  std::ifstream in(std::string(CERTUS_CORPUS_DIR) + "/parameterized_operator.yaml");
  std::stringstream ss;
  ss << in.rdbuf();
  auto c = compile_text(ss.str());
  CHECK(c.findings.empty());
  const auto& c0 = c.program.node("C0");
  const auto& c1 = c.program.node("C1");
  REQUIRE(c0.callee);
  REQUIRE(c1.callee);
  // C1 resolves the definition written at its ancestor C0.
  CHECK(c0.callee == c1.callee);
  CHECK(c1.callee->site == "C0");
}

TEST_CASE("references must name direct children") {
  auto c = compile_text(R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [C1], certus: "cases { E1 is high -> high; otherwise -> low }"}
  - {id: C1, kind: claim, text: b, children: [E1], certus: C1 is E1}
  - {id: E1, kind: evidence, text: c, certus: E1 is high}
)doc");
  CHECK(codes_of(c) == std::vector<std::string>{"SCOPE001"});
  CHECK(c.findings[0].node == "C0");
  CHECK(c.findings[0].message.find("not a direct child") != std::string::npos);

  auto unresolved = compile_text(R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [E1], certus: C0 is E7}
  - {id: E1, kind: evidence, text: c, certus: E1 is high}
)doc");
  CHECK(codes_of(unresolved) == std::vector<std::string>{"SCOPE001"});
}

TEST_CASE("passing a defeater to a Premise parameter is a type error") {
  auto c = compile_text(std::string(kLowOrHigh) + R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [E1, D1], certus: "lowOrHigh(E1, D1)"}
  - {id: E1, kind: evidence, text: b, certus: E1 is high}
  - {id: D1, kind: defeater, text: c, certus: D1 is low}
)doc");
  CHECK(codes_of(c) == std::vector<std::string>{"OP003"});
}

TEST_CASE("arity and unknown operators") {
  auto arity = compile_text(std::string(kLowOrHigh) + R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [E1], certus: "lowOrHigh(E1)"}
  - {id: E1, kind: evidence, text: b, certus: E1 is high}
)doc");
  CHECK(codes_of(arity) == std::vector<std::string>{"OP002"});

  auto unknown = compile_text(R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [E1], certus: "nothing(E1)"}
  - {id: E1, kind: evidence, text: b, certus: E1 is high}
)doc");
  CHECK(codes_of(unknown) == std::vector<std::string>{"OP001"});
}

TEST_CASE("definitions are visible at the node and below, not in siblings") {
  const char* doc = R"doc(nodes:
  - id: R
    kind: claim
    text: root
    children: [A, B]
    certus: "cases { A ge B -> A; otherwise -> B }"
  - id: A
    kind: claim
    text: a
    children: [E1]
    certus: |
      with keep(p: Any) as cases { p is zero -> zero; otherwise -> p }
      keep(E1)
  - id: B
    kind: claim
    text: b
    children: [E2]
    certus: keep(E2)
  - {id: E1, kind: evidence, text: e, certus: E1 is high}
  - {id: E2, kind: evidence, text: e, certus: E2 is high}
)doc";
  auto c = compile_text(doc);
  REQUIRE(c.findings.size() == 1);
  CHECK(c.findings[0].code == "OP001");
  CHECK(c.findings[0].node == "B");
}

TEST_CASE("nearer definitions shadow farther ones and globals") {
  const char* doc = R"doc(
definitions: |
  with pick(p: Any) as cases { p is zero -> zero; otherwise -> low }
nodes:
  - id: R
    kind: claim
    text: root
    children: [M]
    certus: |
      with pick(p: Any) as cases { p is zero -> zero; otherwise -> med }
      pick(M)
  - id: M
    kind: claim
    text: mid
    children: [L]
    certus: |
      with pick(p: Any) as cases { p is zero -> zero; otherwise -> high }
      pick(L)
  - {id: L, kind: claim, text: leaf, children: [E1], certus: pick(E1)}
  - {id: E1, kind: evidence, text: e, certus: E1 is high}
)doc";
  auto c = compile_text(doc);
  REQUIRE(c.findings.empty());
  CHECK(c.program.node("R").callee->site == "R");
  CHECK(c.program.node("M").callee->site == "M");
  CHECK(c.program.node("L").callee->site == "M");
}

TEST_CASE("globals are found when no ancestor defines the name") {
  auto c = compile_text(std::string(kLowOrHigh) + R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [E1, E2], certus: "lowOrHigh(E1, E2)"}
  - {id: E1, kind: evidence, text: b, certus: E1 is high}
  - {id: E2, kind: evidence, text: b, certus: E2 is high}
)doc");
  REQUIRE(c.findings.empty());
  CHECK(c.program.node("C0").callee->site.empty());
}

TEST_CASE("operator call chains bind, and recursion is rejected") {
  auto ok = compile_text(R"doc(
definitions: |
  with base(p: Any) as cases { p is zero -> zero; otherwise -> p }
  with wrap(d: Defeater) as base(d)
nodes:
  - {id: C0, kind: claim, text: a, children: [D1], certus: wrap(D1)}
  - {id: D1, kind: defeater, text: d, certus: D1 is low}
)doc");
  REQUIRE(ok.findings.empty());
  REQUIRE(ok.program.node("C0").callee);
  CHECK(ok.program.node("C0").callee->callee);

  auto rec = compile_text(R"doc(
definitions: |
  with f(p: Any) as g(p)
  with g(p: Any) as f(p)
nodes:
  - {id: C0, kind: claim, text: a, children: [E1], certus: f(E1)}
  - {id: E1, kind: evidence, text: e, certus: E1 is high}
)doc");
  auto found = codes_of(rec);
  CHECK(std::count(found.begin(), found.end(), "OP004") == 2);
}

TEST_CASE("parse errors become findings") {
  auto c = compile_text(R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [E1], certus: "cases { E1 is -> high }"}
  - {id: E1, kind: evidence, text: e, certus: E1 is high}
)doc");
  CHECK(codes_of(c) == std::vector<std::string>{"PARSE001"});
  CHECK_FALSE(c.program.node("C0").parsed);
}

TEST_CASE("unexpanded macros cannot be bound") {
  auto c = compile_text(R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [E1], certus: "#FUSE"}
  - {id: E1, kind: evidence, text: e, certus: E1 is high}
)doc");
  CHECK(codes_of(c) == std::vector<std::string>{"MAC001"});
}

TEST_CASE("parameter class rules") {
  CHECK(param_class(NodeKind::claim) == ParamType::premise);
  CHECK(param_class(NodeKind::evidence) == ParamType::premise);
  CHECK(param_class(NodeKind::defeater) == ParamType::defeater);
  CHECK(accepts(ParamType::any, ParamType::defeater));
  CHECK(accepts(ParamType::premise, ParamType::premise));
  CHECK_FALSE(accepts(ParamType::premise, ParamType::defeater));
  CHECK_FALSE(accepts(ParamType::defeater, ParamType::any));
}
