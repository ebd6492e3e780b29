#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "certus/argument.hpp"
#include "certus/binder.hpp"
#include "certus/compiled_cases.hpp"
#include "certus/macro.hpp"
#include "certus/parser.hpp"
#include "certus/preflight.hpp"
#include "doctest.h"
#include "support/generators.hpp"

using namespace certus;

namespace {

const Ladder& L = Ladder::standard();

std::string read_corpus(const std::string& name) {
  std::ifstream in(std::string(CERTUS_CORPUS_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> codes_of(const std::vector<Finding>& findings) {
  std::vector<std::string> out;
  for (const auto& f : findings) out.push_back(f.code);
  return out;
}

std::vector<FuzzySet> ladder_sets() {
  std::vector<FuzzySet> out;
  for (const auto& e : L.entries()) out.push_back(e.set);
  return out;
}

CheckSite site_for(const CasesExpr& expr, std::vector<std::string> slots, std::vector<bool> defeater) {
  return CheckSite{"C0", "node 'C0'", &expr, std::move(slots), std::move(defeater), {}};
}

CasesExpr parse_cases(const std::string& text) { return std::get<CasesExpr>(parse_annotation(text, "C0")); }

// Independent interpreter over the AST, built directly on the fuzzy-core
// comparisons. Used as the oracle for the table-driven checker.
struct Oracle {
  const std::vector<std::string>& slots;
  const std::vector<FuzzySet>& values;

  const FuzzySet& value(const Ref& r) const {
    auto it = std::find(slots.begin(), slots.end(), r.id);
    return values[static_cast<std::size_t>(it - slots.begin())];
  }

  bool holds(const Condition& c) const {
    switch (c.kind) {
      case Condition::Kind::conjunction:
        return std::all_of(c.operands.begin(), c.operands.end(), [&](const Condition& o) { return holds(o); });
      case Condition::Kind::disjunction:
        return std::any_of(c.operands.begin(), c.operands.end(), [&](const Condition& o) { return holds(o); });
      case Condition::Kind::atom: break;
    }
    const FuzzySet& a = value(c.atom.left);
    const FuzzySet b = std::holds_alternative<Ref>(c.atom.right) ? value(std::get<Ref>(c.atom.right))
                                                                 : resolve(std::get<SetExpr>(c.atom.right), L);
    switch (c.atom.op) {
      case CompareOp::is: return subset_of(a, b);
      case CompareOp::contains: return contains_set(a, b);
      case CompareOp::overlaps: return overlaps(a, b);
      case CompareOp::gt: return a.rank() > b.rank() + kTolerance;
      case CompareOp::lt: return a.rank() < b.rank() - kTolerance;
      case CompareOp::ge: return a.rank() > b.rank() + kTolerance || same_membership(a, b);
      case CompareOp::le: return a.rank() < b.rank() - kTolerance || same_membership(a, b);
    }
    return false;
  }

  FuzzySet outcome(const Outcome& o) const {
    if (o.kind == Outcome::Kind::set) return resolve(o.set, L);
    const FuzzySet* best = &value(o.refs[0]);
    for (const auto& r : o.refs) {
      const FuzzySet& v = value(r);
      if (o.kind == Outcome::Kind::min && v.rank() < best->rank()) best = &v;
      if (o.kind == Outcome::Kind::max && v.rank() > best->rank()) best = &v;
    }
    return *best;
  }

  // Index of the first matching arm, otherwise-index, or -1.
  long first_match(const CasesExpr& e) const {
    for (std::size_t i = 0; i < e.cases.size(); ++i) {
      if (holds(e.cases[i].condition)) return static_cast<long>(i);
    }
    return e.otherwise ? static_cast<long>(e.cases.size()) : -1;
  }
};

// Random cases expressions over slots A, B, C with literals drawn from a pool.
class CasesGen {
 public:
  explicit CasesGen(std::uint64_t seed) : rng_(seed) {}

  std::string cases(std::size_t slots, bool otherwise) {
    std::string out = "cases {";
    const std::size_t arms = 1 + pick(6);
    for (std::size_t i = 0; i < arms; ++i) {
      out += (i ? "; " : " ") + condition(slots, 2) + " -> " + outcome(slots);
    }
    if (otherwise) out += "; otherwise -> " + outcome(slots);
    return out + " }";
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::string slot(std::size_t n) { return std::string(1, static_cast<char>('A' + pick(n))); }
  std::string set() {
    static const std::vector<std::string> pool = {"zero", "very_low", "low", "med", "high", "very_high", "certain",
                                                  "point(0.42)", "triangle(0.6, 0.7, 0.8)"};
    return pool[pick(pool.size())];
  }
  std::string condition(std::size_t n, int depth) {
    if (depth == 0 || pick(2) == 0) {
      static const char* ops[] = {"is", "contains", "overlaps", "gt", "lt", "ge", "le"};
      return slot(n) + " " + ops[pick(7)] + " " + (pick(4) == 0 ? slot(n) : set());
    }
    return "(" + condition(n, depth - 1) + (pick(2) ? " and " : " or ") + condition(n, depth - 1) + ")";
  }
  std::string outcome(std::size_t n) {
    switch (pick(4)) {
      case 0: return slot(n);
      case 1: return std::string(pick(2) ? "min(" : "max(") + slot(n) + ", " + slot(n) + ")";
      default: return set();
    }
  }

  testing::Rng rng_;
};

template <typename F>
void each_combination(std::size_t n, std::size_t base, F f) {
  std::vector<std::size_t> digit(n, 0);
  for (;;) {
    f(digit);
    std::size_t k = n;
    while (k > 0 && ++digit[k - 1] == base) digit[--k] = 0;
    if (k == 0) return;
  }
}

}  // namespace

TEST_CASE("coverage: assigned leaves give no findings") {
  auto c = compile(load_document(read_corpus("simple_step.yaml")), L);
  CHECK(check_assignment_coverage(c.program).empty());
}

TEST_CASE("coverage: unassigned leaf reports the path") {
  auto c = compile(load_document(R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [C1], certus: C0 is C1}
  - {id: C1, kind: claim, text: b, children: [E1], certus: C1 is E1}
  - {id: E1, kind: evidence, text: e}
)doc"),
                   L);
  auto f = check_assignment_coverage(c.program);
  REQUIRE(f.size() == 1);
  CHECK(f[0].code == "COV001");
  CHECK(f[0].node == "E1");
  CHECK(f[0].witness == std::vector<std::string>{"C0", "C1", "E1"});
}

TEST_CASE("coverage: shorting warns and hides what is below") {
  auto c = compile(load_document(R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [C1], certus: C0 is C1}
  - {id: C1, kind: claim, text: b, children: [E1], certus: C1 is med}
  - {id: E1, kind: evidence, text: e}
)doc"),
                   L);
  auto f = check_assignment_coverage(c.program);
  REQUIRE(f.size() == 1);
  CHECK(f[0].code == "SHORT001");
  CHECK(f[0].severity == Severity::warning);
  CHECK(f[0].node == "C1");

  auto quiet = compile(load_document(R"doc(nodes:
  - {id: C1, kind: claim, text: b, children: [E1], certus: "// certus: allow SHORT001\nC1 is med"}
  - {id: E1, kind: evidence, text: e}
)doc"),
                       L);
  CHECK(check_assignment_coverage(quiet.program).empty());
}

TEST_CASE("coverage: a shared leaf reachable around a short is still required") {
  auto c = compile(load_document(R"doc(nodes:
  - {id: R, kind: claim, text: r, children: [S, T], certus: "cases { S ge T -> S; otherwise -> T }"}
  - {id: S, kind: claim, text: s, children: [E1], certus: S is high}
  - {id: T, kind: claim, text: t, children: [E1], certus: T is E1}
  - {id: E1, kind: evidence, text: e}
)doc"),
                   L);
  auto codes = codes_of(check_assignment_coverage(c.program));
  std::sort(codes.begin(), codes.end());
  CHECK(codes == std::vector<std::string>{"COV001", "SHORT001"});
}

TEST_CASE("coverage: internal node without a rule") {
  auto c = compile(load_document(R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [E1]}
  - {id: E1, kind: evidence, text: e, certus: E1 is high}
)doc"),
                   L);
  CHECK(codes_of(check_assignment_coverage(c.program)) == std::vector<std::string>{"PROP001"});
}

TEST_CASE("totality examples") {
  auto with_default = parse_cases("cases { E1 is high -> high; otherwise -> low }");
  CHECK(check_totality(site_for(with_default, {"E1"}, {false}), ladder_sets(), L).empty());

  auto partial = parse_cases("cases { E1 is high -> high }");
  auto f = check_totality(site_for(partial, {"E1"}, {false}), ladder_sets(), L);
  REQUIRE(f.size() == 1);
  CHECK(f[0].code == "TOT001");
  // Only high itself is a subset of high among the seven sets.
  CHECK(f[0].witness.size() == 6);
  CHECK(f[0].message.find("6 of 7") != std::string::npos);
  CHECK(std::find(f[0].witness.begin(), f[0].witness.end(), "E1=med") != f[0].witness.end());
}

TEST_CASE("totality witnesses are capped at ten plus a count") {
  auto e = parse_cases("cases { A is zero and B is zero -> zero }");
  auto f = check_totality(site_for(e, {"A", "B"}, {false, false}), ladder_sets(), L);
  REQUIRE(f.size() == 1);
  CHECK(f[0].witness.size() == 11);
  CHECK(f[0].witness.back() == "... and 38 more");
}

TEST_CASE("enumeration limit") {
  auto e = parse_cases("cases { A is zero -> zero }");
  auto f = check_totality(site_for(e, {"A", "B", "C"}, {false, false, false}), ladder_sets(), L, 300);
  REQUIRE(f.size() == 1);
  CHECK(f[0].code == "TOT002");
  CHECK(f[0].message.find("otherwise") != std::string::npos);
  CHECK(check_totality(site_for(e, {"A", "B", "C"}, {false, false, false}), ladder_sets(), L, 343)[0].code ==
        "TOT001");
}

TEST_CASE("decision table and totality agree with the brute-force interpreter") {
  CasesGen gen(41);
  std::vector<FuzzySet> vocab = ladder_sets();
  vocab.push_back(FuzzySet::point(0.42));
  vocab.push_back(FuzzySet::triangle(0.6, 0.7, 0.8));
  vocab.push_back(FuzzySet::trapezoid(0.55, 0.65, 0.75, 0.85));
  std::size_t total_flagged = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    const std::string text = gen.cases(n, trial % 5 == 0);
    CAPTURE(text);
    auto expr = parse_cases(text);
    std::vector<std::string> slots;
    for (std::size_t i = 0; i < n; ++i) slots.emplace_back(1, static_cast<char>('A' + i));
    CompiledCases compiled(expr, slots, L);
    auto table = decision_table(compiled, vocab);

    std::size_t uncovered = 0, index = 0;
    each_combination(n, vocab.size(), [&](const std::vector<std::size_t>& digit) {
      std::vector<FuzzySet> values;
      for (auto d : digit) values.push_back(vocab[d]);
      const long expected = Oracle{slots, values}.first_match(expr);
      const long got = table[index] == kNoMatch ? -1 : static_cast<long>(table[index]);
      CHECK(got == expected);
      if (expected < 0) ++uncovered;
      ++index;
    });

    auto f = check_totality(site_for(expr, slots, std::vector<bool>(n, false)), vocab, L);
    if (uncovered == 0) {
      CHECK(f.empty());
    } else {
      ++total_flagged;
      REQUIRE(f.size() == 1);
      CHECK(f[0].code == "TOT001");
      CHECK(f[0].message.find(std::to_string(uncovered) + " of ") != std::string::npos);
    }
  }
  // The generator must produce both outcomes for the comparison to mean anything.
  CHECK(total_flagged > 50);
  CHECK(total_flagged < 390);
}

TEST_CASE("defeater rules agree with a brute-force check") {
  CasesGen gen(43);
  const auto vocab = ladder_sets();
  int seen[3] = {0, 0, 0};
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 3);
    auto expr = parse_cases(gen.cases(n, true));
    std::vector<std::string> slots;
    std::vector<bool> defeater;
    for (std::size_t i = 0; i < n; ++i) {
      slots.emplace_back(1, static_cast<char>('A' + i));
      defeater.push_back((trial >> i) & 1);
    }
    bool d1 = false, d2 = false, d3 = false;
    each_combination(n, 7, [&](const std::vector<std::size_t>& digit) {
      std::vector<FuzzySet> values;
      for (auto d : digit) values.push_back(vocab[d]);
      Oracle o{slots, values};
      const double r = o.outcome(o.first_match(expr) == static_cast<long>(expr.cases.size())
                                     ? *expr.otherwise
                                     : expr.cases[o.first_match(expr)].outcome)
                           .rank();
      for (std::size_t s = 0; s < n; ++s) {
        if (defeater[s] && digit[s] == 6 && r > L.set("low").rank() + 1e-12) d3 = true;
        if (digit[s] == 6) continue;
        auto up = values;
        up[s] = vocab[digit[s] + 1];
        Oracle ou{slots, up};
        const long m = ou.first_match(expr);
        const double r2 =
            ou.outcome(m == static_cast<long>(expr.cases.size()) ? *expr.otherwise : expr.cases[m].outcome).rank();
        if (defeater[s] && r2 > r + 1e-12) d1 = true;
        if (!defeater[s] && r2 < r - 1e-12) d2 = true;
      }
    });
    auto codes = codes_of(check_defeater_rules(site_for(expr, slots, defeater), L,
                                               std::vector<std::string>{"DEF001", "DEF002", "DEF003"}));
    auto has = [&](const char* c) { return std::find(codes.begin(), codes.end(), c) != codes.end(); };
    CHECK(has("DEF001") == d1);
    CHECK(has("DEF002") == d2);
    CHECK(has("DEF003") == d3);
    seen[0] += d1;
    seen[1] += d2;
    seen[2] += d3;
  }
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
  CHECK(seen[2] > 0);
}

TEST_CASE("defeater rule examples") {
  const std::vector<std::string> all{"DEF001", "DEF002", "DEF003"};
  auto bad = parse_cases("cases { D1 is certain -> certain; otherwise -> low }");
  auto f = check_defeater_rules(site_for(bad, {"D1"}, {true}), L, all);
  auto codes = codes_of(f);
  CHECK(codes == std::vector<std::string>{"DEF001", "DEF003"});
  CHECK(f[0].severity == Severity::error);
  CHECK(f[0].witness == std::vector<std::string>{"D1=very_high -> low", "D1=certain -> certain"});

  auto premises_only = parse_cases("cases { E1 ge high -> high; otherwise -> low }");
  CHECK(check_defeater_rules(site_for(premises_only, {"E1"}, {false}), L, all).empty());

  auto opted_out = site_for(bad, {"D1"}, {true});
  opted_out.allowed_rules = {"DEF001", "DEF003"};
  CHECK(check_defeater_rules(opted_out, L, all).empty());

  // Not total over the ladder: the rules are not evaluated.
  auto partial = parse_cases("cases { D1 is certain -> certain }");
  CHECK(check_defeater_rules(site_for(partial, {"D1"}, {true}), L, all).empty());

  auto inverted = parse_cases("cases { E1 ge high -> low; otherwise -> high }");
  auto w = check_defeater_rules(site_for(inverted, {"E1"}, {false}), L, all);
  REQUIRE(w.size() == 1);
  CHECK(w[0].code == "DEF002");
  CHECK(w[0].severity == Severity::warning);
}

TEST_CASE("document vocabulary adds distinct literals") {
  auto c = compile(load_document(read_corpus("custom_sets.yaml")), L);
  auto vocab = document_vocabulary(c.program);
  CHECK(vocab.size() == 9);
  auto plain = compile(load_document(read_corpus("simple_step.yaml")), L);
  CHECK(document_vocabulary(plain.program).size() == 7);
}

TEST_CASE("run_preflight on the shipped corpus") {
  for (const char* name : {"simple_step.yaml", "parameterized_operator.yaml", "acc_fragment.yaml"}) {
    CAPTURE(std::string(name));
    auto report = run_preflight(expand_all(load_document(read_corpus(name)), nullptr, L));
    CHECK(report.passed);
  }
  auto op = run_preflight(load_document(read_corpus("parameterized_operator.yaml")));
  // lowOrHigh lets a low premise beat a very_low one; this is flagged, not rejected.
  CHECK(codes_of(op.findings) == std::vector<std::string>{"DEF002"});
}

TEST_CASE("removing an arm fails the totality check") {
  std::string doc = read_corpus("parameterized_operator.yaml");
  const std::string arm = "      otherwise -> high\n";
  auto at = doc.find(arm);
  REQUIRE(at != std::string::npos);
  doc.erase(at, arm.size());
  // Drop the separator left on the previous arm.
  auto semi = doc.rfind("low;", at);
  doc.erase(semi + 3, 1);
  auto report = run_preflight(load_document(doc));
  CHECK_FALSE(report.passed);
  auto codes = codes_of(report.findings);
  CHECK(std::find(codes.begin(), codes.end(), "TOT001") != codes.end());
}

TEST_CASE("a cycle short-circuits every other check") {
  auto report = run_preflight(load_document(R"doc(nodes:
  - {id: C0, kind: claim, text: a, children: [C1], certus: "nonsense ("}
  - {id: C1, kind: claim, text: b, children: [C0]}
)doc"));
  CHECK_FALSE(report.passed);
  CHECK(codes_of(report.findings) == std::vector<std::string>{"CYC001"});
  CHECK(report.findings[0].witness == std::vector<std::string>{"C0", "C1", "C0"});
}

TEST_CASE("findings are ordered by node then code") {
  auto report = run_preflight(load_document(R"doc(nodes:
  - {id: Z, kind: claim, text: z, children: [B, A], certus: "cases { A is high -> high }"}
  - {id: B, kind: claim, text: b, children: [E1], certus: B is med}
  - {id: A, kind: claim, text: a, children: [E2], certus: "cases { E2 is high -> B }"}
  - {id: E1, kind: evidence, text: e}
  - {id: E2, kind: evidence, text: e}
)doc"));
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& f : report.findings) keys.emplace_back(f.node, f.code);
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK_FALSE(report.passed);
  CHECK(keys == std::vector<std::pair<std::string, std::string>>{
                    {"A", "SCOPE001"}, {"B", "SHORT001"}, {"E2", "COV001"}, {"Z", "TOT001"}});
}

TEST_CASE("rules can be switched off through options") {
  PreflightOptions options;
  options.rules = {};
  auto report = run_preflight(load_document(read_corpus("parameterized_operator.yaml")), L, options);
  CHECK(report.findings.empty());
}
