#include "certus/preflight.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace certus {
namespace {

constexpr double kRankTolerance = 1e-12;
constexpr std::size_t kWitnessLimit = 10;

bool is_assignment(const BoundNode& node) {
  return node.source.annotation && std::holds_alternative<Assignment>(*node.source.annotation);
}

bool allowed(std::span<const std::string> list, std::string_view code) {
  return std::find(list.begin(), list.end(), code) != list.end();
}

/// Number of combinations, or nullopt once it passes `limit`.
std::optional<std::size_t> combinations(std::size_t base, std::size_t digits, std::size_t limit) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < digits; ++i) {
    if (base != 0 && total > limit / base) return std::nullopt;
    total *= base;
  }
  return total <= limit ? std::optional(total) : std::nullopt;
}

std::vector<std::size_t> decode(std::size_t index, std::size_t base, std::size_t digits) {
  std::vector<std::size_t> out(digits);
  for (std::size_t i = digits; i-- > 0;) {
    out[i] = index % base;
    index /= base;
  }
  return out;
}

std::string render_combo(const CheckSite& site, const std::vector<std::size_t>& digits,
                         std::span<const FuzzySet> vocabulary, const Ladder& ladder) {
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) out += ", ";
    out += site.slots[i] + "=" + describe(vocabulary[digits[i]], ladder);
  }
  return out;
}

void collect_literals(const Outcome& o, std::vector<SetExpr>& out) {
  if (o.kind == Outcome::Kind::set) out.push_back(o.set);
}

void collect_literals(const CasesExpr& expr, std::vector<SetExpr>& out) {
  for (const auto& c : expr.cases) collect_literals(c.outcome, out);
  if (expr.otherwise) collect_literals(*expr.otherwise, out);
}

}  // namespace

std::vector<std::uint32_t> decision_table(const CompiledCases& cases, std::span<const FuzzySet> vocabulary) {
  const std::size_t n = cases.slots().size();
  const std::size_t base = vocabulary.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= base;
  std::vector<std::uint32_t> table(total, kNoMatch);
  std::size_t remaining = total;

  // Comparison results per (constant, op), per vocabulary value: -1 unknown.
  constexpr std::size_t kOps = 7;
  std::vector<std::vector<signed char>> memo(cases.constant_count() * kOps, std::vector<signed char>(base, -1));
  auto test = [&](const CompiledCases::SlotTest& t, std::size_t v) {
    auto& cell = memo[t.constant * kOps + static_cast<std::size_t>(t.op)][v];
    if (cell < 0) cell = evaluate_comparison(vocabulary[v], t.op, cases.constant(t.constant)) ? 1 : 0;
    return cell == 1;
  };

  std::vector<std::size_t> stride(n, 1);
  for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * base;

  for (std::size_t arm = 0; arm < cases.case_count() && remaining > 0; ++arm) {
    const auto label = static_cast<std::uint32_t>(arm);
    if (cases.is_product_form(arm)) {
      std::vector<std::vector<std::size_t>> accepted(n);
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t v = 0; v < base; ++v) accepted[s].push_back(v);
      }
      for (const auto& t : cases.product_tests(arm)) {
        auto& list = accepted[t.slot];
        list.erase(std::remove_if(list.begin(), list.end(), [&](std::size_t v) { return !test(t, v); }), list.end());
      }
      if (std::any_of(accepted.begin(), accepted.end(), [](const auto& l) { return l.empty(); })) continue;
      std::vector<std::size_t> pos(n, 0);
      for (;;) {
        std::size_t index = 0;
        for (std::size_t s = 0; s < n; ++s) index += accepted[s][pos[s]] * stride[s];
        if (table[index] == kNoMatch) {
          table[index] = label;
          --remaining;
        }
        std::size_t k = n;
        while (k > 0 && ++pos[k - 1] == accepted[k - 1].size()) pos[--k] = 0;
        if (k == 0) break;
      }
    } else {
      std::vector<const FuzzySet*> values(n);
      for (std::size_t index = 0; index < total; ++index) {
        if (table[index] != kNoMatch) continue;
        auto digits = decode(index, base, n);
        for (std::size_t s = 0; s < n; ++s) values[s] = &vocabulary[digits[s]];
        if (cases.condition_holds(arm, values)) {
          table[index] = label;
          --remaining;
        }
      }
    }
  }
  if (cases.has_otherwise()) {
    for (auto& cell : table) {
      if (cell == kNoMatch) cell = static_cast<std::uint32_t>(cases.otherwise_index());
    }
  }
  return table;
}

std::vector<FuzzySet> document_vocabulary(const Program& program) {
  std::vector<SetExpr> literals;
  for (const auto& op : program.operators) {
    if (const auto* cases = std::get_if<CasesExpr>(&op->def.body)) collect_literals(*cases, literals);
  }
  for (const auto& [id, node] : program.nodes) {
    if (!node.source.annotation) continue;
    const auto& a = *node.source.annotation;
    if (const auto* assign = std::get_if<Assignment>(&a)) literals.push_back(assign->value);
    if (const auto* cases = std::get_if<CasesExpr>(&a)) collect_literals(*cases, literals);
  }

  std::vector<FuzzySet> out;
  for (const auto& e : program.ladder.entries()) out.push_back(e.set);
  for (const auto& lit : literals) {
    FuzzySet set = resolve(lit, program.ladder);
    if (std::none_of(out.begin(), out.end(), [&](const FuzzySet& s) { return same_membership(s, set); })) {
      out.push_back(std::move(set));
    }
  }
  return out;
}

std::vector<Finding> check_assignment_coverage(const Program& program) {
  const ArgumentGraph& graph = *program.graph;
  std::vector<Finding> out;
  // An unparseable node is already reported; treat it as a stop so it does not cascade.
  auto stops = [&](const BoundNode& bn) { return is_assignment(bn) || !bn.parsed; };

  std::map<std::string, std::string, std::less<>> via;  // discovered node -> parent on first path
  std::deque<std::string> frontier;
  std::vector<std::string> live;
  for (const auto& r : graph.roots()) {
    via.emplace(r, "");
    frontier.push_back(r);
  }
  while (!frontier.empty()) {
    auto id = std::move(frontier.front());
    frontier.pop_front();
    live.push_back(id);
    if (stops(program.node(id))) continue;
    for (const auto& c : graph.child_ids(id)) {
      if (via.emplace(c, id).second) frontier.push_back(c);
    }
  }

  for (const auto& id : live) {
    const BoundNode& bn = program.node(id);
    if (stops(bn)) continue;
    if (graph.is_leaf(id)) {
      std::vector<std::string> path{id};
      for (std::string p = via[id]; !p.empty(); p = via[p]) path.push_back(p);
      std::reverse(path.begin(), path.end());
      std::string text;
      for (const auto& step : path) text += (text.empty() ? "" : " -> ") + step;
      out.push_back({Severity::error, std::string(codes::coverage), id,
                     "path " + text + " reaches leaf '" + id + "' without any confidence assignment", path});
    } else if (!bn.source.annotation) {
      out.push_back({Severity::error, std::string(codes::no_propagation), id,
                     "node '" + id + "' has children but no annotation saying how their confidence propagates",
                     {}});
    }
  }

  for (const auto& node : graph.nodes()) {
    const BoundNode& bn = program.node(node.id);
    if (graph.is_leaf(node.id) || !is_assignment(bn)) continue;
    if (allowed(bn.source.allowed_rules, codes::shorting)) continue;
    out.push_back({Severity::warning, std::string(codes::shorting), node.id,
                   "assignment on non-leaf '" + node.id + "' shorts evaluation of everything below it", {}});
  }
  return out;
}

std::vector<Finding> check_totality(const CheckSite& site, std::span<const FuzzySet> vocabulary, const Ladder& ladder,
                                    std::size_t max_enumeration) {
  if (site.expr->otherwise) return {};
  CompiledCases compiled(*site.expr, site.slots, ladder);
  std::vector<FuzzySet> ladder_sets;
  if (compiled.snaps()) {
    for (const auto& e : ladder.entries()) ladder_sets.push_back(e.set);
    vocabulary = ladder_sets;
  }
  const std::size_t n = site.slots.size();
  const auto total = combinations(vocabulary.size(), n, max_enumeration);
  if (!total) {
    return {{Severity::error, std::string(codes::enumeration_limit), site.node,
             site.label + ": cannot prove totality; " + std::to_string(n) + " inputs over " +
                 std::to_string(vocabulary.size()) + " possible sets exceed the enumeration limit of " +
                 std::to_string(max_enumeration) + " combinations. Add an 'otherwise' arm or raise --max-enumeration",
             {}}};
  }
  const auto table = decision_table(compiled, vocabulary);
  std::vector<std::string> witness;
  std::size_t uncovered = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i] != kNoMatch) continue;
    if (++uncovered <= kWitnessLimit) witness.push_back(render_combo(site, decode(i, vocabulary.size(), n), vocabulary, ladder));
  }
  if (uncovered == 0) return {};
  if (uncovered > kWitnessLimit) witness.push_back("... and " + std::to_string(uncovered - kWitnessLimit) + " more");
  return {{Severity::error, std::string(codes::totality), site.node,
           site.label + ": cases is not total; " + std::to_string(uncovered) + " of " + std::to_string(*total) +
               " input combinations match no case and there is no 'otherwise'",
           witness}};
}

std::vector<Finding> check_defeater_rules(const CheckSite& site, const Ladder& ladder,
                                          std::span<const std::string> rules, std::size_t max_enumeration) {
  auto enabled = [&](std::string_view code) { return allowed(rules, code) && !allowed(site.allowed_rules, code); };
  const bool d1 = enabled(codes::defeater_monotonicity);
  const bool d2 = enabled(codes::premise_monotonicity);
  const bool d3 = enabled(codes::certain_defeater_cap);
  const bool any_defeater = std::find(site.defeater.begin(), site.defeater.end(), true) != site.defeater.end();
  if (!d2 && !any_defeater) return {};
  if (!d1 && !d2 && !d3) return {};

  const std::size_t n = site.slots.size();
  std::vector<FuzzySet> vocabulary;
  for (const auto& e : ladder.entries()) vocabulary.push_back(e.set);
  const std::size_t base = vocabulary.size();
  if (!combinations(base, n, max_enumeration)) return {};

  CompiledCases compiled(*site.expr, site.slots, ladder);
  const auto table = decision_table(compiled, vocabulary);
  if (std::find(table.begin(), table.end(), kNoMatch) != table.end()) return {};

  std::vector<double> rank(table.size());
  std::vector<std::string> name(table.size());
  std::vector<const FuzzySet*> values(n);
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto digits = decode(i, base, n);
    for (std::size_t s = 0; s < n; ++s) values[s] = &vocabulary[digits[s]];
    FuzzySet out = compiled.outcome(table[i], values);
    rank[i] = out.rank();
    name[i] = describe(out, ladder);
  }

  std::vector<std::size_t> stride(n, 1);
  for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * base;
  const double cap = ladder.set("low").rank();

  struct Violation {
    std::size_t count = 0;
    std::string message;
    std::vector<std::string> witness;
  };
  Violation v1, v2, v3;
  auto line = [&](std::size_t index) {
    return render_combo(site, decode(index, base, n), vocabulary, ladder) + " -> " + name[index];
  };

  for (std::size_t i = 0; i < table.size(); ++i) {
    auto digits = decode(i, base, n);
    for (std::size_t s = 0; s < n; ++s) {
      if (digits[s] + 1 >= base) continue;
      const std::size_t j = i + stride[s];
      const std::string step = site.slots[s] + " from " + ladder.entry(digits[s]).name + " to " +
                               ladder.entry(digits[s] + 1).name;
      if (site.defeater[s] && d1 && rank[j] > rank[i] + kRankTolerance) {
        if (v1.count++ == 0) {
          v1.message = "raising defeater " + step + " raises the result from " + name[i] + " to " + name[j];
          v1.witness = {line(i), line(j)};
        }
      }
      if (!site.defeater[s] && d2 && rank[j] < rank[i] - kRankTolerance) {
        if (v2.count++ == 0) {
          v2.message = "raising premise " + step + " lowers the result from " + name[i] + " to " + name[j];
          v2.witness = {line(i), line(j)};
        }
      }
    }
    if (d3 && rank[i] > cap + kRankTolerance) {
      for (std::size_t s = 0; s < n; ++s) {
        if (site.defeater[s] && digits[s] + 1 == base) {
          if (v3.count++ == 0) {
            v3.message = "defeater " + site.slots[s] + " is certain but the result " + name[i] + " exceeds low";
            v3.witness = {line(i)};
          }
          break;
        }
      }
    }
  }

  std::vector<Finding> out;
  auto emit = [&](Violation& v, Severity severity, std::string_view code, std::string_view rule) {
    if (v.count == 0) return;
    std::string more = v.count > 1 ? " (" + std::to_string(v.count) + " violations in total)" : "";
    out.push_back({severity, std::string(code), site.node,
                   site.label + ": " + std::string(rule) + ": " + v.message + more, std::move(v.witness)});
  };
  emit(v1, Severity::error, codes::defeater_monotonicity, "defeater anti-monotonicity");
  emit(v2, Severity::warning, codes::premise_monotonicity, "premise monotonicity");
  emit(v3, Severity::error, codes::certain_defeater_cap, "certain-defeater cap");
  return out;
}

std::vector<CheckSite> cases_sites(const Program& program) {
  const ArgumentGraph& graph = *program.graph;
  std::vector<CheckSite> out;
  for (const auto& op : program.operators) {
    const auto* cases = std::get_if<CasesExpr>(&op->def.body);
    if (!cases) continue;
    CheckSite site{op->site, "operator '" + op->def.name + "'" + (op->site.empty() ? "" : " at '" + op->site + "'"),
                   cases, {}, {}, op->allowed_rules};
    for (const auto& p : op->def.params) {
      site.slots.push_back(p.name);
      site.defeater.push_back(p.type == ParamType::defeater);
    }
    out.push_back(std::move(site));
  }
  for (const auto& [id, bn] : program.nodes) {
    if (!bn.parsed || !bn.bound || !bn.source.annotation) continue;
    const auto* cases = std::get_if<CasesExpr>(&*bn.source.annotation);
    if (!cases) continue;
    CheckSite site{id, "node '" + id + "'", cases, {}, {}, bn.source.allowed_rules};
    for (const auto& c : graph.child_ids(id)) {
      site.slots.push_back(c);
      site.defeater.push_back(graph.node(c).kind == NodeKind::defeater);
    }
    out.push_back(std::move(site));
  }
  return out;
}

PreflightResult preflight(const ArgumentGraph& graph, const Ladder& ladder, const PreflightOptions& options) {
  PreflightResult result;
  auto& findings = result.report.findings;
  if (auto cycle = check_acyclic(graph)) {
    std::string text;
    for (const auto& id : *cycle) text += (text.empty() ? "" : " -> ") + id;
    findings.push_back({Severity::error, std::string(codes::cycle), cycle->front(),
                        "argument graph has a cycle: " + text, *cycle});
    result.report.passed = false;
    return result;
  }

  Compilation compilation = compile(graph, ladder);
  findings = std::move(compilation.findings);
  const Program& program = compilation.program;

  auto coverage = check_assignment_coverage(program);
  findings.insert(findings.end(), coverage.begin(), coverage.end());

  const auto vocabulary = document_vocabulary(program);
  for (const auto& site : cases_sites(program)) {
    auto total = check_totality(site, vocabulary, ladder, options.max_enumeration);
    findings.insert(findings.end(), total.begin(), total.end());
    auto rules = check_defeater_rules(site, ladder, options.rules, options.max_enumeration);
    findings.insert(findings.end(), rules.begin(), rules.end());
  }

  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.node, a.code) < std::tie(b.node, b.code);
  });
  result.report.passed = std::none_of(findings.begin(), findings.end(),
                                      [](const Finding& f) { return f.severity == Severity::error; });
  result.program = std::move(compilation.program);
  return result;
}

PreflightReport run_preflight(const ArgumentGraph& graph, const Ladder& ladder, const PreflightOptions& options) {
  return preflight(graph, ladder, options).report;
}

}  // namespace certus
