#include "certus/evaluator.hpp"

#include <deque>
#include <functional>
#include <memory>
#include <set>

#include "certus/compiled_cases.hpp"
#include "certus/printer.hpp"

namespace certus {
namespace {

struct Step {
  FuzzySet value;
  Trace trace;
};

std::string rule_text(const CasesExpr& expr, std::size_t index) {
  if (index == expr.cases.size()) return "otherwise -> " + print(*expr.otherwise);
  return print(expr.cases[index]);
}

/// Evaluates cases over named inputs, snapping off-ladder values when the
/// expression came from a macro.
Step run_cases(const CasesExpr& expr, const std::vector<std::string>& names, const std::vector<FuzzySet>& inputs,
               const Ladder& ladder, const CompiledCases* compiled = nullptr) {
  std::unique_ptr<CompiledCases> owned;
  if (!compiled) {
    owned = std::make_unique<CompiledCases>(expr, names, ladder);
    compiled = owned.get();
  }
  Step step{ladder.entry(0).set, {}};
  std::vector<FuzzySet> values = inputs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    step.trace.inputs.emplace_back(names[i], describe(inputs[i], ladder));
    if (compiled->snaps() && !ladder.name_of(values[i])) {
      auto name = ladder.nearest_canonical(values[i]);
      step.trace.snapped.emplace_back(names[i], std::string(name));
      values[i] = ladder.set(name);
    }
  }
  std::vector<const FuzzySet*> ptrs;
  for (const auto& v : values) ptrs.push_back(&v);
  auto index = compiled->match(ptrs);
  if (!index) {
    std::string combo;
    for (const auto& [id, set] : step.trace.inputs) combo += (combo.empty() ? "" : ", ") + id + "=" + set;
    throw EvalError("no case matches (" + combo + ")");
  }
  step.value = compiled->outcome(*index, ptrs);
  step.trace.rule = rule_text(expr, *index);
  if (*index == compiled->otherwise_index()) {
    step.trace.matched_otherwise = true;
  } else {
    step.trace.matched_case = *index;
  }
  step.trace.macro = expr.origin;
  return step;
}

class Engine {
 public:
  explicit Engine(const Ladder& ladder) : ladder_(ladder) {}

  Step call(const DefinedOperator& op, const std::vector<FuzzySet>& args) {
    Step step{ladder_.entry(0).set, {}};
    if (const auto* cases = std::get_if<CasesExpr>(&op.def.body)) {
      std::vector<std::string> names;
      for (const auto& p : op.def.params) names.push_back(p.name);
      auto& compiled = cache_[&op];
      if (!compiled) compiled = std::make_unique<CompiledCases>(*cases, names, ladder_);
      step = run_cases(*cases, names, args, ladder_, compiled.get());
    } else if (const auto* inner = std::get_if<OperatorCall>(&op.def.body)) {
      if (!op.callee) throw EvalError("operator '" + op.def.name + "' calls unresolved '" + inner->name + "'");
      if (++depth_ > 256) throw EvalError("operator call depth exceeded at '" + op.def.name + "'");
      std::vector<FuzzySet> forwarded;
      for (const auto& a : inner->args) {
        for (std::size_t i = 0; i < op.def.params.size(); ++i) {
          if (op.def.params[i].name == a.id) forwarded.push_back(args.at(i));
        }
      }
      step = call(*op.callee, forwarded);
      --depth_;
    } else {
      throw EvalError("operator '" + op.def.name + "' still contains an unexpanded macro");
    }
    step.trace.operators.insert(step.trace.operators.begin(), op.def.name);
    return step;
  }

 private:
  const Ladder& ladder_;
  std::map<const DefinedOperator*, std::unique_ptr<CompiledCases>> cache_;
  int depth_ = 0;
};

bool is_assignment(const BoundNode& node) {
  return node.source.annotation && std::holds_alternative<Assignment>(*node.source.annotation);
}

}  // namespace

std::string_view to_string(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::assignment: return "assignment";
    case Mechanism::shorting: return "shorting";
    case Mechanism::direct: return "direct";
    case Mechanism::cases: return "cases";
    case Mechanism::operator_call: return "operator";
    case Mechanism::macro_expanded: return "macro-expanded";
  }
  return "assignment";
}

CaseMatch evaluate_cases(const CasesExpr& expr, const Environment& env, const Ladder& ladder) {
  std::vector<std::string> names;
  std::vector<FuzzySet> values;
  for (const auto& [id, set] : env) {
    names.push_back(id);
    values.push_back(set);
  }
  Step step = run_cases(expr, names, values, ladder);
  return {step.value, step.trace.matched_case, step.trace.snapped};
}

FuzzySet apply_operator(const DefinedOperator& op, std::span<const std::string> args, const Environment& env,
                        const Ladder& ladder) {
  if (args.size() != op.def.params.size()) {
    throw EvalError("operator '" + op.def.name + "' called with " + std::to_string(args.size()) + " argument(s)");
  }
  std::vector<FuzzySet> values;
  for (const auto& a : args) {
    auto it = env.find(a);
    if (it == env.end()) throw EvalError("no value for argument '" + a + "'");
    values.push_back(it->second);
  }
  return Engine(ladder).call(op, values).value;
}

Assessment assess(const Program& program) {
  const ArgumentGraph& graph = *program.graph;
  const Ladder& ladder = program.ladder;
  Assessment out;
  out.ladder = ladder;

  // Nodes reachable from a root without passing below an assignment.
  std::set<std::string, std::less<>> live;
  std::deque<std::string> frontier;
  for (const auto& r : graph.roots()) {
    live.insert(r);
    frontier.push_back(r);
  }
  while (!frontier.empty()) {
    auto id = std::move(frontier.front());
    frontier.pop_front();
    if (is_assignment(program.node(id))) continue;
    for (const auto& c : graph.child_ids(id)) {
      if (live.insert(c).second) frontier.push_back(c);
    }
  }

  // Roots-first order and children-first evaluation order.
  std::vector<std::string> postorder;
  std::set<std::string, std::less<>> visited;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    if (!visited.insert(id).second) return;
    out.order.push_back(id);
    if (!is_assignment(program.node(id))) {
      for (const auto& c : graph.child_ids(id)) visit(c);
    }
    postorder.push_back(id);
  };
  for (const auto& r : graph.roots()) visit(r);

  Engine engine(ladder);
  for (const auto& id : postorder) {
    const BoundNode& node = program.node(id);
    const bool leaf = graph.is_leaf(id);
    if (!node.source.annotation) {
      throw EvalError(leaf ? "leaf '" + id + "' has no confidence assignment"
                           : "node '" + id + "' has no propagation annotation");
    }
    auto child_value = [&](const std::string& child) -> const FuzzySet& {
      auto it = out.results.find(child);
      if (it == out.results.end()) throw EvalError("missing value for '" + child + "' while evaluating '" + id + "'");
      return it->second;
    };

    Step step{ladder.entry(0).set, {}};
    const Annotation& annotation = *node.source.annotation;
    if (const auto* a = std::get_if<Assignment>(&annotation)) {
      step.value = resolve(a->value, ladder);
      step.trace.mechanism = leaf ? Mechanism::assignment : Mechanism::shorting;
      step.trace.rule = print(annotation);
    } else if (const auto* d = std::get_if<DirectProp>(&annotation)) {
      step.value = child_value(d->source.id);
      step.trace.mechanism = Mechanism::direct;
      step.trace.rule = print(annotation);
      step.trace.inputs.emplace_back(d->source.id, describe(step.value, ladder));
    } else if (const auto* cases = std::get_if<CasesExpr>(&annotation)) {
      auto kids = graph.child_ids(id);
      std::vector<std::string> names(kids.begin(), kids.end());
      std::vector<FuzzySet> values;
      for (const auto& k : names) values.push_back(child_value(k));
      step = run_cases(*cases, names, values, ladder);
      step.trace.mechanism = cases->origin ? Mechanism::macro_expanded : Mechanism::cases;
    } else if (const auto* call = std::get_if<OperatorCall>(&annotation)) {
      if (!node.callee) throw EvalError("operator call at '" + id + "' is unbound");
      std::vector<FuzzySet> values;
      for (const auto& a : call->args) values.push_back(child_value(a.id));
      step = engine.call(*node.callee, values);
      step.trace.mechanism = Mechanism::operator_call;
      step.trace.inputs.clear();
      for (std::size_t i = 0; i < call->args.size(); ++i) {
        step.trace.inputs.emplace_back(call->args[i].id, describe(values[i], ladder));
      }
    } else {
      throw EvalError("node '" + id + "' still carries an unexpanded macro");
    }
    out.results.emplace(id, std::move(step.value));
    out.traces.emplace(id, std::move(step.trace));
  }

  // Record the shorting node responsible for each unevaluated node.
  for (const auto& node : graph.nodes()) {
    if (live.contains(node.id)) continue;
    std::deque<std::string> up{node.id};
    std::set<std::string> seen{node.id};
    while (!up.empty()) {
      auto cur = std::move(up.front());
      up.pop_front();
      for (const auto& p : graph.parent_ids(cur)) {
        if (live.contains(p) && is_assignment(program.node(p))) {
          out.shorted_at.emplace(node.id, p);
          up.clear();
          break;
        }
        if (seen.insert(p).second) up.push_back(p);
      }
    }
  }
  return out;
}

std::string explain(const Assessment& assessment, std::string_view id) {
  if (!assessment.results.contains(id)) {
    auto s = assessment.shorted_at.find(id);
    if (s != assessment.shorted_at.end()) {
      throw LookupError("node '" + std::string(id) + "' not evaluated (shorted at " + s->second + ")");
    }
    throw LookupError("node '" + std::string(id) + "' has no assessment result");
  }

  std::string out;
  std::function<void(std::string_view, int)> render = [&](std::string_view node, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const auto& trace = assessment.traces.find(node)->second;
    out += pad + std::string(node) + " = " + describe(assessment.results.find(node)->second, assessment.ladder) + "\n";
    std::string how = "via " + std::string(to_string(trace.mechanism));
    if (!trace.operators.empty()) {
      std::string chain;
      for (const auto& o : trace.operators) chain += (chain.empty() ? "" : " -> ") + o;
      how += " " + chain;
    }
    if (trace.macro) how += " (expanded #" + trace.macro->macro + ")";
    if (trace.matched_case) how += ", case " + std::to_string(*trace.matched_case + 1);
    if (trace.matched_otherwise) how += ", otherwise";
    out += pad + "  " + how + ": " + trace.rule + "\n";
    if (trace.mechanism == Mechanism::shorting) out += pad + "  (children not evaluated)\n";
    for (const auto& [sid, name] : trace.snapped) out += pad + "  snapped " + sid + " to " + name + "\n";
    for (const auto& [input, value] : trace.inputs) {
      if (assessment.results.contains(input)) render(input, depth + 1);
    }
  };
  render(id, 0);
  return out;
}

}  // namespace certus
