#include "certus/printer.hpp"

#include "certus/format.hpp"

namespace certus {
namespace {

std::string join_refs(const std::vector<Ref>& refs) {
  std::string out;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (i > 0) out += ", ";
    out += refs[i].id;
  }
  return out;
}

std::string print_allowed(const std::vector<std::string>& rules) {
  if (rules.empty()) return "";
  std::string out = "// certus: allow";
  for (const auto& r : rules) out += " " + r;
  return out + "\n";
}

std::string print_body(const OperatorBody& body) {
  return std::visit([](const auto& b) { return print(Annotation{b}); }, body);
}

}  // namespace

std::string print(const SetExpr& set) {
  auto literal = [&](std::string_view head) {
    std::string out(head);
    out += "(";
    for (std::size_t i = 0; i < set.args.size(); ++i) {
      if (i > 0) out += ", ";
      out += format_number(set.args[i]);
    }
    return out + ")";
  };
  switch (set.kind) {
    case SetExpr::Kind::named:
      return set.name;
    case SetExpr::Kind::point:
      return literal("point");
    case SetExpr::Kind::triangle:
      return literal("triangle");
    case SetExpr::Kind::trapezoid:
      return literal("trapezoid");
  }
  return set.name;
}

std::string print(CompareOp op) {
  switch (op) {
    case CompareOp::is: return "is";
    case CompareOp::contains: return "contains";
    case CompareOp::overlaps: return "overlaps";
    case CompareOp::gt: return ">";
    case CompareOp::lt: return "<";
    case CompareOp::ge: return ">=";
    case CompareOp::le: return "<=";
  }
  return "is";
}

std::string print(const Condition& condition) {
  if (condition.kind == Condition::Kind::atom) {
    const auto& a = condition.atom;
    std::string right = std::holds_alternative<SetExpr>(a.right) ? print(std::get<SetExpr>(a.right))
                                                                  : std::get<Ref>(a.right).id;
    return a.left.id + " " + print(a.op) + " " + right;
  }
  const bool conj = condition.kind == Condition::Kind::conjunction;
  std::string out;
  for (std::size_t i = 0; i < condition.operands.size(); ++i) {
    if (i > 0) out += conj ? " and " : " or ";
    const auto& sub = condition.operands[i];
    // `and` binds tighter, so only a disjunction inside a conjunction needs parentheses.
    if (conj && sub.kind == Condition::Kind::disjunction) {
      out += "(" + print(sub) + ")";
    } else {
      out += print(sub);
    }
  }
  return out;
}

std::string print(const Outcome& outcome) {
  switch (outcome.kind) {
    case Outcome::Kind::set:
      return print(outcome.set);
    case Outcome::Kind::ref:
      return outcome.refs.front().id;
    case Outcome::Kind::min:
      return "min(" + join_refs(outcome.refs) + ")";
    case Outcome::Kind::max:
      return "max(" + join_refs(outcome.refs) + ")";
  }
  return "";
}

std::string print(const Case& arm) { return print(arm.condition) + " -> " + print(arm.outcome); }

std::string print(const CasesExpr& expr) {
  std::string out;
  if (expr.origin) {
    out += "// certus: expanded #" + expr.origin->macro;
    if (!expr.origin->provider.empty()) out += " by " + expr.origin->provider;
    out += "\n";
  }
  out += "cases {\n";
  for (std::size_t i = 0; i < expr.cases.size(); ++i) {
    out += "  " + print(expr.cases[i]);
    out += (i + 1 < expr.cases.size() || expr.otherwise) ? ";\n" : "\n";
  }
  if (expr.otherwise) out += "  otherwise -> " + print(*expr.otherwise) + "\n";
  return out + "}";
}

std::string print(const Annotation& annotation) {
  return std::visit(
      [](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Assignment>) {
          return a.target + " is " + print(a.value);
        } else if constexpr (std::is_same_v<T, DirectProp>) {
          return a.target + " is " + a.source.id;
        } else if constexpr (std::is_same_v<T, CasesExpr>) {
          return print(a);
        } else if constexpr (std::is_same_v<T, OperatorCall>) {
          return a.name + "(" + join_refs(a.args) + ")";
        } else {
          std::string out = "#" + a.name;
          if (a.has_parens) out += "(" + join_refs(a.args) + ")";
          return out;
        }
      },
      annotation);
}

std::string print(const OperatorDef& def) {
  std::string out = "with " + def.name + "(";
  for (std::size_t i = 0; i < def.params.size(); ++i) {
    if (i > 0) out += ", ";
    out += def.params[i].name + ": " + std::string(to_string(def.params[i].type));
  }
  const auto body = print_body(def.body);
  // Keep the expansion pragma on its own line ahead of `cases`.
  const bool pragma_first = body.starts_with("//");
  return out + ") as" + (pragma_first ? "\n" : " ") + body;
}

std::string print(const NodeSource& source) {
  std::string out = print_allowed(source.allowed_rules);
  for (const auto& def : source.definitions) out += print(def) + "\n";
  if (source.annotation) out += print(*source.annotation) + "\n";
  return out;
}

std::string print(const DefinitionBlock& block) {
  std::string out = print_allowed(block.allowed_rules);
  for (const auto& def : block.definitions) out += print(def) + "\n";
  return out;
}

}  // namespace certus
