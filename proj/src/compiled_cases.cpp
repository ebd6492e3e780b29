#include "certus/compiled_cases.hpp"

#include <algorithm>

namespace certus {

bool evaluate_comparison(const FuzzySet& left, CompareOp op, const FuzzySet& right) {
  switch (op) {
    case CompareOp::is:
      return subset_of(left, right);
    case CompareOp::contains:
      return contains_set(left, right);
    case CompareOp::overlaps:
      return overlaps(left, right);
    case CompareOp::gt:
      return compare(left, right, Order::greater);
    case CompareOp::lt:
      return compare(left, right, Order::less);
    case CompareOp::ge:
      return compare(left, right, Order::greater_equal);
    case CompareOp::le:
      return compare(left, right, Order::less_equal);
  }
  return false;
}

CompiledCases::CompiledCases(const CasesExpr& expr, std::vector<std::string> slots, const Ladder& ladder)
    : slots_(std::move(slots)), snaps_(expr.origin.has_value()) {
  for (const auto& c : expr.cases) {
    Arm arm{compile(c.condition, ladder), compile(c.outcome, ladder), false};
    auto fixed_atom = [](const Cond& k) { return k.kind == Condition::Kind::atom && k.atom.right_set; };
    arm.product = fixed_atom(arm.condition) ||
                  (arm.condition.kind == Condition::Kind::conjunction &&
                   std::all_of(arm.condition.operands.begin(), arm.condition.operands.end(), fixed_atom));
    cases_.push_back(std::move(arm));
  }
  if (expr.otherwise) otherwise_ = compile(*expr.otherwise, ladder);
}

std::size_t CompiledCases::slot_of(const Ref& ref) const {
  auto it = std::find(slots_.begin(), slots_.end(), ref.id);
  if (it == slots_.end()) throw EvalError("reference '" + ref.id + "' is not in scope");
  return static_cast<std::size_t>(it - slots_.begin());
}

std::size_t CompiledCases::intern(const FuzzySet& set) {
  auto it = std::find(constants_.begin(), constants_.end(), set);
  if (it != constants_.end()) return static_cast<std::size_t>(it - constants_.begin());
  constants_.push_back(set);
  return constants_.size() - 1;
}

CompiledCases::Cond CompiledCases::compile(const Condition& c, const Ladder& ladder) {
  Cond out;
  out.kind = c.kind;
  if (c.kind == Condition::Kind::atom) {
    out.atom.left = slot_of(c.atom.left);
    out.atom.op = c.atom.op;
    if (const auto* set = std::get_if<SetExpr>(&c.atom.right)) {
      out.atom.right_set = resolve(*set, ladder);
      out.atom.constant = intern(*out.atom.right_set);
    } else {
      out.atom.right_slot = slot_of(std::get<Ref>(c.atom.right));
    }
    return out;
  }
  for (const auto& sub : c.operands) out.operands.push_back(compile(sub, ladder));
  return out;
}

CompiledCases::Result CompiledCases::compile(const Outcome& o, const Ladder& ladder) const {
  Result out;
  out.kind = o.kind;
  if (o.kind == Outcome::Kind::set) out.set = resolve(o.set, ladder);
  for (const auto& r : o.refs) out.slots.push_back(slot_of(r));
  return out;
}

bool CompiledCases::holds(const Atom& a, const FuzzySet& left, const FuzzySet& right) {
  return evaluate_comparison(left, a.op, right);
}

bool CompiledCases::holds(const Cond& c, std::span<const FuzzySet* const> values) {
  switch (c.kind) {
    case Condition::Kind::atom:
      return holds(c.atom, *values[c.atom.left], c.atom.right_set ? *c.atom.right_set : *values[*c.atom.right_slot]);
    case Condition::Kind::conjunction:
      return std::all_of(c.operands.begin(), c.operands.end(), [&](const Cond& s) { return holds(s, values); });
    case Condition::Kind::disjunction:
      return std::any_of(c.operands.begin(), c.operands.end(), [&](const Cond& s) { return holds(s, values); });
  }
  return false;
}

bool CompiledCases::condition_holds(std::size_t index, std::span<const FuzzySet* const> values) const {
  return holds(cases_.at(index).condition, values);
}

std::optional<std::size_t> CompiledCases::match(std::span<const FuzzySet* const> values) const {
  for (std::size_t i = 0; i < cases_.size(); ++i) {
    if (holds(cases_[i].condition, values)) return i;
  }
  if (otherwise_) return otherwise_index();
  return std::nullopt;
}

FuzzySet CompiledCases::outcome(std::size_t index, std::span<const FuzzySet* const> values) const {
  const Result& r = index == otherwise_index() ? otherwise_.value() : cases_.at(index).outcome;
  switch (r.kind) {
    case Outcome::Kind::set:
      return *r.set;
    case Outcome::Kind::ref:
      return *values[r.slots.front()];
    case Outcome::Kind::min:
    case Outcome::Kind::max: {
      std::vector<FuzzySet> inputs;
      for (auto s : r.slots) inputs.push_back(*values[s]);
      return extremum(inputs, r.kind == Outcome::Kind::min ? Extremum::min : Extremum::max);
    }
  }
  throw EvalError("unreachable outcome kind");
}

bool CompiledCases::slot_accepts(std::size_t index, std::size_t slot, const FuzzySet& value) const {
  const Cond& c = cases_.at(index).condition;
  auto check = [&](const Cond& k) { return k.atom.left != slot || holds(k.atom, value, *k.atom.right_set); };
  if (c.kind == Condition::Kind::atom) return check(c);
  return std::all_of(c.operands.begin(), c.operands.end(), check);
}

std::vector<CompiledCases::SlotTest> CompiledCases::product_tests(std::size_t index) const {
  const Cond& c = cases_.at(index).condition;
  std::vector<SlotTest> out;
  auto add = [&](const Cond& k) { out.push_back({k.atom.left, k.atom.op, k.atom.constant}); };
  if (c.kind == Condition::Kind::atom) {
    add(c);
  } else {
    for (const auto& k : c.operands) add(k);
  }
  return out;
}

}  // namespace certus
