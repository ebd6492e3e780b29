#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "certus/ast.hpp"

namespace certus {

/// A cases expression with set literals resolved and references turned into
/// slot indices, so it can be evaluated many times against value vectors.
///
/// Values are passed as one pointer per slot, in slot order.
class CompiledCases {
 public:
  /// Throws EvalError if the expression references a name outside `slots`.
  CompiledCases(const CasesExpr& expr, std::vector<std::string> slots, const Ladder& ladder);

  const std::vector<std::string>& slots() const { return slots_; }
  std::size_t case_count() const { return cases_.size(); }
  bool has_otherwise() const { return otherwise_.has_value(); }
  /// Index used to report a match of the `otherwise` arm.
  std::size_t otherwise_index() const { return cases_.size(); }
  /// Macro-expanded expressions enumerate the ladder only; inputs are snapped to it.
  bool snaps() const { return snaps_; }

  bool condition_holds(std::size_t index, std::span<const FuzzySet* const> values) const;
  /// First case whose condition holds, else otherwise_index() if present, else nullopt.
  std::optional<std::size_t> match(std::span<const FuzzySet* const> values) const;
  FuzzySet outcome(std::size_t index, std::span<const FuzzySet* const> values) const;

  /// True when the condition is a conjunction of comparisons against fixed
  /// sets, making the set of matching inputs a product of per-slot sets.
  bool is_product_form(std::size_t index) const { return cases_[index].product; }
  /// For a product-form case: does `value` in `slot` satisfy every atom on that slot.
  bool slot_accepts(std::size_t index, std::size_t slot, const FuzzySet& value) const;

  /// Comparison of a slot against a fixed set. Equal sets share one constant id,
  /// so callers can cache results per (op, constant, value).
  struct SlotTest {
    std::size_t slot = 0;
    CompareOp op = CompareOp::is;
    std::size_t constant = 0;
  };
  /// Atoms of a product-form case.
  std::vector<SlotTest> product_tests(std::size_t index) const;
  const FuzzySet& constant(std::size_t id) const { return constants_.at(id); }
  std::size_t constant_count() const { return constants_.size(); }

 private:
  struct Atom {
    std::size_t left = 0;
    CompareOp op = CompareOp::is;
    std::optional<std::size_t> right_slot;
    std::optional<FuzzySet> right_set;
    std::size_t constant = 0;
  };
  struct Cond {
    Condition::Kind kind = Condition::Kind::atom;
    Atom atom;
    std::vector<Cond> operands;
  };
  struct Result {
    Outcome::Kind kind = Outcome::Kind::set;
    std::optional<FuzzySet> set;
    std::vector<std::size_t> slots;
  };
  struct Arm {
    Cond condition;
    Result outcome;
    bool product = false;
  };

  std::size_t slot_of(const Ref& ref) const;
  Cond compile(const Condition& c, const Ladder& ladder);
  Result compile(const Outcome& o, const Ladder& ladder) const;
  std::size_t intern(const FuzzySet& set);
  static bool holds(const Cond& c, std::span<const FuzzySet* const> values);
  static bool holds(const Atom& a, const FuzzySet& left, const FuzzySet& right);

  std::vector<std::string> slots_;
  std::vector<Arm> cases_;
  std::optional<Result> otherwise_;
  std::vector<FuzzySet> constants_;
  bool snaps_ = false;
};

bool evaluate_comparison(const FuzzySet& left, CompareOp op, const FuzzySet& right);

}  // namespace certus
