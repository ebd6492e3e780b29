#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "certus/binder.hpp"

namespace certus {

enum class Mechanism { assignment, shorting, direct, cases, operator_call, macro_expanded };

std::string_view to_string(Mechanism mechanism);

/// How a node's result was obtained; enough to redo the step by hand.
struct Trace {
  Mechanism mechanism = Mechanism::assignment;
  std::optional<std::size_t> matched_case;  // position of the matched arm; empty for `otherwise`
  bool matched_otherwise = false;
  std::string rule;  // source text of the assignment or matched arm
  std::vector<std::pair<std::string, std::string>> inputs;  // consumed node values, in order
  std::vector<std::string> operators;                        // operator call chain, outermost first
  std::optional<MacroOrigin> macro;
  std::vector<std::pair<std::string, std::string>> snapped;  // input id -> ladder name it was snapped to
};

struct Assessment {
  std::map<std::string, FuzzySet, std::less<>> results;
  std::map<std::string, Trace, std::less<>> traces;
  /// Nodes below a shorting assignment on every path, mapped to that assignment's node.
  std::map<std::string, std::string, std::less<>> shorted_at;
  /// Evaluated nodes, roots first.
  std::vector<std::string> order;
  Ladder ladder = Ladder::standard();
};

using Environment = std::map<std::string, FuzzySet, std::less<>>;

struct CaseMatch {
  FuzzySet value;
  std::optional<std::size_t> index;  // empty when `otherwise` matched
  std::vector<std::pair<std::string, std::string>> snapped;
};

/// First-match evaluation over the environment. Throws EvalError when no arm matches.
CaseMatch evaluate_cases(const CasesExpr& expr, const Environment& env, const Ladder& ladder);

/// Evaluates the operator body with its parameters bound to the values of `args`.
FuzzySet apply_operator(const DefinedOperator& op, std::span<const std::string> args, const Environment& env,
                        const Ladder& ladder);

/// Propagates confidence from assignments up to every root.
/// Requires a program whose pre-flight passed; violations raise EvalError.
Assessment assess(const Program& program);

/// Human-readable derivation of a node's result down to its assignments.
std::string explain(const Assessment& assessment, std::string_view id);

}  // namespace certus
