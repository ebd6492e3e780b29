#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "certus/error.hpp"
#include "certus/fuzzy.hpp"

namespace certus {

/// Source positions are carried for diagnostics only and never affect AST equality.
struct Span {
  SourcePos pos;
  friend bool operator==(const Span&, const Span&) { return true; }
};

struct SetExpr {
  enum class Kind { named, point, triangle, trapezoid };
  Kind kind = Kind::named;
  std::string name;          // canonical name when kind == named
  std::vector<double> args;  // literal parameters otherwise

  bool operator==(const SetExpr&) const = default;
};

/// The fuzzy set a set expression denotes under the given ladder.
FuzzySet resolve(const SetExpr& expr, const Ladder& ladder);

/// Reference to a child node or an operator parameter.
struct Ref {
  std::string id;
  Span span;

  bool operator==(const Ref&) const = default;
};

enum class CompareOp { is, contains, overlaps, gt, lt, ge, le };

struct Atom {
  Ref left;
  CompareOp op = CompareOp::is;
  std::variant<SetExpr, Ref> right;

  bool operator==(const Atom&) const = default;
};

/// Boolean tree over atoms. And/Or nodes are n-ary and never directly nest
/// a node of their own kind.
struct Condition {
  enum class Kind { atom, conjunction, disjunction };
  Kind kind = Kind::atom;
  Atom atom;
  std::vector<Condition> operands;

  bool operator==(const Condition&) const = default;
};

struct Outcome {
  enum class Kind { set, ref, min, max };
  Kind kind = Kind::set;
  SetExpr set;
  std::vector<Ref> refs;  // one for ref, one or more for min/max

  bool operator==(const Outcome&) const = default;
};

struct Case {
  Condition condition;
  Outcome outcome;

  bool operator==(const Case&) const = default;
};

/// Provenance of a cases expression produced by macro expansion.
struct MacroOrigin {
  std::string macro;
  std::string provider;

  bool operator==(const MacroOrigin&) const = default;
};

struct CasesExpr {
  std::vector<Case> cases;
  std::optional<Outcome> otherwise;
  std::optional<MacroOrigin> origin;
  Span span;

  bool operator==(const CasesExpr&) const = default;
};

struct Assignment {
  std::string target;
  SetExpr value;

  bool operator==(const Assignment&) const = default;
};

struct DirectProp {
  std::string target;
  Ref source;

  bool operator==(const DirectProp&) const = default;
};

struct OperatorCall {
  std::string name;
  std::vector<Ref> args;
  Span span;

  bool operator==(const OperatorCall&) const = default;
};

struct MacroCall {
  std::string name;
  std::vector<Ref> args;
  bool has_parens = false;
  Span span;

  bool operator==(const MacroCall&) const = default;
};

using Annotation = std::variant<Assignment, DirectProp, CasesExpr, OperatorCall, MacroCall>;

enum class ParamType { premise, defeater, any };

std::string_view to_string(ParamType type);

struct Param {
  std::string name;
  ParamType type = ParamType::any;

  bool operator==(const Param&) const = default;
};

using OperatorBody = std::variant<CasesExpr, OperatorCall, MacroCall>;

struct OperatorDef {
  std::string name;
  std::vector<Param> params;
  OperatorBody body;
  Span span;

  bool operator==(const OperatorDef&) const = default;
};

/// Everything written in a node's `certus` field: local operator definitions
/// followed by at most one annotation, plus rule opt-outs from pragmas.
struct NodeSource {
  std::vector<OperatorDef> definitions;
  std::optional<Annotation> annotation;
  std::vector<std::string> allowed_rules;

  bool operator==(const NodeSource&) const = default;
};

/// Definitions block (global or per node) parsed on its own.
struct DefinitionBlock {
  std::vector<OperatorDef> definitions;
  std::vector<std::string> allowed_rules;
};

}  // namespace certus
