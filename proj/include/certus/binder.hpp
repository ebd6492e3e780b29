#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "certus/argument.hpp"
#include "certus/ast.hpp"
#include "certus/diagnostics.hpp"

namespace certus {

/// An operator definition together with where it was written.
struct DefinedOperator {
  OperatorDef def;
  std::string site;  // defining node, empty for global definitions
  std::vector<std::string> allowed_rules;
  const DefinedOperator* callee = nullptr;  // set by binding when the body is an operator call
};

/// Lexical operator lookup: the node itself, then ancestors by increasing
/// distance (document order within a distance), then global definitions.
class OperatorScope {
 public:
  explicit OperatorScope(const ArgumentGraph& graph) : graph_(&graph) {}

  /// Throws BindError (OP001) when two definitions at one site share a name.
  void add(const DefinedOperator& op);

  const DefinedOperator* lookup(std::string_view name, std::string_view site) const;

 private:
  const ArgumentGraph* graph_;
  std::map<std::string, std::map<std::string, const DefinedOperator*, std::less<>>, std::less<>> by_site_;
};

struct BoundAnnotation {
  Annotation ast;
  const DefinedOperator* callee = nullptr;
};

ParamType param_class(NodeKind kind);
bool accepts(ParamType param, ParamType argument);

/// Resolves references and operator calls of an annotation written at `node_id`.
/// References must name direct children. Throws BindError carrying the finding code.
BoundAnnotation bind(const Annotation& annotation, const ArgumentGraph& graph, std::string_view node_id,
                     const OperatorScope& scope);

/// Resolves the callee of an operator whose body is an operator call.
void bind_operator(DefinedOperator& op, const OperatorScope& scope);

struct BoundNode {
  std::string id;
  NodeSource source;
  bool parsed = true;
  bool bound = true;
  const DefinedOperator* callee = nullptr;
};

/// A parsed and bound argument, ready for checking and assessment.
struct Program {
  std::shared_ptr<const ArgumentGraph> graph;
  Ladder ladder = Ladder::standard();
  std::vector<std::shared_ptr<DefinedOperator>> operators;
  std::vector<std::string> global_allowed_rules;
  std::map<std::string, BoundNode, std::less<>> nodes;

  const BoundNode& node(std::string_view id) const;
};

struct Compilation {
  Program program;
  std::vector<Finding> findings;
};

/// Parses every annotation and definition and binds them. Problems become
/// findings rather than exceptions; the graph must be acyclic.
Compilation compile(const ArgumentGraph& graph, const Ladder& ladder);

}  // namespace certus
