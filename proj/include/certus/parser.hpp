#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "certus/ast.hpp"

namespace certus {

/// Parses a single annotation attached to node `node_id`.
///
/// A statement-level `X is Y` becomes an Assignment when Y is a set name or
/// literal and a DirectProp when Y is an identifier. X must equal node_id.
Annotation parse_annotation(std::string_view source, std::string_view node_id);

/// Parses a sequence of `with name(params) as body` definitions.
std::vector<OperatorDef> parse_definitions(std::string_view source);
DefinitionBlock parse_definition_block(std::string_view source);

/// Parses a node's full source: definitions, then an optional annotation.
NodeSource parse_node_source(std::string_view source, std::string_view node_id);

/// A lone set expression such as `high` or `trapezoid(0.1, 0.2, 0.3, 0.4)`.
SetExpr parse_set_expr(std::string_view source);

/// Every node or parameter name referenced by the construct, in source order.
std::vector<Ref> referenced_ids(const CasesExpr& expr);
std::vector<Ref> referenced_ids(const Annotation& annotation);
std::vector<Ref> referenced_ids(const OperatorBody& body);

}  // namespace certus
