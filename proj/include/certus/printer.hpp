#pragma once

#include <string>

#include "certus/ast.hpp"

namespace certus {

// Canonical source text for each construct. Parsing the output yields an AST
// equal to the input.

std::string print(const SetExpr& set);
std::string print(CompareOp op);
std::string print(const Condition& condition);
std::string print(const Outcome& outcome);
std::string print(const Case& arm);
std::string print(const CasesExpr& expr);
std::string print(const Annotation& annotation);
std::string print(const OperatorDef& def);
std::string print(const NodeSource& source);
std::string print(const DefinitionBlock& block);

}  // namespace certus
