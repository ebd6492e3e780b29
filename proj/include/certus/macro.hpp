#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "certus/argument.hpp"
#include "certus/ast.hpp"

namespace certus {

class ProviderPool;

inline constexpr std::size_t kDefaultFuseLimit = 6;

/// One input of a macro invocation. For node annotations `kind` is the node
/// kind; for operator bodies it is the parameter type ("premise", "defeater", "any").
struct MacroChild {
  std::string id;
  std::string kind;
  std::optional<std::string> confidence;  // assigned set, when the child carries an assignment
};

struct MacroRequest {
  std::string macro;
  std::string node_id;
  std::string node_kind;  // node kind, or "operator" for operator bodies
  std::vector<MacroChild> children;
  std::vector<std::string> args;
};

struct ExpandedExpression {
  std::string text;
  MacroOrigin origin;
};

/// Built-in FUSE: one arm per combination of ladder values, scored by the
/// floored mean of signed child scores.
///
/// Values within each child are enumerated so that a set precedes every set
/// containing it; `is` arms then match exactly their own combination.
/// Throws MacroError when there are no children or more than `max_children`.
ExpandedExpression expand_fuse(std::span<const MacroChild> children, const Ladder& ladder,
                               std::size_t max_children = kDefaultFuseLimit);

/// Ladder names in the order FUSE enumerates them.
std::vector<std::string> fuse_value_order(const Ladder& ladder);

struct ExpandOptions {
  std::size_t fuse_limit = kDefaultFuseLimit;
};

/// Replaces every macro call (node annotations and operator bodies) by its
/// expansion. Sources without macros are left byte-identical. Built-ins
/// shadow providers. Throws MacroError with MAC001 (unknown macro), MAC002
/// (provider failure) or MAC003 (expansion rejected).
ArgumentGraph expand_all(const ArgumentGraph& graph, ProviderPool* providers, const Ladder& ladder,
                         const ExpandOptions& options = {});

/// Parses and validates macro output for a site whose inputs are `inputs`.
/// Throws MacroError (MAC003) naming the macro and provider.
CasesExpr accept_expansion(const ExpandedExpression& expansion, std::string_view site,
                           std::span<const std::string> inputs);

}  // namespace certus
