#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "certus/binder.hpp"
#include "certus/compiled_cases.hpp"
#include "certus/diagnostics.hpp"

namespace certus {

inline constexpr std::size_t kDefaultEnumerationLimit = 1'000'000;

struct PreflightOptions {
  std::size_t max_enumeration = kDefaultEnumerationLimit;
  /// Defeater rules to check; any of DEF001, DEF002, DEF003.
  std::vector<std::string> rules = {"DEF001", "DEF002", "DEF003"};
};

struct PreflightReport {
  std::vector<Finding> findings;  // ordered by node id, then code
  bool passed = true;
};

/// A cases expression to analyse, with what each slot stands for.
struct CheckSite {
  std::string node;   // reporting node; empty for global definitions
  std::string label;  // "node 'C0'" or "operator 'f' (at 'C0')"
  const CasesExpr* expr = nullptr;
  std::vector<std::string> slots;
  std::vector<bool> defeater;  // per slot
  std::vector<std::string> allowed_rules;
};

/// First matching arm for every combination of `vocabulary` values over the
/// slots, in mixed-radix order with the last slot varying fastest. Entries
/// are kNoMatch where nothing matches. Combinations already claimed by an
/// earlier arm are never reassigned, so the table reflects first-match order.
inline constexpr std::uint32_t kNoMatch = 0xffffffffu;
std::vector<std::uint32_t> decision_table(const CompiledCases& cases, std::span<const FuzzySet> vocabulary);

/// Every value assessment can produce: the ladder plus every set literal
/// assigned or returned anywhere in the program.
std::vector<FuzzySet> document_vocabulary(const Program& program);

/// COV001 per uncovered root-to-leaf path, SHORT001 per assignment on an
/// internal node, PROP001 per evaluated internal node without a rule.
std::vector<Finding> check_assignment_coverage(const Program& program);

std::vector<Finding> check_totality(const CheckSite& site, std::span<const FuzzySet> vocabulary, const Ladder& ladder,
                                    std::size_t max_enumeration = kDefaultEnumerationLimit);

/// Evaluates the expression over all ladder combinations and checks the
/// enabled defeater rules. Expressions not total over the ladder are skipped.
std::vector<Finding> check_defeater_rules(const CheckSite& site, const Ladder& ladder,
                                          std::span<const std::string> rules,
                                          std::size_t max_enumeration = kDefaultEnumerationLimit);

/// Every cases expression of the program: node annotations and operator bodies.
std::vector<CheckSite> cases_sites(const Program& program);

struct PreflightResult {
  PreflightReport report;
  /// Present unless the graph is cyclic.
  std::optional<Program> program;
};

/// Full pre-flight over an expanded graph.
PreflightResult preflight(const ArgumentGraph& graph, const Ladder& ladder, const PreflightOptions& options = {});

PreflightReport run_preflight(const ArgumentGraph& graph, const Ladder& ladder = Ladder::standard(),
                              const PreflightOptions& options = {});

}  // namespace certus
