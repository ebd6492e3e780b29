#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace certus {

enum class Severity { error, warning };

inline std::string_view to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }

/// One pre-flight result. `node` is empty for global definitions.
struct Finding {
  Severity severity = Severity::error;
  std::string code;
  std::string node;
  std::string message;
  std::vector<std::string> witness;
};

// Stable finding codes.
namespace codes {
inline constexpr std::string_view cycle = "CYC001";
inline constexpr std::string_view coverage = "COV001";
inline constexpr std::string_view shorting = "SHORT001";
inline constexpr std::string_view no_propagation = "PROP001";
inline constexpr std::string_view totality = "TOT001";
inline constexpr std::string_view enumeration_limit = "TOT002";
inline constexpr std::string_view defeater_monotonicity = "DEF001";
inline constexpr std::string_view premise_monotonicity = "DEF002";
inline constexpr std::string_view certain_defeater_cap = "DEF003";
inline constexpr std::string_view unknown_operator = "OP001";
inline constexpr std::string_view arity = "OP002";
inline constexpr std::string_view param_type = "OP003";
inline constexpr std::string_view recursion = "OP004";
inline constexpr std::string_view syntax = "PARSE001";
inline constexpr std::string_view scope = "SCOPE001";
inline constexpr std::string_view unexpanded_macro = "MAC001";
inline constexpr std::string_view provider_failure = "MAC002";
inline constexpr std::string_view bad_expansion = "MAC003";
}  // namespace codes

}  // namespace certus
