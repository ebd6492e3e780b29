#pragma once

#include <string>

#include "certus/argument.hpp"
#include "certus/evaluator.hpp"
#include "certus/preflight.hpp"

namespace certus {

enum class ReportFormat { text, json, dot };

std::string render_preflight(const PreflightReport& report, const ArgumentGraph& graph, ReportFormat format);

/// Per-node results, roots first. Text output includes traces only when
/// `trace` is set; JSON always carries them.
std::string render_assessment(const Assessment& assessment, const ArgumentGraph& graph, ReportFormat format,
                              bool trace = false);

}  // namespace certus
