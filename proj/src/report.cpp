#include "certus/report.hpp"

#include <map>

#include "json.hpp"

namespace certus {
namespace {

using ojson = nlohmann::ordered_json;

std::string dot_quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string_view dot_shape(NodeKind kind) {
  switch (kind) {
    case NodeKind::claim: return "box";
    case NodeKind::evidence: return "ellipse";
    case NodeKind::defeater: return "octagon";
  }
  return "box";
}

std::string render_dot(const ArgumentGraph& graph, const std::map<std::string, std::string>& labels,
                       const std::map<std::string, std::string>& colors) {
  std::string out = "digraph certus {\n  rankdir=TB;\n";
  for (const auto& node : graph.nodes()) {
    std::string label = node.id;
    if (auto l = labels.find(node.id); l != labels.end()) label += "\n" + l->second;
    out += "  " + dot_quote(node.id) + " [shape=" + std::string(dot_shape(node.kind)) + ", label=" +
           dot_quote(label);
    if (auto c = colors.find(node.id); c != colors.end()) out += ", color=" + c->second;
    out += "];\n";
  }
  for (const auto& node : graph.nodes()) {
    for (const auto& child : graph.child_ids(node.id)) {
      out += "  " + dot_quote(node.id) + " -> " + dot_quote(child) + ";\n";
    }
  }
  return out + "}\n";
}

ojson trace_json(const Trace& trace) {
  ojson t;
  t["mechanism"] = to_string(trace.mechanism);
  t["rule"] = trace.rule;
  t["case"] = trace.matched_case ? ojson(*trace.matched_case) : ojson(nullptr);
  t["otherwise"] = trace.matched_otherwise;
  t["inputs"] = ojson::array();
  for (const auto& [id, set] : trace.inputs) t["inputs"].push_back({{"id", id}, {"set", set}});
  t["operators"] = trace.operators;
  t["macro"] = trace.macro ? ojson{{"name", trace.macro->macro}, {"provider", trace.macro->provider}} : ojson(nullptr);
  t["snapped"] = ojson::array();
  for (const auto& [id, to] : trace.snapped) t["snapped"].push_back({{"id", id}, {"to", to}});
  return t;
}

std::string trace_line(const Trace& trace) {
  std::string how = "via " + std::string(to_string(trace.mechanism));
  for (std::size_t i = 0; i < trace.operators.size(); ++i) how += (i ? " -> " : " ") + trace.operators[i];
  if (trace.macro) how += " (expanded #" + trace.macro->macro + ")";
  if (trace.matched_case) how += ", case " + std::to_string(*trace.matched_case + 1);
  if (trace.matched_otherwise) how += ", otherwise";
  std::string out = how + ": " + trace.rule;
  if (!trace.inputs.empty()) {
    out += "\n      inputs:";
    for (std::size_t i = 0; i < trace.inputs.size(); ++i) {
      out += (i ? ", " : " ") + trace.inputs[i].first + "=" + trace.inputs[i].second;
    }
  }
  for (const auto& [id, to] : trace.snapped) out += "\n      snapped " + id + " to " + to;
  return out;
}

}  // namespace

std::string render_preflight(const PreflightReport& report, const ArgumentGraph& graph, ReportFormat format) {
  if (format == ReportFormat::json) {
    ojson j;
    j["passed"] = report.passed;
    j["findings"] = ojson::array();
    for (const auto& f : report.findings) {
      j["findings"].push_back({{"severity", to_string(f.severity)},
                               {"code", f.code},
                               {"node", f.node},
                               {"message", f.message},
                               {"witness", f.witness}});
    }
    return j.dump(2) + "\n";
  }
  if (format == ReportFormat::dot) {
    std::map<std::string, std::string> labels, colors;
    for (const auto& f : report.findings) {
      if (f.node.empty() || !graph.contains(f.node)) continue;
      auto& l = labels[f.node];
      l += (l.empty() ? "" : " ") + f.code;
      if (f.severity == Severity::error) {
        colors[f.node] = "red";
      } else if (!colors.contains(f.node)) {
        colors[f.node] = "orange";
      }
    }
    return render_dot(graph, labels, colors);
  }

  std::string out;
  std::size_t errors = 0, warnings = 0;
  for (const auto& f : report.findings) {
    (f.severity == Severity::error ? errors : warnings) += 1;
    out += std::string(to_string(f.severity)) + " " + f.code;
    if (!f.node.empty()) out += " [" + f.node + "]";
    out += ": " + f.message + "\n";
    for (const auto& w : f.witness) out += "    " + w + "\n";
  }
  out += std::string(report.passed ? "pre-flight passed" : "pre-flight failed") + ": " + std::to_string(errors) +
         " error(s), " + std::to_string(warnings) + " warning(s)\n";
  return out;
}

std::string render_assessment(const Assessment& assessment, const ArgumentGraph& graph, ReportFormat format,
                              bool trace) {
  if (format == ReportFormat::json) {
    ojson j;
    j["roots"] = graph.roots();
    j["order"] = assessment.order;
    ojson nodes = ojson::object();
    for (const auto& [id, set] : assessment.results) {
      nodes[id] = {{"set", describe(set, assessment.ladder)},
                   {"rank", set.rank()},
                   {"trace", trace_json(assessment.traces.find(id)->second)}};
    }
    j["nodes"] = std::move(nodes);
    ojson skipped = ojson::object();
    for (const auto& [id, at] : assessment.shorted_at) skipped[id] = {{"shorted_at", at}};
    j["not_evaluated"] = std::move(skipped);
    return j.dump(2) + "\n";
  }
  if (format == ReportFormat::dot) {
    std::map<std::string, std::string> labels, colors;
    for (const auto& node : graph.nodes()) {
      auto r = assessment.results.find(node.id);
      labels[node.id] = r != assessment.results.end() ? describe(r->second, assessment.ladder) : "not evaluated";
      if (r == assessment.results.end()) colors[node.id] = "gray";
    }
    return render_dot(graph, labels, colors);
  }

  std::string out;
  for (const auto& id : assessment.order) {
    const auto& set = assessment.results.find(id)->second;
    out += id + ": " + describe(set, assessment.ladder);
    if (trace) out += "\n    " + trace_line(assessment.traces.find(id)->second);
    out += "\n";
  }
  for (const auto& [id, at] : assessment.shorted_at) out += id + ": not evaluated (shorted at " + at + ")\n";
  return out;
}

}  // namespace certus
