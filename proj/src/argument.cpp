#include "certus/argument.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include "json.hpp"
#include <yaml-cpp/yaml.h>

#include "certus/error.hpp"
#include "certus/fuzzy.hpp"

namespace certus {
namespace {

constexpr std::array<std::string_view, 21> kReservedWords = {
    "is",    "contains", "overlaps", "gt",    "lt",        "ge",        "le",
    "and",   "or",       "cases",    "otherwise", "with",  "as",        "min",
    "max",   "point",    "triangle", "trapezoid", "Premise", "Defeater", "Any"};

std::string where(const YAML::Node& node) {
  const auto mark = node.Mark();
  if (mark.is_null()) return "document";
  return "line " + std::to_string(mark.line + 1) + ", column " + std::to_string(mark.column + 1);
}

std::string scalar(const YAML::Node& node, std::string_view field) {
  if (!node.IsScalar()) {
    throw DocumentError(where(node) + ": field '" + std::string(field) + "' must be a string");
  }
  return node.Scalar();
}

bool literal_safe(const std::string& text) {
  // yaml-cpp literal blocks clip to exactly one trailing newline and cannot
  // express an indented first line, so only use them when the text survives.
  if (text.size() < 2 || text.back() != '\n' || text[text.size() - 2] == '\n') return false;
  if (text.front() == ' ' || text.front() == '\t' || text.front() == '\n') return false;
  if (text.find('\r') != std::string::npos || text.find('\t') != std::string::npos) return false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n' && i > 0 && (text[i - 1] == ' ' || text[i - 1] == '\t')) return false;
  }
  return true;
}

void emit_text(YAML::Emitter& out, const std::string& text) {
  if (literal_safe(text)) {
    out << YAML::Literal << text;
  } else if (text.find('\n') != std::string::npos) {
    out << YAML::DoubleQuoted << text;
  } else {
    out << text;
  }
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::claim:
      return "claim";
    case NodeKind::evidence:
      return "evidence";
    case NodeKind::defeater:
      return "defeater";
  }
  return "claim";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "claim") return NodeKind::claim;
  if (text == "evidence") return NodeKind::evidence;
  if (text == "defeater") return NodeKind::defeater;
  return std::nullopt;
}

bool is_reserved_word(std::string_view word) {
  return is_canonical_name(word) ||
         std::find(kReservedWords.begin(), kReservedWords.end(), word) != kReservedWords.end();
}

bool is_identifier(std::string_view word) {
  if (word.empty()) return false;
  auto c0 = static_cast<unsigned char>(word[0]);
  if (!std::isalpha(c0) && c0 != '_') return false;
  return std::all_of(word.begin(), word.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

void ArgumentGraph::add_node(Node node) {
  if (!is_identifier(node.id)) throw DocumentError("node id '" + node.id + "' is not an identifier");
  if (is_reserved_word(node.id)) {
    throw DocumentError("node id '" + node.id + "' collides with a reserved word or canonical set name");
  }
  if (index_.contains(node.id)) throw DocumentError("duplicate node id '" + node.id + "'");
  index_.emplace(node.id, nodes_.size());
  nodes_.push_back(std::move(node));
  children_.emplace_back();
  parents_.emplace_back();
}

void ArgumentGraph::add_edge(std::string_view parent, std::string_view child) {
  auto p = index_.find(std::string(parent));
  if (p == index_.end()) throw DocumentError("edge from unknown node '" + std::string(parent) + "'");
  auto c = index_.find(std::string(child));
  if (c == index_.end()) {
    throw DocumentError("dangling edge: node '" + std::string(parent) + "' lists unknown child '" +
                        std::string(child) + "'");
  }
  auto& kids = children_[p->second];
  if (std::find(kids.begin(), kids.end(), child) != kids.end()) {
    throw DocumentError("node '" + std::string(parent) + "' lists child '" + std::string(child) +
                        "' twice");
  }
  kids.emplace_back(child);
  parents_[c->second].emplace_back(parent);
}

void ArgumentGraph::set_annotation(std::string_view id, std::optional<std::string> annotation) {
  nodes_[index_of(id)].annotation = std::move(annotation);
}

const Node* ArgumentGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

std::size_t ArgumentGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw LookupError("unknown node '" + std::string(id) + "'");
  return it->second;
}

const Node& ArgumentGraph::node(std::string_view id) const { return nodes_[index_of(id)]; }

std::span<const std::string> ArgumentGraph::child_ids(std::string_view id) const {
  return children_[index_of(id)];
}

std::span<const std::string> ArgumentGraph::parent_ids(std::string_view id) const {
  return parents_[index_of(id)];
}

std::vector<Node> ArgumentGraph::children(std::string_view id) const {
  std::vector<Node> out;
  for (const auto& c : child_ids(id)) out.push_back(node(c));
  return out;
}

std::vector<std::string> ArgumentGraph::roots() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (parents_[i].empty()) out.push_back(nodes_[i].id);
  }
  return out;
}

ArgumentGraph load_document(std::string_view source) {
  YAML::Node doc;
  try {
    doc = YAML::Load(std::string(source));
  } catch (const YAML::Exception& e) {
    throw DocumentError("malformed document at line " + std::to_string(e.mark.line + 1) +
                        ", column " + std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!doc.IsMap()) throw DocumentError("document must be a mapping with a 'nodes' list");

  ArgumentGraph graph;
  for (const auto& kv : doc) {
    const auto key = kv.first.Scalar();
    if (key != "nodes" && key != "definitions") {
      throw DocumentError(where(kv.first) + ": unknown top-level key '" + key + "'");
    }
  }
  if (doc["definitions"] && !doc["definitions"].IsNull()) {
    graph.set_definitions(scalar(doc["definitions"], "definitions"));
  }

  const YAML::Node nodes = doc["nodes"];
  if (!nodes || !nodes.IsSequence()) throw DocumentError("document must contain a 'nodes' list");

  std::vector<std::pair<std::string, YAML::Node>> edges;
  for (const auto& item : nodes) {
    if (!item.IsMap()) throw DocumentError(where(item) + ": each node must be a mapping");
    Node node;
    bool has_id = false;
    bool has_kind = false;
    for (const auto& kv : item) {
      const auto key = kv.first.Scalar();
      if (key == "id") {
        node.id = scalar(kv.second, "id");
        has_id = true;
      } else if (key == "kind") {
        auto text = scalar(kv.second, "kind");
        auto kind = parse_node_kind(text);
        if (!kind) {
          throw DocumentError(where(kv.second) + ": unknown node kind '" + text +
                              "' (expected claim, evidence or defeater)");
        }
        node.kind = *kind;
        has_kind = true;
      } else if (key == "text") {
        node.text = kv.second.IsNull() ? "" : scalar(kv.second, "text");
      } else if (key == "certus") {
        if (!kv.second.IsNull()) node.annotation = scalar(kv.second, "certus");
      } else if (key == "children") {
        if (!kv.second.IsNull() && !kv.second.IsSequence()) {
          throw DocumentError(where(kv.second) + ": 'children' must be a list of ids");
        }
      } else {
        throw DocumentError(where(kv.first) + ": unknown node field '" + key + "'");
      }
    }
    if (!has_id) throw DocumentError(where(item) + ": node without 'id'");
    if (!has_kind) throw DocumentError(where(item) + ": node '" + node.id + "' without 'kind'");
    try {
      graph.add_node(node);
    } catch (const DocumentError& e) {
      throw DocumentError(where(item) + ": " + e.what());
    }
    if (item["children"] && item["children"].IsSequence()) edges.emplace_back(node.id, item["children"]);
  }
  for (const auto& [parent, list] : edges) {
    for (const auto& child : list) {
      try {
        graph.add_edge(parent, scalar(child, "children"));
      } catch (const DocumentError& e) {
        throw DocumentError(where(child) + ": " + e.what());
      }
    }
  }
  return graph;
}

std::string save_document(const ArgumentGraph& graph, DocumentFormat format) {
  if (format == DocumentFormat::json) {
    nlohmann::ordered_json doc;
    if (graph.definitions()) doc["definitions"] = *graph.definitions();
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto& node : graph.nodes()) {
      nlohmann::ordered_json n;
      n["id"] = node.id;
      n["kind"] = std::string(to_string(node.kind));
      n["text"] = node.text;
      auto kids = graph.child_ids(node.id);
      if (!kids.empty()) n["children"] = std::vector<std::string>(kids.begin(), kids.end());
      if (node.annotation) n["certus"] = *node.annotation;
      doc["nodes"].push_back(std::move(n));
    }
    return doc.dump(2) + "\n";
  }

  YAML::Emitter out;
  out << YAML::BeginMap;
  if (graph.definitions()) {
    out << YAML::Key << "definitions" << YAML::Value;
    emit_text(out, *graph.definitions());
  }
  out << YAML::Key << "nodes" << YAML::Value << YAML::BeginSeq;
  for (const auto& node : graph.nodes()) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << node.id;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(node.kind));
    out << YAML::Key << "text" << YAML::Value;
    emit_text(out, node.text);
    auto kids = graph.child_ids(node.id);
    if (!kids.empty()) {
      out << YAML::Key << "children" << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (const auto& k : kids) out << k;
      out << YAML::EndSeq;
    }
    if (node.annotation) {
      out << YAML::Key << "certus" << YAML::Value;
      emit_text(out, *node.annotation);
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::optional<std::vector<std::string>> check_acyclic(const ArgumentGraph& graph) {
  enum class Mark { unvisited, active, done };
  std::unordered_map<std::string, Mark> marks;
  std::vector<std::string> stack;

  // Iterative DFS; each frame remembers how many children it has explored.
  for (const auto& start : graph.nodes()) {
    if (marks[start.id] != Mark::unvisited) continue;
    std::vector<std::pair<std::string, std::size_t>> frames{{start.id, 0}};
    marks[start.id] = Mark::active;
    stack.push_back(start.id);
    while (!frames.empty()) {
      auto& [id, next] = frames.back();
      auto kids = graph.child_ids(id);
      if (next == kids.size()) {
        marks[id] = Mark::done;
        stack.pop_back();
        frames.pop_back();
        continue;
      }
      const std::string child = kids[next++];
      auto mark = marks[child];
      if (mark == Mark::active) {
        auto from = std::find(stack.begin(), stack.end(), child);
        std::vector<std::string> cycle(from, stack.end());
        cycle.push_back(child);
        return cycle;
      }
      if (mark == Mark::unvisited) {
        marks[child] = Mark::active;
        stack.push_back(child);
        frames.emplace_back(child, 0);
      }
    }
  }
  return std::nullopt;
}

}  // namespace certus
