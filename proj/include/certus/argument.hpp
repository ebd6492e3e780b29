#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace certus {

enum class NodeKind { claim, evidence, defeater };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

/// Claims and evidence are premises; defeaters argue against their parent.
inline bool is_premise(NodeKind kind) { return kind != NodeKind::defeater; }

struct Node {
  std::string id;
  NodeKind kind = NodeKind::claim;
  std::string text;
  std::optional<std::string> annotation;
};

/// True for words that can never be node ids: keywords, set constructors,
/// parameter types and the canonical set names.
bool is_reserved_word(std::string_view word);
bool is_identifier(std::string_view word);

/// Assurance-case argument as a DAG of claims, evidence and defeaters.
///
/// Structural validity (unique ids, existing edge endpoints, legal ids) is
/// enforced on construction. Acyclicity is not; see check_acyclic.
class ArgumentGraph {
 public:
  void add_node(Node node);
  void add_edge(std::string_view parent, std::string_view child);
  void set_definitions(std::optional<std::string> source) { definitions_ = std::move(source); }
  void set_annotation(std::string_view id, std::optional<std::string> annotation);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::optional<std::string>& definitions() const { return definitions_; }

  bool contains(std::string_view id) const { return find(id) != nullptr; }
  const Node* find(std::string_view id) const;
  /// Throws LookupError for unknown ids.
  const Node& node(std::string_view id) const;

  std::span<const std::string> child_ids(std::string_view id) const;
  std::span<const std::string> parent_ids(std::string_view id) const;
  /// Direct children in document order.
  std::vector<Node> children(std::string_view id) const;

  std::vector<std::string> roots() const;
  bool is_leaf(std::string_view id) const { return child_ids(id).empty(); }

 private:
  std::size_t index_of(std::string_view id) const;

  std::vector<Node> nodes_;
  std::vector<std::vector<std::string>> children_;
  std::vector<std::vector<std::string>> parents_;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<std::string> definitions_;
};

/// Parses the YAML document format; JSON input is accepted as well.
ArgumentGraph load_document(std::string_view source);

enum class DocumentFormat { yaml, json };

std::string save_document(const ArgumentGraph& graph, DocumentFormat format);

/// A cycle as an id sequence whose first and last entries coincide.
std::optional<std::vector<std::string>> check_acyclic(const ArgumentGraph& graph);

}  // namespace certus
