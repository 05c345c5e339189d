#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace kbqa::amr {

using NodeId = std::string;

struct AmrNode {
  NodeId var;
  std::string concept_name;

  friend bool operator==(const AmrNode&, const AmrNode&) = default;
};

struct NodeRef {
  NodeId var;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

// A string or symbol constant. `quoted` records whether the source wrote it
// in double quotes; the text itself never carries the quotes.
struct Constant {
  std::string text;
  bool quoted = true;
  friend bool operator==(const Constant&, const Constant&) = default;
};

// Exact decimal kept in its lexical form ("-1", "3.25").
struct Number {
  std::string lexical;
  friend bool operator==(const Number&, const Number&) = default;
};

using NodeTarget = std::variant<NodeRef, Constant, Number>;

struct AmrEdge {
  NodeId source;
  std::string role;  // lower-case, without the leading ':'
  NodeTarget target;

  friend bool operator==(const AmrEdge&, const AmrEdge&) = default;
};

// Rooted, labeled graph parsed from PENMAN. Nodes are stored in depth-first
// preorder from the root (following edges in source order), which is the
// "document order" used by find_unknowns.
class AmrGraph {
 public:
  AmrGraph() = default;

  // Validates every invariant; throws InvalidValue on violation.
  AmrGraph(NodeId root, std::vector<AmrNode> nodes, std::vector<AmrEdge> edges);

  const NodeId& root() const noexcept { return root_; }
  const std::vector<AmrNode>& nodes() const noexcept { return nodes_; }
  const std::vector<AmrEdge>& edges() const noexcept { return edges_; }

  const AmrNode* find(std::string_view var) const;
  const std::string& concept_of(std::string_view var) const;

  // Indices into edges() whose source is `var`, in stored order.
  std::vector<std::size_t> outgoing(std::string_view var) const;
  // Indices of edges targeting node `var`, in stored order.
  std::vector<std::size_t> incoming(std::string_view var) const;

  // Node variables in depth-first preorder from the root.
  std::vector<NodeId> preorder() const;

  // Structural equality: same root, same node set and the same multiset of
  // edges once inverse roles (":arg0-of") are normalised to forward edges.
  friend bool operator==(const AmrGraph& a, const AmrGraph& b);

 private:
  NodeId root_;
  std::vector<AmrNode> nodes_;
  std::vector<AmrEdge> edges_;
};

// True for roles written in inverse form, e.g. "arg1-of".
bool is_inverse_role(std::string_view role);

AmrGraph parse_penman(std::string_view text);
std::string serialize_penman(const AmrGraph& g);

// amr-unknown nodes in document order.
std::vector<NodeId> find_unknowns(const AmrGraph& g);

nlohmann::json to_json(const AmrGraph& g);
AmrGraph graph_from_json(const nlohmann::json& j);

}  // namespace kbqa::amr
