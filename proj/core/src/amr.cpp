#include "kbqa/amr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "kbqa/error.hpp"

namespace kbqa::amr {

namespace {

bool is_valid_var(std::string_view v) {
  if (v.empty() || !std::isalpha(static_cast<unsigned char>(v[0]))) return false;
  return std::all_of(v.begin(), v.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
  });
}

bool is_number(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    ++i;
    ++digits;
  }
  if (digits == 0) return false;
  if (i < s.size() && s[i] == '.') {
    ++i;
    std::size_t frac = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      ++i;
      ++frac;
    }
    if (frac == 0) return false;
  }
  return i == s.size();
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::string base_role(std::string_view role) {
  return std::string(role.substr(0, role.size() - 3));
}

// Canonical, order-independent rendering of one edge for equality checks.
std::string edge_key(const AmrEdge& e) {
  const std::string& source = e.source;
  const std::string& role = e.role;
  std::string target;
  if (const auto* ref = std::get_if<NodeRef>(&e.target)) {
    if (is_inverse_role(role))
      return ref->var + "\x1f" + base_role(role) + "\x1f@" + e.source;
    target = "@" + ref->var;
  } else if (const auto* c = std::get_if<Constant>(&e.target)) {
    target = (c->quoted ? "\"" : "'") + c->text;
  } else {
    target = "#" + std::get<Number>(e.target).lexical;
  }
  return source + "\x1f" + role + "\x1f" + target;
}

class PenmanParser {
 public:
  explicit PenmanParser(std::string_view text) : text_(text) {}

  AmrGraph parse() {
    skip_space();
    if (!at('(')) throw SyntaxError(pos_, "'('");
    root_ = parse_node();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError(pos_, "end of input");
    resolve_bare_symbols();
    return build();
  }

 private:
  struct RawEdge {
    NodeId source;
    std::string role;
    NodeTarget target;
    bool bare = false;  // unquoted symbol, may turn out to be a variable
  };

  bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  static bool is_delim(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
           c == ':' || c == '/' || c == '"';
  }

  std::string read_symbol() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string read_concept() {
    // Concepts may contain ':' only in rare cases; stop at whitespace/parens.
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
          c == '"')
        break;
      if (c == ':' && pos_ > start) break;
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string read_string() {
    // at opening quote
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (!at('"')) throw SyntaxError(pos_, "closing '\"'");
    ++pos_;
    return out;
  }

  NodeId parse_node() {
    ++pos_;  // '('
    skip_space();
    std::size_t var_pos = pos_;
    std::string var = read_symbol();
    if (!is_valid_var(var)) throw SyntaxError(var_pos, "variable");
    skip_space();
    if (!at('/')) throw SyntaxError(pos_, "'/'");
    ++pos_;
    skip_space();
    std::size_t concept_pos = pos_;
    std::string label = read_concept();
    if (label.empty()) throw SyntaxError(concept_pos, "concept");
    define(var, label);

    while (true) {
      skip_space();
      if (pos_ >= text_.size()) throw SyntaxError(pos_, "')'");
      if (at(')')) {
        ++pos_;
        return var;
      }
      if (!at(':')) throw SyntaxError(pos_, "role or ')'");
      ++pos_;
      std::size_t role_pos = pos_;
      std::string role = read_symbol();
      if (role.empty()) throw SyntaxError(role_pos, "role name");
      skip_space();
      if (pos_ >= text_.size()) throw SyntaxError(pos_, "role target");
      RawEdge edge{var, lower(role), NodeRef{}, false};
      if (at('(')) {
        // Reserve the slot first so edges keep their textual order.
        std::size_t slot = edges_.size();
        edges_.push_back(std::move(edge));
        auto child = parse_node();
        edges_[slot].target = NodeRef{child};
        continue;
      } else if (at('"')) {
        edge.target = Constant{read_string(), true};
      } else {
        std::size_t sym_pos = pos_;
        std::string sym = read_symbol();
        if (sym.empty()) throw SyntaxError(sym_pos, "role target");
        if (is_number(sym)) {
          edge.target = Number{sym};
        } else {
          edge.target = Constant{sym, false};
          edge.bare = true;
        }
      }
      edges_.push_back(std::move(edge));
    }
  }

  void define(const std::string& var, const std::string& label) {
    auto it = concepts_.find(var);
    if (it != concepts_.end()) {
      if (it->second != label)
        throw DuplicateConceptError(var, it->second, label);
      return;
    }
    concepts_.emplace(var, label);
    order_.push_back(var);
  }

  void resolve_bare_symbols() {
    for (auto& e : edges_) {
      if (!e.bare) continue;
      const auto& c = std::get<Constant>(e.target);
      if (concepts_.count(c.text)) e.target = NodeRef{c.text};
    }
  }

  AmrGraph build() {
    std::vector<AmrNode> nodes;
    nodes.reserve(order_.size());
    for (const auto& v : order_) nodes.push_back({v, concepts_.at(v)});
    std::vector<AmrEdge> edges;
    edges.reserve(edges_.size());
    for (auto& e : edges_)
      edges.push_back({std::move(e.source), std::move(e.role), std::move(e.target)});
    AmrGraph g(root_, std::move(nodes), std::move(edges));
    // Re-order nodes into preorder so that document order is canonical.
    std::vector<AmrNode> ordered;
    for (const auto& v : g.preorder()) ordered.push_back(*g.find(v));
    return AmrGraph(g.root(), std::move(ordered), g.edges());
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  NodeId root_;
  std::map<std::string, std::string> concepts_;
  std::vector<std::string> order_;
  std::vector<RawEdge> edges_;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

class PenmanWriter {
 public:
  explicit PenmanWriter(const AmrGraph& g) : g_(g) {
    forward_ = forward_reachable();
  }

  std::string write() {
    write_node(g_.root());
    return out_;
  }

 private:
  std::unordered_set<std::string> forward_reachable() const {
    std::unordered_set<std::string> reach{g_.root()};
    std::vector<std::string> stack{g_.root()};
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto idx : g_.outgoing(v)) {
        if (const auto* r = std::get_if<NodeRef>(&g_.edges()[idx].target)) {
          if (reach.insert(r->var).second) stack.push_back(r->var);
        }
      }
    }
    return reach;
  }

  void write_target(const NodeTarget& t) {
    if (const auto* r = std::get_if<NodeRef>(&t)) {
      if (expanded_.count(r->var)) {
        out_ += r->var;
      } else {
        write_node(r->var);
      }
    } else if (const auto* c = std::get_if<Constant>(&t)) {
      out_ += c->quoted ? quote(c->text) : c->text;
    } else {
      out_ += std::get<Number>(t).lexical;
    }
  }

  void write_node(const std::string& var) {
    expanded_.insert(var);
    out_ += "(" + var + " / " + g_.concept_of(var);
    for (auto idx : g_.outgoing(var)) {
      if (used_.count(idx)) continue;
      used_.insert(idx);
      const auto& e = g_.edges()[idx];
      out_ += " :" + e.role + " ";
      write_target(e.target);
    }
    // Nodes that cannot be reached along forward edges hang off their
    // neighbour through an inverted role.
    for (auto idx : g_.incoming(var)) {
      if (used_.count(idx)) continue;
      const auto& e = g_.edges()[idx];
      if (forward_.count(e.source) || expanded_.count(e.source)) continue;
      used_.insert(idx);
      std::string role =
          is_inverse_role(e.role) ? base_role(e.role) : e.role + "-of";
      out_ += " :" + role + " ";
      write_node(e.source);
    }
    out_ += ")";
  }

  const AmrGraph& g_;
  std::unordered_set<std::string> forward_;
  std::unordered_set<std::string> expanded_;
  std::set<std::size_t> used_;
  std::string out_;
};

}  // namespace

bool is_inverse_role(std::string_view role) {
  if (role.size() <= 3 || role.substr(role.size() - 3) != "-of") return false;
  if (role == "consist-of") return false;
  if (role.substr(0, 5) == "prep-") return false;
  return true;
}

AmrGraph::AmrGraph(NodeId root, std::vector<AmrNode> nodes,
                   std::vector<AmrEdge> edges)
    : root_(std::move(root)), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::vector<std::string> violations;
  std::unordered_set<std::string> vars;
  for (const auto& n : nodes_) {
    if (!is_valid_var(n.var)) violations.push_back("invalid variable '" + n.var + "'");
    if (n.concept_name.empty()) violations.push_back("empty concept for '" + n.var + "'");
    if (!vars.insert(n.var).second)
      violations.push_back("duplicate variable '" + n.var + "'");
  }
  if (!vars.count(root_)) violations.push_back("root '" + root_ + "' is not a node");
  for (const auto& e : edges_) {
    if (!vars.count(e.source))
      violations.push_back("edge source '" + e.source + "' is not a node");
    if (e.role.empty()) violations.push_back("empty role on edge from '" + e.source + "'");
    if (const auto* r = std::get_if<NodeRef>(&e.target); r && !vars.count(r->var))
      violations.push_back("edge target '" + r->var + "' is not a node");
  }
  if (violations.empty()) {
    // Connectivity ignoring direction.
    std::unordered_map<std::string, std::vector<std::string>> adj;
    for (const auto& e : edges_) {
      if (const auto* r = std::get_if<NodeRef>(&e.target)) {
        adj[e.source].push_back(r->var);
        adj[r->var].push_back(e.source);
      }
    }
    std::unordered_set<std::string> seen{root_};
    std::vector<std::string> stack{root_};
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (const auto& w : adj[v])
        if (seen.insert(w).second) stack.push_back(w);
    }
    if (seen.size() != nodes_.size()) violations.push_back("graph is not connected");
  }
  if (!violations.empty()) throw InvalidValue("invalid AMR graph", violations);
}

const AmrNode* AmrGraph::find(std::string_view var) const {
  for (const auto& n : nodes_)
    if (n.var == var) return &n;
  return nullptr;
}

const std::string& AmrGraph::concept_of(std::string_view var) const {
  const auto* n = find(var);
  if (!n) throw InvalidValue("unknown node '" + std::string(var) + "'");
  return n->concept_name;
}

std::vector<std::size_t> AmrGraph::outgoing(std::string_view var) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].source == var) out.push_back(i);
  return out;
}

std::vector<std::size_t> AmrGraph::incoming(std::string_view var) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (const auto* r = std::get_if<NodeRef>(&edges_[i].target); r && r->var == var)
      out.push_back(i);
  return out;
}

std::vector<NodeId> AmrGraph::preorder() const {
  // Depth-first from the root along outgoing edges; a node that cannot be
  // reached along edge direction is visited from its neighbour through the
  // inverted edge. This is also the order in which serialize_penman writes
  // nodes, so the order survives a round trip.
  std::vector<NodeId> order;
  if (root_.empty()) return order;
  std::unordered_set<std::string> forward{root_};
  std::vector<std::string> stack{root_};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto idx : outgoing(v))
      if (const auto* r = std::get_if<NodeRef>(&edges_[idx].target))
        if (forward.insert(r->var).second) stack.push_back(r->var);
  }
  std::unordered_set<std::string> seen;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    seen.insert(v);
    order.push_back(v);
    for (auto idx : outgoing(v))
      if (const auto* r = std::get_if<NodeRef>(&edges_[idx].target))
        if (!seen.count(r->var)) visit(r->var);
    for (auto idx : incoming(v)) {
      const auto& src = edges_[idx].source;
      if (!forward.count(src) && !seen.count(src)) visit(src);
    }
  };
  visit(root_);
  for (const auto& n : nodes_)
    if (!seen.count(n.var)) order.push_back(n.var);
  return order;
}

bool operator==(const AmrGraph& a, const AmrGraph& b) {
  if (a.root_ != b.root_) return false;
  auto node_set = [](const AmrGraph& g) {
    std::vector<std::pair<std::string, std::string>> v;
    for (const auto& n : g.nodes_) v.emplace_back(n.var, n.concept_name);
    std::sort(v.begin(), v.end());
    return v;
  };
  if (node_set(a) != node_set(b)) return false;
  auto edge_set = [](const AmrGraph& g) {
    std::vector<std::string> v;
    for (const auto& e : g.edges_) v.push_back(edge_key(e));
    std::sort(v.begin(), v.end());
    return v;
  };
  return edge_set(a) == edge_set(b);
}

AmrGraph parse_penman(std::string_view text) { return PenmanParser(text).parse(); }

std::string serialize_penman(const AmrGraph& g) { return PenmanWriter(g).write(); }

std::vector<NodeId> find_unknowns(const AmrGraph& g) {
  std::vector<NodeId> out;
  for (const auto& v : g.preorder())
    if (g.concept_of(v) == "amr-unknown") out.push_back(v);
  return out;
}

nlohmann::json to_json(const AmrGraph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : g.nodes()) nodes.push_back({{"var", n.var}, {"concept", n.concept_name}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    nlohmann::json target;
    if (const auto* r = std::get_if<NodeRef>(&e.target)) {
      target = {{"ref", r->var}};
    } else if (const auto* c = std::get_if<Constant>(&e.target)) {
      target = {{"const", c->text}, {"quoted", c->quoted}};
    } else {
      target = {{"number", std::get<Number>(e.target).lexical}};
    }
    edges.push_back({{"source", e.source}, {"role", e.role}, {"target", target}});
  }
  return {{"root", g.root()}, {"nodes", nodes}, {"edges", edges}};
}

AmrGraph graph_from_json(const nlohmann::json& j) {
  try {
    std::vector<AmrNode> nodes;
    for (const auto& n : j.at("nodes"))
      nodes.push_back({n.at("var").get<std::string>(), n.at("concept").get<std::string>()});
    std::vector<AmrEdge> edges;
    for (const auto& e : j.at("edges")) {
      const auto& t = e.at("target");
      NodeTarget target;
      if (t.contains("ref")) {
        target = NodeRef{t.at("ref").get<std::string>()};
      } else if (t.contains("const")) {
        target = Constant{t.at("const").get<std::string>(), t.value("quoted", true)};
      } else if (t.contains("number")) {
        auto lex = t.at("number").get<std::string>();
        if (!is_number(lex)) throw FormatError("invalid number '" + lex + "'");
        target = Number{lex};
      } else {
        throw FormatError("edge target needs 'ref', 'const' or 'number'");
      }
      edges.push_back({e.at("source").get<std::string>(),
                       lower(e.at("role").get<std::string>()), std::move(target)});
    }
    return AmrGraph(j.at("root").get<std::string>(), std::move(nodes), std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("malformed graph JSON: ") + ex.what());
  }
}

}  // namespace kbqa::amr
