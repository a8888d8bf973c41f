#pragma once

// Readers and writers for the c2d and d4 d-DNNF file formats.
//
// c2d:  "nnf v e n" header, then one record per line, addressed by record
//       index (first record is 0): "L x", "A k c1..ck", "O d k c1..ck".
//       The last record is the root.
// d4:   node declarations "o|a|t|f id 0" and edges "p c lit* 0". An edge
//       with literals denotes child AND literals as one operand of p.
//
// Text after '#' is ignored in both formats.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "circuit.hpp"

namespace ddnnf {

enum class Format { C2d, D4 };

namespace detail {

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    auto eol = text.find('\n');
    auto raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
      auto start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') ++i;
      if (i > start) line.tokens.push_back(raw.substr(start, i - start));
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

template <class Int>
Int parse_int(std::string_view tok, std::size_t line, Errc code = Errc::MalformedLine) {
  Int v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw Error(code, "expected integer, got '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace detail

inline Format detect_format(std::string_view text) {
  auto lines = detail::tokenize(text);
  if (lines.empty()) throw Error(Errc::EmptyInput, "no content");
  return lines.front().tokens.front() == "nnf" ? Format::C2d : Format::D4;
}

inline Ddnnf parse_c2d(std::string_view text, std::optional<Var> num_variables_override = std::nullopt) {
  using detail::parse_int;
  auto lines = detail::tokenize(text);
  if (lines.empty()) throw Error(Errc::EmptyInput, "no content");

  const auto& header = lines.front();
  if (header.tokens.size() != 4 || header.tokens[0] != "nnf")
    throw Error(Errc::MalformedHeader, "expected 'nnf v e n'", header.number);
  // The declared node and edge counts are checked for form only; files in
  // the wild (dSharp output among them) often get them wrong.
  parse_int<std::size_t>(header.tokens[1], header.number, Errc::MalformedHeader);
  parse_int<std::size_t>(header.tokens[2], header.number, Errc::MalformedHeader);
  auto n = parse_int<Var>(header.tokens[3], header.number, Errc::MalformedHeader);
  if (num_variables_override) n = *num_variables_override;

  std::size_t records = lines.size() - 1;
  if (records == 0) throw Error(Errc::EmptyCircuit, "no node records", header.number);

  std::vector<Node> nodes;
  nodes.reserve(records);
  for (std::size_t r = 0; r < records; ++r) {
    const auto& line = lines[r + 1];
    const auto& t = line.tokens;
    auto children_from = [&](std::size_t first) {
      auto k = parse_int<std::size_t>(t[first - 1], line.number);
      if (t.size() != first + k) throw Error(Errc::MalformedLine, "child count mismatch", line.number);
      std::vector<NodeId> ch;
      ch.reserve(k);
      for (std::size_t j = first; j < t.size(); ++j) {
        auto c = parse_int<std::size_t>(t[j], line.number);
        if (c >= r)
          throw Error(Errc::IndexOutOfRange, "child " + std::to_string(c) + " of record " + std::to_string(r),
                      line.number);
        ch.push_back(static_cast<NodeId>(c));
      }
      return ch;
    };

    if (t[0] == "L") {
      if (t.size() != 2) throw Error(Errc::MalformedLine, "expected 'L x'", line.number);
      auto x = parse_int<long long>(t[1], line.number);
      auto l = Literal::from_int(x);
      if (l.var == 0 || l.var > n) throw Error(Errc::LiteralOutOfRange, std::string(t[1]), line.number);
      nodes.push_back(Node::make_literal(l));
    } else if (t[0] == "A") {
      if (t.size() < 2) throw Error(Errc::MalformedLine, "expected 'A k ...'", line.number);
      nodes.push_back(Node::make_and(children_from(2)));
    } else if (t[0] == "O") {
      if (t.size() < 3) throw Error(Errc::MalformedLine, "expected 'O d k ...'", line.number);
      auto dec = parse_int<Var>(t[1], line.number);
      nodes.push_back(Node::make_or(children_from(3), dec));
    } else {
      throw Error(Errc::MalformedLine, "unknown record '" + std::string(t[0]) + "'", line.number);
    }
  }
  auto root = static_cast<NodeId>(nodes.size() - 1);
  return detail::compact(std::move(nodes), root, n);
}

inline Ddnnf parse_d4(std::string_view text, Var num_variables) {
  using detail::parse_int;
  auto lines = detail::tokenize(text);
  if (lines.empty()) throw Error(Errc::EmptyInput, "no content");

  // Working graph: declared nodes first, literal and implicit And nodes
  // appended as edges introduce them.
  std::vector<Node> g;
  std::unordered_map<long long, NodeId> declared;
  std::unordered_map<long long, NodeId> literal_nodes;
  std::vector<long long> declared_id;  // by working index, 0 for synthetic nodes
  std::vector<char> has_parent;

  auto add = [&](Node n, long long id) {
    g.push_back(std::move(n));
    declared_id.push_back(id);
    has_parent.push_back(0);
    return static_cast<NodeId>(g.size() - 1);
  };
  auto literal = [&](long long x, std::size_t line) {
    auto l = Literal::from_int(x);
    if (l.var == 0 || l.var > num_variables)
      throw Error(Errc::LiteralOutOfRange, std::to_string(x), line);
    auto [it, fresh] = literal_nodes.try_emplace(x, 0);
    if (fresh) it->second = add(Node::make_literal(l), 0);
    return it->second;
  };

  struct Edge {
    long long parent, child;
    std::vector<long long> lits;
    std::size_t line;
  };
  std::vector<Edge> edges;

  for (const auto& line : lines) {
    const auto& t = line.tokens;
    if (t.back() != "0") throw Error(Errc::MissingSentinel, "", line.number);
    const auto& head = t[0];
    if (head == "o" || head == "a" || head == "t" || head == "f") {
      if (t.size() != 3) throw Error(Errc::MalformedLine, "expected '<kind> <id> 0'", line.number);
      auto id = parse_int<long long>(t[1], line.number);
      if (id <= 0) throw Error(Errc::MalformedLine, "node ids must be positive", line.number);
      if (declared.contains(id))
        throw Error(Errc::MalformedLine, "node " + std::to_string(id) + " declared twice", line.number);
      Node n;
      n.kind = head == "o"   ? NodeKind::Or
               : head == "a" ? NodeKind::And
               : head == "t" ? NodeKind::True
                             : NodeKind::False;
      declared[id] = add(std::move(n), id);
    } else {
      if (t.size() < 3) throw Error(Errc::MalformedLine, "expected 'p c lit* 0'", line.number);
      Edge e{parse_int<long long>(t[0], line.number), parse_int<long long>(t[1], line.number), {}, line.number};
      for (std::size_t j = 2; j + 1 < t.size(); ++j) {
        auto x = parse_int<long long>(t[j], line.number);
        if (x == 0) throw Error(Errc::MalformedLine, "literal 0 before end of line", line.number);
        e.lits.push_back(x);
      }
      edges.push_back(std::move(e));
    }
  }
  if (declared.empty()) throw Error(Errc::EmptyCircuit, "no node declarations");

  for (const auto& e : edges) {
    auto p = declared.find(e.parent);
    if (p == declared.end()) throw Error(Errc::UnknownNodeIndex, std::to_string(e.parent), e.line);
    auto c = declared.find(e.child);
    if (c == declared.end()) throw Error(Errc::UnknownNodeIndex, std::to_string(e.child), e.line);
    auto& pk = g[p->second].kind;
    if (pk != NodeKind::And && pk != NodeKind::Or)
      throw Error(Errc::MalformedLine, "edge from a constant node", e.line);
    NodeId operand = c->second;
    has_parent[operand] = 1;
    if (!e.lits.empty()) {
      std::vector<NodeId> parts{operand};
      for (auto x : e.lits) {
        auto l = literal(x, e.line);
        has_parent[l] = 1;
        parts.push_back(l);
      }
      operand = add(Node::make_and(std::move(parts)), 0);
      has_parent[operand] = 1;
    }
    g[p->second].children.push_back(operand);
  }
  // Inner nodes without edges degenerate to constants.
  for (auto& n : g) {
    if (n.kind == NodeKind::And && n.children.empty()) n.kind = NodeKind::True;
    if (n.kind == NodeKind::Or && n.children.empty()) n.kind = NodeKind::False;
  }

  std::optional<NodeId> root;
  if (auto one = declared.find(1); one != declared.end() && !has_parent[one->second]) {
    root = one->second;
  } else {
    for (const auto& [id, idx] : declared) {
      if (has_parent[idx]) continue;
      if (root) throw Error(Errc::AmbiguousRoot, "several parentless nodes");
      root = idx;
    }
    if (!root) throw Error(Errc::CycleDetected, "every node has a parent");
  }

  // Post-order DFS from the root gives children-before-parents order and
  // drops unreachable nodes.
  enum : char { White, Grey, Black };
  std::vector<char> color(g.size(), White);
  std::vector<NodeId> order;
  std::vector<std::pair<NodeId, std::size_t>> stack{{*root, 0}};
  color[*root] = Grey;
  while (!stack.empty()) {
    auto& [i, next] = stack.back();
    if (next == g[i].children.size()) {
      color[i] = Black;
      order.push_back(i);
      stack.pop_back();
      continue;
    }
    NodeId c = g[i].children[next++];
    if (color[c] == Grey) {
      auto id = declared_id[c];
      throw Error(Errc::CycleDetected, id ? "through node " + std::to_string(id) : std::string{});
    }
    if (color[c] == White) {
      color[c] = Grey;
      stack.emplace_back(c, 0);
    }
  }

  std::vector<NodeId> remap(g.size(), 0);
  Ddnnf d;
  d.num_variables = num_variables;
  d.nodes.reserve(order.size());
  for (NodeId i : order) {
    remap[i] = static_cast<NodeId>(d.nodes.size());
    Node n = std::move(g[i]);
    for (auto& c : n.children) c = remap[c];
    d.nodes.push_back(std::move(n));
  }
  d.root = static_cast<NodeId>(d.nodes.size() - 1);
  refresh_omitted(d);
  return d;
}

// Parses either format; d4 needs `num_variables`, c2d treats it as an override.
inline Ddnnf parse(std::string_view text, std::optional<Format> format = std::nullopt,
                   std::optional<Var> num_variables = std::nullopt) {
  auto f = format ? *format : detect_format(text);
  if (f == Format::C2d) return parse_c2d(text, num_variables);
  if (!num_variables)
    throw Error(Errc::MalformedHeader, "d4 input requires the number of variables");
  return parse_d4(text, *num_variables);
}

inline std::string write_c2d(const Ddnnf& d) {
  std::size_t edges = 0;
  for (const auto& n : d.nodes) edges += n.children.size();
  std::string out = "nnf " + std::to_string(d.size()) + " " + std::to_string(edges) + " " +
                    std::to_string(d.num_variables) + "\n";
  auto put_children = [&](const Node& n) {
    out += std::to_string(n.children.size());
    for (auto c : n.children) {
      out += ' ';
      out += std::to_string(c);
    }
  };
  for (const auto& n : d.nodes) {
    switch (n.kind) {
      case NodeKind::Literal:
        out += "L " + std::to_string(n.literal.to_int());
        break;
      case NodeKind::And:
        out += "A ";
        put_children(n);
        break;
      case NodeKind::Or:
        out += "O " + std::to_string(n.decision) + " ";
        put_children(n);
        break;
      case NodeKind::True:
        out += "A 0";
        break;
      case NodeKind::False:
        out += "O 0 0";
        break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace ddnnf
