#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "count.hpp"
#include "error.hpp"

namespace ddnnf {

using Var = std::uint32_t;
using NodeId = std::uint32_t;

struct Literal {
  Var var = 0;
  bool positive = true;

  static Literal from_int(long long v) {
    return Literal{static_cast<Var>(v < 0 ? -v : v), v > 0};
  }
  long long to_int() const { return positive ? static_cast<long long>(var) : -static_cast<long long>(var); }
  Literal negated() const { return Literal{var, !positive}; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

enum class NodeKind : std::uint8_t { And, Or, Literal, True, False };

struct Node {
  NodeKind kind = NodeKind::True;
  Literal literal{};        // Literal nodes only
  Var decision = 0;         // Or nodes: c2d decision variable, 0 = none
  std::vector<NodeId> children;
  std::vector<NodeId> parents;
  Count baseline = 0;

  static Node make_literal(Literal l) {
    Node n;
    n.kind = NodeKind::Literal;
    n.literal = l;
    return n;
  }
  static Node make_true() { return Node{}; }
  static Node make_false() {
    Node n;
    n.kind = NodeKind::False;
    return n;
  }
  static Node make_and(std::vector<NodeId> children) {
    if (children.empty()) return make_true();
    Node n;
    n.kind = NodeKind::And;
    n.children = std::move(children);
    return n;
  }
  static Node make_or(std::vector<NodeId> children, Var decision = 0) {
    if (children.empty()) return make_false();
    Node n;
    n.kind = NodeKind::Or;
    n.decision = decision;
    n.children = std::move(children);
    return n;
  }

  bool is_literal() const { return kind == NodeKind::Literal; }
  bool is_inner() const { return kind == NodeKind::And || kind == NodeKind::Or; }
};

// Node ids holding each signed literal. Slot 2v is +v, 2v+1 is -v.
class LiteralIndex {
 public:
  LiteralIndex() = default;
  explicit LiteralIndex(Var num_variables) : slots_(2 * (static_cast<std::size_t>(num_variables) + 1)) {}

  std::span<const NodeId> operator[](Literal l) const {
    auto s = slot(l);
    if (s >= slots_.size()) return {};
    return slots_[s];
  }
  bool contains(Literal l) const { return !(*this)[l].empty(); }
  void add(Literal l, NodeId id) { slots_.at(slot(l)).push_back(id); }
  bool empty() const { return slots_.empty(); }

 private:
  static std::size_t slot(Literal l) { return 2 * static_cast<std::size_t>(l.var) + (l.positive ? 0 : 1); }
  std::vector<std::vector<NodeId>> slots_;
};

// A d-DNNF stored as a flat list in which every child precedes its parents.
struct Ddnnf {
  std::vector<Node> nodes;
  NodeId root = 0;
  Var num_variables = 0;
  LiteralIndex literal_index;
  std::vector<Var> core;
  std::vector<Var> dead;
  std::vector<Var> omitted;  // variables in 1..n with no literal node
  Count omitted_factor = 1;  // 2^|omitted|
  bool preprocessed = false;

  std::size_t size() const { return nodes.size(); }
  const Node& operator[](NodeId i) const { return nodes[i]; }
  Node& operator[](NodeId i) { return nodes[i]; }

  bool is_core(Var v) const { return std::binary_search(core.begin(), core.end(), v); }
  bool is_dead(Var v) const { return std::binary_search(dead.begin(), dead.end(), v); }
  bool is_omitted(Var v) const { return std::binary_search(omitted.begin(), omitted.end(), v); }
};

// Recomputes `omitted` and `omitted_factor` from the literal nodes present.
inline void refresh_omitted(Ddnnf& d) {
  std::vector<char> seen(static_cast<std::size_t>(d.num_variables) + 1, 0);
  for (const auto& n : d.nodes)
    if (n.is_literal() && n.literal.var <= d.num_variables) seen[n.literal.var] = 1;
  d.omitted.clear();
  for (Var v = 1; v <= d.num_variables; ++v)
    if (!seen[v]) d.omitted.push_back(v);
  d.omitted_factor = pow2(d.omitted.size());
}

namespace detail {

// Drops nodes not reachable from `root`, keeping relative order. Requires
// children to precede parents. The root ends up last.
inline Ddnnf compact(std::vector<Node> nodes, NodeId root, Var num_variables) {
  std::vector<char> live(nodes.size(), 0);
  live[root] = 1;
  for (std::size_t i = root + 1; i-- > 0;) {
    if (!live[i]) continue;
    for (NodeId c : nodes[i].children) live[c] = 1;
  }
  std::vector<NodeId> remap(nodes.size(), 0);
  Ddnnf d;
  d.num_variables = num_variables;
  for (std::size_t i = 0; i <= root; ++i) {
    if (!live[i]) continue;
    remap[i] = static_cast<NodeId>(d.nodes.size());
    Node n = std::move(nodes[i]);
    for (auto& c : n.children) c = remap[c];
    n.parents.clear();
    d.nodes.push_back(std::move(n));
  }
  d.root = static_cast<NodeId>(d.nodes.size() - 1);
  refresh_omitted(d);
  return d;
}

}  // namespace detail

// Programmatic circuit construction, mostly for tests and generators.
class Builder {
 public:
  explicit Builder(Var num_variables) : num_variables_(num_variables) {}

  NodeId literal(long long lit) {
    auto l = Literal::from_int(lit);
    if (l.var == 0 || l.var > num_variables_)
      throw Error(Errc::LiteralOutOfRange, std::to_string(lit));
    return push(Node::make_literal(l));
  }
  NodeId top() { return push(Node::make_true()); }
  NodeId bottom() { return push(Node::make_false()); }
  NodeId conj(std::vector<NodeId> children) { return push(Node::make_and(checked(std::move(children)))); }
  NodeId disj(std::vector<NodeId> children, Var decision = 0) {
    return push(Node::make_or(checked(std::move(children)), decision));
  }

  std::size_t size() const { return nodes_.size(); }

  Ddnnf build(NodeId root) && {
    if (nodes_.empty()) throw Error(Errc::EmptyCircuit, "builder has no nodes");
    if (root >= nodes_.size()) throw Error(Errc::IndexOutOfRange, "root " + std::to_string(root));
    return detail::compact(std::move(nodes_), root, num_variables_);
  }
  Ddnnf build() && {
    if (nodes_.empty()) throw Error(Errc::EmptyCircuit, "builder has no nodes");
    auto root = static_cast<NodeId>(nodes_.size() - 1);
    return std::move(*this).build(root);
  }

 private:
  std::vector<NodeId> checked(std::vector<NodeId> children) const {
    for (auto c : children)
      if (c >= nodes_.size()) throw Error(Errc::IndexOutOfRange, "child " + std::to_string(c));
    return children;
  }
  NodeId push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  Var num_variables_;
  std::vector<Node> nodes_;
};

// Included (I) and excluded (E) variables of a query. I and E may overlap;
// such a query is contradictory and counts 0.
class Assumptions {
 public:
  Assumptions() = default;
  Assumptions(std::vector<Var> included, std::vector<Var> excluded)
      : included_(normalize(std::move(included))), excluded_(normalize(std::move(excluded))) {}

  static Assumptions from_literals(std::span<const long long> lits) {
    std::vector<Var> inc, exc;
    for (auto l : lits) (l > 0 ? inc : exc).push_back(static_cast<Var>(l > 0 ? l : -l));
    return {std::move(inc), std::move(exc)};
  }
  static Assumptions from_literals(std::initializer_list<long long> lits) {
    return from_literals(std::span<const long long>(lits.begin(), lits.size()));
  }

  const std::vector<Var>& included() const { return included_; }
  const std::vector<Var>& excluded() const { return excluded_; }

  bool includes(Var v) const { return std::binary_search(included_.begin(), included_.end(), v); }
  bool excludes(Var v) const { return std::binary_search(excluded_.begin(), excluded_.end(), v); }

  bool contradictory() const {
    std::vector<Var> both;
    std::set_intersection(included_.begin(), included_.end(), excluded_.begin(), excluded_.end(),
                          std::back_inserter(both));
    return !both.empty();
  }
  bool empty() const { return included_.empty() && excluded_.empty(); }
  std::size_t size() const { return included_.size() + excluded_.size(); }

  // Signed literals sorted by variable, positive before negative.
  std::vector<long long> literals() const {
    std::vector<long long> out;
    for (auto v : included_) out.push_back(v);
    for (auto v : excluded_) out.push_back(-static_cast<long long>(v));
    std::sort(out.begin(), out.end(), [](long long a, long long b) {
      auto aa = std::llabs(a), bb = std::llabs(b);
      return aa != bb ? aa < bb : a > b;
    });
    return out;
  }

  Assumptions with(Literal l) const {
    Assumptions a = *this;
    auto& side = l.positive ? a.included_ : a.excluded_;
    side.push_back(l.var);
    side = normalize(std::move(side));
    return a;
  }

  std::string to_string() const {
    std::string s;
    for (auto l : literals()) {
      if (!s.empty()) s += ' ';
      s += std::to_string(l);
    }
    return s;
  }

  friend bool operator==(const Assumptions&, const Assumptions&) = default;

 private:
  static std::vector<Var> normalize(std::vector<Var> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  std::vector<Var> included_;
  std::vector<Var> excluded_;
};

// Bit v is set iff variable v occurs below the node.
using VarSet = boost::dynamic_bitset<>;

inline std::vector<Var> to_vars(const VarSet& s) {
  std::vector<Var> out;
  for (auto i = s.find_first(); i != VarSet::npos; i = s.find_next(i)) out.push_back(static_cast<Var>(i));
  return out;
}

// Variable sets of every node in one forward pass. Requires topological order.
inline std::vector<VarSet> variable_sets(const Ddnnf& d) {
  std::vector<VarSet> sets(d.size(), VarSet(static_cast<std::size_t>(d.num_variables) + 1));
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& n = d.nodes[i];
    if (n.is_literal()) {
      if (n.literal.var < sets[i].size()) sets[i].set(n.literal.var);
      continue;
    }
    for (NodeId c : n.children) sets[i] |= sets[c];
  }
  return sets;
}

inline VarSet variable_set(const Ddnnf& d, NodeId node) {
  if (node >= d.size()) throw Error(Errc::IndexOutOfRange, "node " + std::to_string(node));
  VarSet out(static_cast<std::size_t>(d.num_variables) + 1);
  std::vector<char> seen(d.size(), 0);
  std::vector<NodeId> stack{node};
  seen[node] = 1;
  while (!stack.empty()) {
    NodeId i = stack.back();
    stack.pop_back();
    const auto& n = d.nodes[i];
    if (n.is_literal() && n.literal.var < out.size()) out.set(n.literal.var);
    for (NodeId c : n.children)
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
  }
  return out;
}

struct Violation {
  enum class Kind { DanglingChild, Cycle, OrderViolation, Arity, Decomposability, Smoothness };
  Kind kind;
  NodeId node;
  std::string detail;
};

inline std::string_view violation_name(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::DanglingChild: return "dangling-child";
    case Violation::Kind::Cycle: return "cycle";
    case Violation::Kind::OrderViolation: return "order";
    case Violation::Kind::Arity: return "arity";
    case Violation::Kind::Decomposability: return "decomposability";
    case Violation::Kind::Smoothness: return "smoothness";
  }
  return "unknown";
}

namespace detail {

inline bool has_cycle(const Ddnnf& d) {
  enum : char { White, Grey, Black };
  std::vector<char> color(d.size(), White);
  std::vector<std::pair<NodeId, std::size_t>> stack;
  for (NodeId s = 0; s < d.size(); ++s) {
    if (color[s] != White) continue;
    stack.emplace_back(s, 0);
    color[s] = Grey;
    while (!stack.empty()) {
      auto& [i, next] = stack.back();
      const auto& ch = d.nodes[i].children;
      if (next == ch.size()) {
        color[i] = Black;
        stack.pop_back();
        continue;
      }
      NodeId c = ch[next++];
      if (c >= d.size()) continue;
      if (color[c] == Grey) return true;
      if (color[c] == White) {
        color[c] = Grey;
        stack.emplace_back(c, 0);
      }
    }
  }
  return false;
}

// Or children that are the constant False never need smoothing.
inline bool exempt_from_smoothing(const Ddnnf& d, NodeId child) {
  return d.nodes[child].kind == NodeKind::False;
}

}  // namespace detail

// Structural and semantic checks. Determinism is not checked.
inline std::vector<Violation> validate(const Ddnnf& d) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  bool structural_ok = true;
  for (NodeId i = 0; i < d.size(); ++i) {
    const auto& n = d.nodes[i];
    if (n.is_inner() == n.children.empty()) {
      out.push_back({K::Arity, i, "node kind and child count disagree"});
      structural_ok = false;
    }
    for (NodeId c : n.children) {
      if (c >= d.size()) {
        out.push_back({K::DanglingChild, i, "child " + std::to_string(c)});
        structural_ok = false;
      } else if (c >= i) {
        structural_ok = false;
      }
    }
  }
  if (!structural_ok) {
    if (detail::has_cycle(d)) {
      out.push_back({K::Cycle, 0, "children relation is cyclic"});
    } else {
      for (NodeId i = 0; i < d.size(); ++i)
        for (NodeId c : d.nodes[i].children)
          if (c < d.size() && c >= i) out.push_back({K::OrderViolation, i, "child " + std::to_string(c)});
    }
    return out;
  }

  auto sets = variable_sets(d);
  for (NodeId i = 0; i < d.size(); ++i) {
    const auto& n = d.nodes[i];
    if (n.kind == NodeKind::And) {
      VarSet seen(sets[i].size());
      for (NodeId c : n.children) {
        if (seen.intersects(sets[c])) {
          out.push_back({K::Decomposability, i, "children share variables"});
          break;
        }
        seen |= sets[c];
      }
    } else if (n.kind == NodeKind::Or) {
      for (NodeId c : n.children) {
        if (detail::exempt_from_smoothing(d, c)) continue;
        if (sets[c] != sets[i]) {
          out.push_back({K::Smoothness, i, "child " + std::to_string(c) + " misses variables"});
          break;
        }
      }
    }
  }
  return out;
}

inline bool has_violation(const std::vector<Violation>& vs, Violation::Kind k) {
  return std::any_of(vs.begin(), vs.end(), [k](const Violation& v) { return v.kind == k; });
}

}  // namespace ddnnf
