#pragma once

// Turns a parsed circuit into a query-ready one:
//   smooth -> link_parents -> index_literals -> compute_core_dead -> compute_baseline

#include <optional>
#include <utility>
#include <vector>

#include "circuit.hpp"

namespace ddnnf {

// One shared (v | -v) node per variable, in the smoothed circuit's ids.
struct SmoothingCache {
  std::vector<std::optional<NodeId>> gadgets;  // indexed by variable

  std::size_t size() const {
    std::size_t k = 0;
    for (const auto& g : gadgets) k += g.has_value();
    return k;
  }
};

// Conjoins every Or child that lacks some of its siblings' variables with a
// (v | -v) gadget per missing variable. Constant False children are left
// alone since their count is 0 under any completion.
inline Ddnnf smooth(const Ddnnf& d, SmoothingCache* cache_out = nullptr) {
  auto violations = validate(d);
  for (const auto& v : violations) {
    switch (v.kind) {
      case Violation::Kind::Decomposability:
        throw Error(Errc::DecomposabilityViolation, "And node " + std::to_string(v.node));
      case Violation::Kind::Cycle:
        throw Error(Errc::CycleDetected, v.detail);
      case Violation::Kind::DanglingChild:
      case Violation::Kind::OrderViolation:
      case Violation::Kind::Arity:
        throw Error(Errc::IndexOutOfRange, "node " + std::to_string(v.node) + ": " + v.detail);
      case Violation::Kind::Smoothness:
        break;
    }
  }

  auto sets = variable_sets(d);
  SmoothingCache cache;
  cache.gadgets.resize(static_cast<std::size_t>(d.num_variables) + 1);

  Ddnnf out;
  out.num_variables = d.num_variables;
  out.nodes.reserve(d.size());
  auto push = [&](Node n) {
    out.nodes.push_back(std::move(n));
    return static_cast<NodeId>(out.nodes.size() - 1);
  };
  auto gadget = [&](Var v) {
    auto& g = cache.gadgets[v];
    if (!g) {
      auto pos = push(Node::make_literal({v, true}));
      auto neg = push(Node::make_literal({v, false}));
      g = push(Node::make_or({pos, neg}, v));
    }
    return *g;
  };

  std::vector<NodeId> remap(d.size());
  for (NodeId i = 0; i < d.size(); ++i) {
    Node n = d.nodes[i];
    n.parents.clear();
    n.baseline = 0;
    for (auto& c : n.children) c = remap[c];
    if (n.kind == NodeKind::Or) {
      const auto& old_children = d.nodes[i].children;
      for (std::size_t k = 0; k < old_children.size(); ++k) {
        NodeId oc = old_children[k];
        if (detail::exempt_from_smoothing(d, oc)) continue;
        VarSet missing = sets[i] - sets[oc];
        if (missing.none()) continue;
        std::vector<NodeId> parts{n.children[k]};
        for (Var v : to_vars(missing)) parts.push_back(gadget(v));
        n.children[k] = push(Node::make_and(std::move(parts)));
      }
    }
    remap[i] = push(std::move(n));
  }
  out.root = remap[d.root];
  refresh_omitted(out);
  if (cache_out) *cache_out = std::move(cache);
  return out;
}

inline void link_parents(Ddnnf& d) {
  for (auto& n : d.nodes) n.parents.clear();
  for (NodeId i = 0; i < d.size(); ++i)
    for (NodeId c : d.nodes[i].children) {
      auto& ps = d.nodes[c].parents;
      if (ps.empty() || ps.back() != i) ps.push_back(i);
    }
  std::size_t roots = 0;
  for (const auto& n : d.nodes) roots += n.parents.empty();
  if (roots > 1) throw Error(Errc::MultipleRoots, std::to_string(roots) + " parentless nodes");
  if (!d.nodes[d.root].parents.empty()) throw Error(Errc::MultipleRoots, "declared root has parents");
}

inline void index_literals(Ddnnf& d) {
  d.literal_index = LiteralIndex(d.num_variables);
  for (NodeId i = 0; i < d.size(); ++i)
    if (d.nodes[i].is_literal()) d.literal_index.add(d.nodes[i].literal, i);
}

// Core: only positive literals of the variable occur; dead: only negative.
// Sound only on smooth circuits.
inline std::pair<std::vector<Var>, std::vector<Var>> compute_core_dead(Ddnnf& d) {
  if (has_violation(validate(d), Violation::Kind::Smoothness))
    throw Error(Errc::NotSmooth, "core/dead detection needs a smooth circuit");
  std::vector<char> pos(static_cast<std::size_t>(d.num_variables) + 1, 0);
  std::vector<char> neg(pos.size(), 0);
  for (const auto& n : d.nodes)
    if (n.is_literal()) (n.literal.positive ? pos : neg)[n.literal.var] = 1;
  d.core.clear();
  d.dead.clear();
  for (Var v = 1; v <= d.num_variables; ++v) {
    if (pos[v] && !neg[v]) d.core.push_back(v);
    if (neg[v] && !pos[v]) d.dead.push_back(v);
  }
  return {d.core, d.dead};
}

// Counts every node under no assumptions in one forward pass. Returns the
// number of nodes visited.
inline std::size_t compute_baseline(Ddnnf& d) {
  std::size_t visited = 0;
  for (auto& n : d.nodes) {
    ++visited;
    switch (n.kind) {
      case NodeKind::Literal:
      case NodeKind::True:
        n.baseline = 1;
        break;
      case NodeKind::False:
        n.baseline = 0;
        break;
      case NodeKind::And: {
        Count v = 1;
        for (NodeId c : n.children) {
          v *= d.nodes[c].baseline;
          if (v == 0) break;
        }
        n.baseline = std::move(v);
        break;
      }
      case NodeKind::Or: {
        Count v = 0;
        for (NodeId c : n.children) v += d.nodes[c].baseline;
        n.baseline = std::move(v);
        break;
      }
    }
  }
  return visited;
}

inline Ddnnf preprocess(const Ddnnf& parsed) {
  Ddnnf d = smooth(parsed);
  link_parents(d);
  index_literals(d);
  compute_core_dead(d);
  compute_baseline(d);
  d.preprocessed = true;
  return d;
}

}  // namespace ddnnf
