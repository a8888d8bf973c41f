#pragma once

// Counting queries over a preprocessed circuit.
//
// A query fixes some variables (included = true, excluded = false). Literal
// nodes contradicting the query count 0, all other literals count 1, and the
// circuit is re-evaluated bottom-up. The optimizations below only change how
// much of the circuit is re-evaluated, never the result.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <vector>

#include "circuit.hpp"

namespace ddnnf {

struct OptimizationConfig {
  bool reuse_subtrees = true;       // cache values of shared subcircuits
  bool iterative_traversal = true;  // evaluate the flat list instead of recursing
  bool partial_traversal = true;    // only re-evaluate ancestors of changed literals
  bool partial_calculation = true;  // fold cached And values when few children changed
  bool core_dead_shortcuts = true;
  bool or_folding = false;          // also fold Or values (needs partial_calculation)
  // Queries fixing more than this fraction of the variables skip marking and
  // re-evaluate everything. Single-literal queries always use marking.
  double traversal_bypass_fraction = 0.2;

  static OptimizationConfig naive() {
    return {false, false, false, false, false, false, 0.2};
  }
  static OptimizationConfig reusing_subtrees() {
    return {true, false, false, false, false, false, 0.2};
  }
  static OptimizationConfig no_partial_traversal() {
    auto c = full();
    c.partial_traversal = false;
    return c;
  }
  static OptimizationConfig no_partial_calculation() {
    auto c = full();
    c.partial_calculation = false;
    return c;
  }
  static OptimizationConfig no_core_dead() {
    auto c = full();
    c.core_dead_shortcuts = false;
    return c;
  }
  static OptimizationConfig full() { return {}; }
};

struct NamedVariant {
  std::string_view name;
  OptimizationConfig config;
};

inline std::vector<NamedVariant> optimization_variants() {
  return {
      {"Naive", OptimizationConfig::naive()},
      {"ReusingSubtrees", OptimizationConfig::reusing_subtrees()},
      {"NoPartialTraversal", OptimizationConfig::no_partial_traversal()},
      {"NoPartialCalculation", OptimizationConfig::no_partial_calculation()},
      {"NoCoreDead", OptimizationConfig::no_core_dead()},
      {"Full", OptimizationConfig::full()},
  };
}

enum class Strategy { Shortcut, Partial, Full, Contradiction };

inline std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Shortcut: return "shortcut";
    case Strategy::Partial: return "partial";
    case Strategy::Full: return "full";
    case Strategy::Contradiction: return "contradiction";
  }
  return "?";
}

struct QueryResult {
  Count count = 0;
  std::size_t nodes_visited = 0;
  std::size_t nodes_marked = 0;
  Strategy strategy = Strategy::Full;
};

inline int literal_value_feature(Literal lit, Var feature) {
  return lit.var == feature && !lit.positive ? 0 : 1;
}

inline int literal_value_config(Literal lit, const Assumptions& a) {
  if (!lit.positive && a.includes(lit.var)) return 0;
  if (lit.positive && a.excludes(lit.var)) return 0;
  return 1;
}

// old_value * prod(new) / prod(old) over the changed children of an And.
// Requires fewer than arity/2 changed children, all with nonzero old values.
inline Count recompute_and_partial(const Count& old_value, std::span<const std::pair<Count, Count>> changed,
                                   std::size_t arity) {
  if (2 * changed.size() >= arity)
    throw std::invalid_argument("folding needs fewer than half of the children changed");
  Count num = old_value, den = 1;
  for (const auto& [old_child, new_child] : changed) {
    if (old_child == 0) throw Error(Errc::ZeroOldChild, "cannot divide by a zero child value");
    num *= new_child;
    den *= old_child;
  }
  return num / den;
}

struct FoldResult {
  Count value;
  bool folded = false;
};

// And value after some children changed: folds the cached value when that is
// cheaper and well defined, otherwise multiplies all children.
inline FoldResult fold_and(const Count& old_value, std::span<const Count> old_children,
                           std::span<const Count> new_children) {
  std::vector<std::pair<Count, Count>> changed;
  bool zero_old = false;
  for (std::size_t i = 0; i < old_children.size(); ++i) {
    if (old_children[i] == new_children[i]) continue;
    if (old_children[i] == 0) zero_old = true;
    changed.emplace_back(old_children[i], new_children[i]);
  }
  if (!zero_old && 2 * changed.size() < old_children.size())
    return {recompute_and_partial(old_value, changed, old_children.size()), true};
  Count v = 1;
  for (const auto& c : new_children) v *= c;
  return {std::move(v), false};
}

// Per-query working memory, indexed by node id. Reusable across queries.
struct Scratch {
  std::vector<Count> values;
  std::vector<char> marked;
  std::vector<NodeId> marked_list;

  void reset(std::size_t n) {
    if (marked.size() != n) {
      marked.assign(n, 0);
      values.resize(n);
    } else {
      for (auto i : marked_list) marked[i] = 0;
    }
    marked_list.clear();
  }
};

namespace detail {

inline void require_preprocessed(const Ddnnf& d) {
  if (!d.preprocessed) throw std::logic_error("circuit must be preprocessed before querying");
}

inline void mark_from(const Ddnnf& d, std::span<const Literal> zero_literals, Scratch& s) {
  std::vector<NodeId> stack;
  for (auto l : zero_literals)
    for (NodeId id : d.literal_index[l])
      if (!s.marked[id]) {
        s.marked[id] = 1;
        s.marked_list.push_back(id);
        stack.push_back(id);
      }
  while (!stack.empty()) {
    NodeId i = stack.back();
    stack.pop_back();
    for (NodeId p : d.nodes[i].parents)
      if (!s.marked[p]) {
        s.marked[p] = 1;
        s.marked_list.push_back(p);
        stack.push_back(p);
      }
  }
  std::sort(s.marked_list.begin(), s.marked_list.end());
}

inline Count literal_or_constant(const Node& n, const Assumptions& a) {
  switch (n.kind) {
    case NodeKind::Literal: return literal_value_config(n.literal, a);
    case NodeKind::True: return 1;
    default: return 0;
  }
}

// Whole-circuit evaluation over the flat list.
inline Count evaluate_iterative(const Ddnnf& d, const Assumptions& a, Scratch& s) {
  auto& vals = s.values;
  for (NodeId i = 0; i < d.size(); ++i) {
    const auto& n = d.nodes[i];
    if (n.kind == NodeKind::And) {
      Count v = 1;
      for (NodeId c : n.children) {
        v *= vals[c];
        if (v == 0) break;
      }
      vals[i] = std::move(v);
    } else if (n.kind == NodeKind::Or) {
      Count v = 0;
      for (NodeId c : n.children) v += vals[c];
      vals[i] = std::move(v);
    } else {
      vals[i] = literal_or_constant(n, a);
    }
  }
  return vals[d.root];
}

// Top-down evaluation with an explicit stack. Without `memo` every path
// through a shared subcircuit is evaluated again.
inline Count evaluate_recursive(const Ddnnf& d, const Assumptions& a, bool memo, std::size_t& visited) {
  struct Frame {
    NodeId node;
    std::size_t next = 0;
    Count acc;
  };
  std::vector<char> done(memo ? d.size() : 0, 0);
  std::vector<Count> cache(memo ? d.size() : 0);
  std::vector<Frame> stack;
  Count result;

  auto enter = [&](NodeId i) -> std::optional<Count> {
    if (memo && done[i]) return cache[i];
    ++visited;
    const auto& n = d.nodes[i];
    if (!n.is_inner()) {
      Count v = literal_or_constant(n, a);
      if (memo) {
        done[i] = 1;
        cache[i] = v;
      }
      return v;
    }
    stack.push_back({i, 0, n.kind == NodeKind::And ? Count(1) : Count(0)});
    return std::nullopt;
  };
  auto deliver = [&](Count v) {
    if (stack.empty()) {
      result = std::move(v);
      return;
    }
    auto& f = stack.back();
    if (d.nodes[f.node].kind == NodeKind::And)
      f.acc *= v;
    else
      f.acc += v;
  };

  if (auto v = enter(d.root)) return *v;
  while (!stack.empty()) {
    auto& f = stack.back();
    const auto& ch = d.nodes[f.node].children;
    if (f.next < ch.size()) {
      NodeId c = ch[f.next++];
      if (auto v = enter(c)) deliver(std::move(*v));
      continue;
    }
    NodeId id = f.node;
    Count v = std::move(f.acc);
    stack.pop_back();
    if (memo) {
      done[id] = 1;
      cache[id] = v;
    }
    deliver(std::move(v));
  }
  return result;
}

// Re-evaluates only marked nodes; unmarked children contribute their baseline.
inline Count evaluate_marked(const Ddnnf& d, const OptimizationConfig& cfg, Scratch& s) {
  auto value_of = [&](NodeId c) -> const Count& { return s.marked[c] ? s.values[c] : d.nodes[c].baseline; };
  std::vector<Count> olds, news;
  for (NodeId i : s.marked_list) {
    const auto& n = d.nodes[i];
    if (n.kind == NodeKind::Literal) {
      s.values[i] = 0;
      continue;
    }
    if (n.kind == NodeKind::And) {
      if (cfg.partial_calculation) {
        olds.clear();
        news.clear();
        for (NodeId c : n.children) {
          olds.push_back(d.nodes[c].baseline);
          news.push_back(value_of(c));
        }
        s.values[i] = fold_and(n.baseline, olds, news).value;
      } else {
        Count v = 1;
        for (NodeId c : n.children) v *= value_of(c);
        s.values[i] = std::move(v);
      }
    } else if (n.kind == NodeKind::Or) {
      std::size_t changed = 0;
      for (NodeId c : n.children) changed += s.marked[c];
      if (cfg.partial_calculation && cfg.or_folding && 2 * changed < n.children.size()) {
        Count v = n.baseline;
        for (NodeId c : n.children)
          if (s.marked[c]) v += s.values[c] - d.nodes[c].baseline;
        s.values[i] = std::move(v);
      } else {
        Count v = 0;
        for (NodeId c : n.children) v += value_of(c);
        s.values[i] = std::move(v);
      }
    }
  }
  return value_of(d.root);
}

}  // namespace detail

// Exactly the nodes on a path from a node of one of `zero_literals` up to
// the root, ascending. Needs linked parents and a literal index.
inline std::vector<NodeId> mark_ancestors(const Ddnnf& d, std::span<const Literal> zero_literals) {
  Scratch s;
  s.reset(d.size());
  detail::mark_from(d, zero_literals, s);
  return s.marked_list;
}

inline Count count_total(const Ddnnf& d) {
  detail::require_preprocessed(d);
  return d.nodes[d.root].baseline * d.omitted_factor;
}

inline QueryResult query(const Ddnnf& d, const Assumptions& a, const OptimizationConfig& cfg, Scratch& s) {
  detail::require_preprocessed(d);
  for (const auto* side : {&a.included(), &a.excluded()})
    for (Var v : *side)
      if (v == 0 || v > d.num_variables) throw Error(Errc::VariableOutOfRange, std::to_string(v));

  if (a.contradictory()) return {0, 0, 0, Strategy::Contradiction};
  if (cfg.core_dead_shortcuts) {
    for (Var v : a.included())
      if (d.is_dead(v)) return {0, 0, 0, Strategy::Shortcut};
    for (Var v : a.excluded())
      if (d.is_core(v)) return {0, 0, 0, Strategy::Shortcut};
  }

  // Literals that the query forces to 0. Omitted variables have no literal
  // nodes; each one fixed by the query halves the omitted factor instead.
  std::vector<Literal> zeroed;
  std::size_t fixed_omitted = 0;
  for (Var v : a.included()) {
    if (d.is_omitted(v))
      ++fixed_omitted;
    else if (!(cfg.core_dead_shortcuts && d.is_core(v)))
      zeroed.push_back({v, false});
  }
  for (Var v : a.excluded()) {
    if (d.is_omitted(v))
      ++fixed_omitted;
    else if (!(cfg.core_dead_shortcuts && d.is_dead(v)))
      zeroed.push_back({v, true});
  }
  Count factor = d.omitted_factor >> fixed_omitted;

  QueryResult r;
  if (zeroed.empty() && cfg.core_dead_shortcuts) {
    r.count = d.nodes[d.root].baseline * factor;
    r.strategy = Strategy::Shortcut;
    return r;
  }

  if (!cfg.iterative_traversal && !cfg.partial_traversal) {
    r.count = detail::evaluate_recursive(d, a, cfg.reuse_subtrees, r.nodes_visited) * factor;
    r.strategy = Strategy::Full;
    return r;
  }

  s.reset(d.size());
  double limit = std::max(1.0, cfg.traversal_bypass_fraction * static_cast<double>(d.num_variables));
  if (cfg.partial_traversal && static_cast<double>(zeroed.size()) <= limit) {
    detail::mark_from(d, zeroed, s);
    r.nodes_marked = s.marked_list.size();
    r.nodes_visited = s.marked_list.size();
    r.count = detail::evaluate_marked(d, cfg, s) * factor;
    r.strategy = Strategy::Partial;
    return r;
  }
  r.nodes_visited = d.size();
  r.count = detail::evaluate_iterative(d, a, s) * factor;
  r.strategy = Strategy::Full;
  return r;
}

inline QueryResult query(const Ddnnf& d, const Assumptions& a, const OptimizationConfig& cfg = {}) {
  Scratch s;
  return query(d, a, cfg, s);
}

inline Count count_feature(const Ddnnf& d, Var f, const OptimizationConfig& cfg = {}) {
  return query(d, Assumptions({f}, {}), cfg).count;
}

// Runs `fn(i, scratch)` for i in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    Scratch s;
    for (std::size_t i = 0; i < n; ++i) fn(i, s);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      Scratch s;
      for (std::size_t i; !failed && (i = next++) < n;) {
        try {
          fn(i, s);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

// Answers in input order regardless of thread count.
inline std::vector<QueryResult> query_batch(const Ddnnf& d, std::span<const Assumptions> batch,
                                            const OptimizationConfig& cfg = {}, unsigned threads = 1) {
  std::vector<QueryResult> out(batch.size());
  parallel_for(batch.size(), threads, [&](std::size_t i, Scratch& s) { out[i] = query(d, batch[i], cfg, s); });
  return out;
}

inline std::vector<std::pair<Var, Count>> count_all_features(const Ddnnf& d, const OptimizationConfig& cfg = {},
                                                             unsigned threads = 1) {
  detail::require_preprocessed(d);
  std::vector<std::pair<Var, Count>> out(d.num_variables);
  parallel_for(d.num_variables, threads, [&](std::size_t i, Scratch& s) {
    Var v = static_cast<Var>(i + 1);
    out[i] = {v, query(d, Assumptions({v}, {}), cfg, s).count};
  });
  return out;
}

}  // namespace ddnnf
