#pragma once

// Ground truth for the query engine: direct boolean evaluation, exhaustive
// counting, seeded random query generation and the optimization-variant
// comparison harness.

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "query.hpp"

namespace ddnnf {

// xorshift64* (Marsaglia/Vigna). Seed 0 is remapped since 0 is a fixed point.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }
  // Uniform in [0, bound) up to modulo bias, which is negligible for the
  // small bounds used here.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

// Value per variable, index 0 unused.
using Assignment = std::vector<std::optional<bool>>;

inline bool evaluate(const Ddnnf& d, const Assignment& assignment) {
  std::vector<char> val(d.size(), 0);
  for (NodeId i = 0; i < d.size(); ++i) {
    const auto& n = d.nodes[i];
    switch (n.kind) {
      case NodeKind::Literal: {
        auto v = n.literal.var;
        if (v >= assignment.size() || !assignment[v])
          throw Error(Errc::PartialAssignment, "variable " + std::to_string(v) + " unassigned");
        val[i] = *assignment[v] == n.literal.positive;
        break;
      }
      case NodeKind::True: val[i] = 1; break;
      case NodeKind::False: val[i] = 0; break;
      case NodeKind::And:
        val[i] = 1;
        for (NodeId c : n.children) val[i] &= val[c];
        break;
      case NodeKind::Or:
        for (NodeId c : n.children) val[i] |= val[c];
        break;
    }
  }
  return val[d.root];
}

inline constexpr Var default_oracle_limit = 24;

// Number of assignments to all n variables that satisfy the circuit and the
// assumptions, by enumeration over the unassigned variables. Evaluates 64 assignments per pass, one per
// bit lane.
inline Count brute_force_count(const Ddnnf& d, const Assumptions& a, Var limit = default_oracle_limit) {
  const Var n = d.num_variables;
  for (const auto* side : {&a.included(), &a.excluded()})
    for (Var v : *side)
      if (v == 0 || v > n) throw Error(Errc::VariableOutOfRange, std::to_string(v));
  if (a.contradictory()) return 0;

  static constexpr std::uint64_t lane_pattern[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
  };
  std::vector<Var> free;
  for (Var v = 1; v <= n; ++v)
    if (!a.includes(v) && !a.excludes(v)) free.push_back(v);
  if (free.size() > limit)
    throw Error(Errc::OracleLimitExceeded, std::to_string(free.size()) + " free variables > " + std::to_string(limit));
  const std::size_t low = std::min<std::size_t>(free.size(), 6);
  const std::uint64_t lanes = low == 6 ? ~0ull : (1ull << (1u << low)) - 1;
  const std::uint64_t blocks = 1ull << (free.size() - low);

  std::vector<std::uint64_t> word(static_cast<std::size_t>(n) + 1, 0);
  for (Var v : a.included()) word[v] = ~0ull;
  for (std::size_t j = 0; j < low; ++j) word[free[j]] = lane_pattern[j];

  std::vector<std::uint64_t> val(d.size());
  std::uint64_t total = 0;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    for (std::size_t j = low; j < free.size(); ++j) word[free[j]] = (b >> (j - low)) & 1 ? ~0ull : 0;
    for (NodeId i = 0; i < d.size(); ++i) {
      const auto& node = d.nodes[i];
      switch (node.kind) {
        case NodeKind::Literal:
          val[i] = node.literal.positive ? word[node.literal.var] : ~word[node.literal.var];
          break;
        case NodeKind::True: val[i] = ~0ull; break;
        case NodeKind::False: val[i] = 0; break;
        case NodeKind::And:
          val[i] = ~0ull;
          for (NodeId c : node.children) val[i] &= val[c];
          break;
        case NodeKind::Or:
          val[i] = 0;
          for (NodeId c : node.children) val[i] |= val[c];
          break;
      }
    }
    total += static_cast<std::uint64_t>(std::popcount(val[d.root] & lanes));
  }
  return Count(total);
}

struct AssumptionBatch {
  std::vector<Assumptions> configs;
  std::vector<std::size_t> chunk_sizes;
  std::uint64_t seed = 0;
};

// Builds queries by repeatedly fixing a random unused variable to a random
// polarity. A choice that makes the query unsatisfiable is discarded and a
// fresh one drawn; after 10*n discarded choices the query is abandoned.
// Only chunk sizes below the variable count are generated. Queries within a
// chunk are distinct.
inline AssumptionBatch generate_satisfiable_configs(const Ddnnf& d, const std::vector<std::size_t>& chunk_sizes,
                                                    std::size_t count_per_chunk, std::uint64_t seed) {
  if (count_total(d) == 0) throw Error(Errc::VoidCircuit, "no satisfiable queries exist");
  Xorshift64Star rng(seed);
  AssumptionBatch batch{{}, chunk_sizes, seed};
  Scratch scratch;
  const std::size_t n = d.num_variables;
  const std::size_t retry_cap = 10 * n;

  for (auto size : chunk_sizes) {
    if (size >= n) continue;
    std::vector<Assumptions> chunk;
    std::size_t attempts = 0;
    while (chunk.size() < count_per_chunk && attempts++ < 20 * count_per_chunk + 100) {
      Assumptions a;
      std::vector<Var> unused;
      for (Var v = 1; v <= n; ++v) unused.push_back(v);
      std::size_t discarded = 0;
      while (a.size() < size && discarded <= retry_cap) {
        auto pick = rng.below(unused.size());
        Literal lit{unused[pick], rng.coin()};
        auto candidate = a.with(lit);
        if (query(d, candidate, OptimizationConfig::full(), scratch).count > 0) {
          a = std::move(candidate);
          unused.erase(unused.begin() + static_cast<std::ptrdiff_t>(pick));
        } else {
          ++discarded;
        }
      }
      if (a.size() != size) continue;
      if (std::find(chunk.begin(), chunk.end(), a) != chunk.end()) continue;
      chunk.push_back(std::move(a));
    }
    for (auto& a : chunk) batch.configs.push_back(std::move(a));
  }
  return batch;
}

// One unsatisfiable query per input query: exclude a core variable or
// include a dead one when the query leaves one free, otherwise contradict
// one of the query's own literals.
inline std::vector<Assumptions> generate_unsat_configs(const Ddnnf& d, const std::vector<Assumptions>& sat,
                                                       std::uint64_t seed) {
  Xorshift64Star rng(seed ^ 0x5DEECE66Dull);
  std::vector<Assumptions> out;
  for (const auto& a : sat) {
    std::vector<Literal> killers;
    for (Var v : d.core)
      if (!a.includes(v) && !a.excludes(v)) killers.push_back({v, false});
    for (Var v : d.dead)
      if (!a.includes(v) && !a.excludes(v)) killers.push_back({v, true});
    if (!killers.empty()) {
      out.push_back(a.with(killers[rng.below(killers.size())]));
      continue;
    }
    auto lits = a.literals();
    if (lits.empty()) continue;
    auto l = Literal::from_int(lits[rng.below(lits.size())]);
    out.push_back(a.with(l.negated()));
  }
  return out;
}

struct VariantRow {
  std::string name;
  std::vector<Count> counts;
  std::size_t nodes_visited = 0;
};

struct VariantReport {
  std::vector<std::string> queries;  // "count v ..." labels
  std::vector<VariantRow> rows;
  bool all_equal = true;
};

inline std::string query_label(const Assumptions& a) {
  auto s = a.to_string();
  return s.empty() ? "count" : "count v " + s;
}

// Runs every optimization variant over all single-feature queries, the
// batch, and one unsatisfiable query derived from each batch entry.
inline VariantReport run_variant_matrix(const Ddnnf& d, const AssumptionBatch& batch) {
  std::vector<Assumptions> qs;
  for (Var v = 1; v <= d.num_variables; ++v) qs.emplace_back(std::vector<Var>{v}, std::vector<Var>{});
  qs.insert(qs.end(), batch.configs.begin(), batch.configs.end());
  auto unsat = generate_unsat_configs(d, batch.configs, batch.seed);
  qs.insert(qs.end(), unsat.begin(), unsat.end());

  VariantReport report;
  for (const auto& q : qs) report.queries.push_back(query_label(q));
  Scratch scratch;
  for (const auto& [name, cfg] : optimization_variants()) {
    VariantRow row{std::string(name), {}, 0};
    for (const auto& q : qs) {
      auto r = query(d, q, cfg, scratch);
      row.counts.push_back(std::move(r.count));
      row.nodes_visited += r.nodes_visited;
    }
    report.rows.push_back(std::move(row));
  }
  for (const auto& row : report.rows)
    if (row.counts != report.rows.front().counts) report.all_equal = false;
  return report;
}

// One row per variant; matches_naive compares its counts to the first row.
inline std::string variant_summary_csv(const VariantReport& r) {
  std::string out = "variant,queries,nodes_visited,matches_naive\n";
  for (const auto& row : r.rows) {
    out += row.name + "," + std::to_string(row.counts.size()) + "," + std::to_string(row.nodes_visited) + "," +
           (row.counts == r.rows.front().counts ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace ddnnf
