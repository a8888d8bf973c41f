#pragma once

// Fixture circuits and a random d-DNNF generator shared by the test suites.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ddnnf/ddnnf.hpp"

namespace ddnnf::test {

inline std::string fixture_text(const std::string& name) {
  std::ifstream in(std::filesystem::path(DDNNF_FIXTURE_DIR) / name, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A & ((B & -C) | (-B & C)) & (D | -D), variables A..D = 1..4.
inline Ddnnf running_c2d() { return parse_c2d(fixture_text("running_example.nnf")); }
inline Ddnnf running_d4() { return parse_d4(fixture_text("running_example.d4"), 4); }

// (-A & B) | (A & C): the unsmooth circuit before smoothing.
inline Ddnnf unsmooth_or() {
  Builder b(3);
  auto l = b.conj({b.literal(-1), b.literal(2)});
  auto r = b.conj({b.literal(1), b.literal(3)});
  b.disj({l, r}, 1);
  return std::move(b).build();
}

// (-A & B & (C | -C)) | (A & D & (C | -C)) with the (C | -C) subtree either
// duplicated or shared.
inline Ddnnf twin_gadgets(bool shared) {
  Builder b(4);
  auto gadget = [&] { return b.disj({b.literal(3), b.literal(-3)}, 3); };
  auto g1 = gadget();
  auto l = b.conj({b.literal(-1), b.literal(2), g1});
  auto g2 = shared ? g1 : gadget();
  auto r = b.conj({b.literal(1), b.literal(4), g2});
  b.disj({l, r}, 1);
  return std::move(b).build();
}

inline Ddnnf true_circuit(Var n) {
  Builder b(n);
  b.top();
  return std::move(b).build();
}

inline Ddnnf false_circuit(Var n) {
  Builder b(n);
  b.bottom();
  return std::move(b).build();
}

inline Ddnnf single_literal(long long lit, Var n) {
  Builder b(n);
  b.literal(lit);
  return std::move(b).build();
}

// A | (-A & B) over 2 variables; A's branch leaves B free.
inline Ddnnf free_branch() {
  Builder b(2);
  auto a = b.literal(1);
  auto r = b.conj({b.literal(-1), b.literal(2)});
  b.disj({a, r}, 1);
  return std::move(b).build();
}

// And over k independent (v | -v) gadgets.
inline std::string gadget_chain_c2d(std::size_t k) {
  std::ostringstream out;
  out << "nnf " << 3 * k + 1 << ' ' << 3 * k << ' ' << k << '\n';
  for (std::size_t v = 1; v <= k; ++v) out << "L " << v << "\nL -" << v << '\n';
  for (std::size_t v = 0; v < k; ++v) out << "O " << v + 1 << " 2 " << 2 * v << ' ' << 2 * v + 1 << '\n';
  out << "A " << k;
  for (std::size_t v = 0; v < k; ++v) out << ' ' << 2 * k + v;
  out << '\n';
  return out.str();
}

struct RandomCircuitOptions {
  Var num_variables = 10;
  double omit_probability = 0.1;    // variable absent from the whole circuit
  double drop_probability = 0.15;   // variable absent from one decision branch
  double false_probability = 0.05;  // decision branch replaced by False
  double reuse_probability = 0.15;  // reuse an earlier node over the same variables
  std::size_t node_budget = 400;
};

// Random circuits that are decomposable and deterministic by construction:
// And nodes partition their variables, Or nodes decide on a variable.
class RandomCircuit {
 public:
  RandomCircuit(std::uint64_t seed, RandomCircuitOptions opts) : rng_(seed), opts_(opts), b_(opts.num_variables) {}

  Ddnnf make() && {
    std::vector<Var> vars;
    for (Var v = 1; v <= opts_.num_variables; ++v)
      if (!chance(opts_.omit_probability)) vars.push_back(v);
    if (vars.empty()) vars.push_back(1);
    auto root = gen(vars);
    return std::move(b_).build(root);
  }

 private:
  bool chance(double p) { return static_cast<double>(rng_.next() >> 11) * 0x1.0p-53 < p; }

  NodeId gen(const std::vector<Var>& vars) {
    auto& pool = pool_[vars];
    if (!pool.empty() && chance(opts_.reuse_probability)) return pool[rng_.below(pool.size())];
    NodeId id = fresh(vars);
    pool.push_back(id);
    return id;
  }

  std::vector<Var> maybe_drop(std::vector<Var> vars) {
    std::erase_if(vars, [&](Var) { return chance(opts_.drop_probability); });
    return vars;
  }

  NodeId fresh(const std::vector<Var>& vars) {
    if (vars.empty()) return b_.top();
    if (vars.size() == 1) {
      auto v = static_cast<long long>(vars[0]);
      switch (rng_.below(3)) {
        case 0: return b_.literal(v);
        case 1: return b_.literal(-v);
        default: return b_.disj({b_.literal(v), b_.literal(-v)}, vars[0]);
      }
    }
    bool over_budget = b_.size() > opts_.node_budget;
    if (!over_budget && rng_.below(100) < 55) {
      auto x = vars[rng_.below(vars.size())];
      std::vector<Var> rest;
      for (auto v : vars)
        if (v != x) rest.push_back(v);
      auto branch = [&](long long lit) -> NodeId {
        if (chance(opts_.false_probability)) return b_.conj({b_.literal(lit), b_.bottom()});
        auto sub = maybe_drop(rest);
        if (sub.empty()) return b_.literal(lit);
        return b_.conj({b_.literal(lit), gen(sub)});
      };
      auto hi = branch(static_cast<long long>(x));
      auto lo = branch(-static_cast<long long>(x));
      return b_.disj({hi, lo}, x);
    }
    // Random partition into 2..3 nonempty groups.
    std::size_t parts = std::min<std::size_t>(vars.size(), 2 + rng_.below(2));
    std::vector<std::vector<Var>> groups(parts);
    for (std::size_t i = 0; i < vars.size(); ++i)
      groups[i < parts ? i : rng_.below(parts)].push_back(vars[i]);
    std::vector<NodeId> children;
    for (auto& g : groups) children.push_back(gen(g));
    return b_.conj(std::move(children));
  }

  Xorshift64Star rng_;
  RandomCircuitOptions opts_;
  Builder b_;
  std::map<std::vector<Var>, std::vector<NodeId>> pool_;
};

inline Ddnnf random_circuit(std::uint64_t seed, RandomCircuitOptions opts = {}) {
  return RandomCircuit(seed, opts).make();
}

struct NamedFixture {
  std::string name;
  Ddnnf circuit;  // as parsed or built, not preprocessed
};

// The fixture corpus used by oracle and variant-matrix checks.
inline std::vector<NamedFixture> fixture_corpus() {
  std::vector<NamedFixture> out;
  out.push_back({"running-c2d", running_c2d()});
  out.push_back({"running-d4", running_d4()});
  out.push_back({"unsmooth-or", unsmooth_or()});
  out.push_back({"twin-gadgets-duplicated", twin_gadgets(false)});
  out.push_back({"twin-gadgets-shared", twin_gadgets(true)});
  out.push_back({"true-n3", true_circuit(3)});
  out.push_back({"false-n2", false_circuit(2)});
  out.push_back({"literal", single_literal(1, 1)});
  out.push_back({"negative-literal-n3", single_literal(-2, 3)});
  out.push_back({"free-branch", free_branch()});
  const Var sizes[] = {4, 6, 8, 10, 11, 12, 12, 14, 14, 16, 16, 18, 20};
  std::uint64_t seed = 1000;
  for (Var n : sizes) {
    RandomCircuitOptions o;
    o.num_variables = n;
    o.node_budget = 40 * n;
    out.push_back({"random-n" + std::to_string(n) + "-s" + std::to_string(seed), random_circuit(seed, o)});
    ++seed;
  }
  return out;
}

}  // namespace ddnnf::test
