#include <gtest/gtest.h>

#include "support.hpp"

namespace ddnnf {
namespace {

Assignment assign(std::initializer_list<int> bits) {
  Assignment a{std::nullopt};
  for (int b : bits) a.push_back(b != 0);
  return a;
}

TEST(Evaluate, RunningExample) {
  auto d = test::running_c2d();
  EXPECT_TRUE(evaluate(d, assign({1, 1, 0, 1})));
  EXPECT_FALSE(evaluate(d, assign({0, 1, 0, 1})));
  EXPECT_FALSE(evaluate(d, assign({1, 1, 1, 0})));
}

TEST(Evaluate, PartialAssignmentIsAnError) {
  auto d = test::running_c2d();
  Assignment a = assign({1, 1, 0});
  a.push_back(std::nullopt);
  try {
    evaluate(d, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PartialAssignment);
  }
}

TEST(BruteForce, Examples) {
  EXPECT_EQ(brute_force_count(test::running_c2d(), {}), 4);
  EXPECT_EQ(brute_force_count(test::unsmooth_or(), {}), 4);
  EXPECT_EQ(brute_force_count(test::twin_gadgets(true), {}), 8);
  EXPECT_EQ(brute_force_count(test::twin_gadgets(false), {}), 8);
  EXPECT_EQ(brute_force_count(test::true_circuit(3), {}), 8);
  EXPECT_EQ(brute_force_count(test::false_circuit(2), {}), 0);
  EXPECT_EQ(brute_force_count(test::free_branch(), {}), 3);
  EXPECT_EQ(brute_force_count(test::running_c2d(), Assumptions::from_literals({2, -2})), 0);
}

TEST(BruteForce, AgreesWithAssignmentLoop) {
  for (auto& [name, d] : test::fixture_corpus()) {
    if (d.num_variables > 12) continue;
    Count total = 0;
    for (std::uint64_t m = 0; m < (1ull << d.num_variables); ++m) {
      Assignment a(d.num_variables + 1);
      for (Var v = 1; v <= d.num_variables; ++v) a[v] = ((m >> (v - 1)) & 1) != 0;
      total += evaluate(d, a);
    }
    EXPECT_EQ(brute_force_count(d, {}), total) << name;
  }
}

TEST(BruteForce, Limits) {
  auto d = test::true_circuit(30);
  try {
    brute_force_count(d, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::OracleLimitExceeded);
  }
  EXPECT_EQ(brute_force_count(d, Assumptions::from_literals({1, 2, 3, 4, 5, 6}), 24), Count(1) << 24);
  EXPECT_THROW(brute_force_count(test::running_c2d(), Assumptions({9}, {})), Error);
}

TEST(Generator, RunningExample) {
  auto d = preprocess(test::running_c2d());
  auto batch = generate_satisfiable_configs(d, {2}, 3, 7);
  ASSERT_EQ(batch.configs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(batch.configs[i].size(), 2u);
    EXPECT_GT(query(d, batch.configs[i]).count, 0);
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(batch.configs[i] == batch.configs[j]);
  }
  EXPECT_TRUE(generate_satisfiable_configs(d, {5}, 10, 7).configs.empty());
  EXPECT_TRUE(generate_satisfiable_configs(d, {4}, 10, 7).configs.empty());
}

TEST(Generator, DeterministicAndSatisfiable) {
  auto d = preprocess(test::random_circuit(3, {.num_variables = 16}));
  auto a = generate_satisfiable_configs(d, {2, 5, 10}, 20, 123);
  auto b = generate_satisfiable_configs(d, {2, 5, 10}, 20, 123);
  ASSERT_EQ(a.configs.size(), b.configs.size());
  for (std::size_t i = 0; i < a.configs.size(); ++i) {
    EXPECT_EQ(a.configs[i], b.configs[i]);
    EXPECT_GT(brute_force_count(d, a.configs[i]), 0);
  }
  auto c = generate_satisfiable_configs(d, {2, 5, 10}, 20, 124);
  EXPECT_FALSE(std::equal(a.configs.begin(), a.configs.end(), c.configs.begin(), c.configs.end()));
}

TEST(Generator, VoidCircuit) {
  auto d = preprocess(test::false_circuit(3));
  try {
    generate_satisfiable_configs(d, {2}, 5, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::VoidCircuit);
  }
}

TEST(Generator, UnsatConfigsAreUnsatisfiable) {
  for (auto& [name, parsed] : test::fixture_corpus()) {
    auto d = preprocess(parsed);
    if (count_total(d) == 0 || d.num_variables < 3) continue;
    auto batch = generate_satisfiable_configs(d, {2}, 10, 8);
    auto unsat = generate_unsat_configs(d, batch.configs, 8);
    EXPECT_EQ(unsat.size(), batch.configs.size()) << name;
    for (const auto& a : unsat) EXPECT_EQ(brute_force_count(parsed, a), 0) << name << " " << a.to_string();
  }
}

TEST(VariantMatrix, RunningExample) {
  auto d = preprocess(test::running_c2d());
  auto batch = generate_satisfiable_configs(d, {2}, 5, 1);
  auto report = run_variant_matrix(d, batch);
  EXPECT_TRUE(report.all_equal);
  ASSERT_EQ(report.rows.size(), 6u);
  EXPECT_EQ(report.rows.front().name, "Naive");
  EXPECT_EQ(report.rows.back().name, "Full");
  EXPECT_GE(report.rows.front().nodes_visited, report.rows.back().nodes_visited);
  EXPECT_EQ(report.queries.front(), "count v 1");
}

TEST(VariantMatrix, EmptyBatchCoversFeaturesOnly) {
  auto d = preprocess(test::running_c2d());
  auto report = run_variant_matrix(d, AssumptionBatch{});
  EXPECT_EQ(report.queries.size(), 4u);
  EXPECT_TRUE(report.all_equal);
}

TEST(VariantMatrix, CsvSummary) {
  auto d = preprocess(test::running_c2d());
  auto csv = variant_summary_csv(run_variant_matrix(d, AssumptionBatch{}));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "variant,queries,nodes_visited,matches_naive");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  EXPECT_EQ(csv.find("false"), std::string::npos);
}

}  // namespace
}  // namespace ddnnf
