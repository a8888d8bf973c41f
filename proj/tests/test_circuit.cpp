#include <gtest/gtest.h>

#include "support.hpp"

namespace ddnnf {
namespace {

using test::running_c2d;

std::vector<Var> vars_of(const Ddnnf& d, NodeId n) { return to_vars(variable_set(d, n)); }

TEST(Literal, SignedRoundTrip) {
  EXPECT_EQ(Literal::from_int(-3), (Literal{3, false}));
  EXPECT_EQ(Literal::from_int(7).to_int(), 7);
  EXPECT_EQ(Literal::from_int(-7).negated(), Literal::from_int(7));
}

TEST(Assumptions, NormalizesAndDetectsContradiction) {
  auto a = Assumptions::from_literals({3, -1, 3, -2});
  EXPECT_EQ(a.included(), (std::vector<Var>{3}));
  EXPECT_EQ(a.excluded(), (std::vector<Var>{1, 2}));
  EXPECT_FALSE(a.contradictory());
  EXPECT_EQ(a.to_string(), "-1 -2 3");
  EXPECT_TRUE(a.with(Literal{1, true}).contradictory());
  EXPECT_EQ(Assumptions{}.to_string(), "");
}

TEST(VariableSet, RunningExample) {
  auto d = running_c2d();
  // Record 9 is the Or over (B & -C) and (-B & C).
  EXPECT_EQ(vars_of(d, 9), (std::vector<Var>{2, 3}));
  EXPECT_EQ(vars_of(d, 6), (std::vector<Var>{4}));  // -D
  EXPECT_EQ(vars_of(d, d.root), (std::vector<Var>{1, 2, 3, 4}));
}

TEST(VariableSet, BulkAgreesWithSingleNode) {
  auto d = test::random_circuit(5, {.num_variables = 9});
  auto sets = variable_sets(d);
  for (NodeId i = 0; i < d.size(); ++i) EXPECT_EQ(sets[i], variable_set(d, i)) << "node " << i;
  EXPECT_THROW(variable_set(d, static_cast<NodeId>(d.size())), Error);
}

TEST(Validate, RunningExampleIsClean) { EXPECT_TRUE(validate(running_c2d()).empty()); }

TEST(Validate, SharedVariableUnderAnd) {
  Builder b(1);
  auto x = b.literal(1);
  auto y = b.literal(1);
  b.conj({x, y});
  auto vs = validate(std::move(b).build());
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, Violation::Kind::Decomposability);
}

TEST(Validate, UnsmoothOrIsReported) {
  auto vs = validate(test::unsmooth_or());
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, Violation::Kind::Smoothness);
  EXPECT_EQ(vs[0].node, test::unsmooth_or().root);
}

TEST(Validate, FalseChildOfOrNeedsNoSmoothing) {
  Builder b(2);
  auto f = b.bottom();
  auto x = b.conj({b.literal(1), b.literal(2)});
  b.disj({f, x});
  EXPECT_TRUE(validate(std::move(b).build()).empty());
}

TEST(Validate, DanglingAndCyclicChildren) {
  Ddnnf d;
  d.num_variables = 1;
  d.nodes.push_back(Node::make_literal({1, true}));
  d.nodes.push_back(Node::make_and({0, 5}));
  d.root = 1;
  EXPECT_TRUE(has_violation(validate(d), Violation::Kind::DanglingChild));

  Ddnnf c;
  c.num_variables = 1;
  c.nodes.push_back(Node::make_and({1}));
  c.nodes.push_back(Node::make_or({0}));
  c.root = 1;
  EXPECT_TRUE(has_violation(validate(c), Violation::Kind::Cycle));

  Ddnnf o;
  o.num_variables = 1;
  o.nodes.push_back(Node::make_and({1}));
  o.nodes.push_back(Node::make_literal({1, true}));
  o.root = 0;
  EXPECT_TRUE(has_violation(validate(o), Violation::Kind::OrderViolation));
}

TEST(Builder, RejectsBadInput) {
  Builder b(2);
  EXPECT_THROW(b.literal(3), Error);
  EXPECT_THROW(b.literal(0), Error);
  EXPECT_THROW(b.conj({4}), Error);
  EXPECT_THROW(Builder(1).build(), Error);
}

TEST(Builder, DropsUnreachableNodesAndTracksOmitted) {
  Builder b(5);
  b.literal(4);  // unreachable
  auto x = b.literal(1);
  auto y = b.literal(-2);
  b.conj({x, y});
  auto d = std::move(b).build();
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d.root, 2u);
  EXPECT_EQ(d.omitted, (std::vector<Var>{3, 4, 5}));
  EXPECT_EQ(d.omitted_factor, 8);
}

TEST(Invariants, TopologicalOrderAndOmittedCoverOnCorpus) {
  for (auto& [name, d] : test::fixture_corpus()) {
    for (NodeId i = 0; i < d.size(); ++i)
      for (NodeId c : d.nodes[i].children) EXPECT_LT(c, i) << name;
    auto root_vars = variable_set(d, d.root);
    for (Var v : d.omitted) root_vars.set(v);
    for (Var v = 1; v <= d.num_variables; ++v) EXPECT_TRUE(root_vars.test(v)) << name << " var " << v;
    EXPECT_FALSE(has_violation(validate(d), Violation::Kind::Decomposability)) << name;
  }
}

}  // namespace
}  // namespace ddnnf
