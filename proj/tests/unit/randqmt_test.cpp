#include <gtest/gtest.h>

#include <random>

#include "qmono/errors.hpp"
#include "qmono/oracle.hpp"
#include "qmono/randqmt.hpp"
#include "test_support.hpp"

namespace qmono {
namespace {

using testing::load_fixture;

RandQMTConfig config(unsigned q, unsigned k, std::uint64_t seed, std::uint64_t restarts = 1) {
  RandQMTConfig cfg;
  cfg.q = q;
  cfg.k = k;
  cfg.seed = seed;
  cfg.restarts = restarts;
  return cfg;
}

void expect_same_outcome(const RandQMTReport& a, const RandQMTReport& b) {
  EXPECT_EQ(a.decision, b.decision);
  EXPECT_EQ(a.iterations_executed, b.iterations_executed);
  EXPECT_EQ(a.first_hit_iteration, b.first_hit_iteration);
  EXPECT_EQ(a.restart_index, b.restart_index);
  EXPECT_EQ(a.field_degree, b.field_degree);
}

TEST(Budget, LoopBudgetIsCeilOfInversePowers) {
  EXPECT_EQ(default_loop_budget(1), 4U);
  EXPECT_EQ(default_loop_budget(2), 13U);
  EXPECT_EQ(default_loop_budget(3), 46U);
  EXPECT_EQ(default_loop_budget(4), 163U);
  EXPECT_EQ(default_loop_budget(8), 26469U);
  EXPECT_THROW(default_loop_budget(0), std::invalid_argument);
}

TEST(Budget, RestartsForConfidence) {
  EXPECT_EQ(restarts_for_confidence(1e-4), 113U);
  EXPECT_EQ(restarts_for_confidence(1e-3), 85U);
  EXPECT_EQ(restarts_for_confidence(0.5), 9U);
  EXPECT_EQ(restarts_for_confidence(1.0), 1U);
  EXPECT_EQ(restarts_for_confidence(0.95), 1U);
  EXPECT_THROW(restarts_for_confidence(0.0), std::invalid_argument);
  EXPECT_THROW(restarts_for_confidence(1.5), std::invalid_argument);
  EXPECT_LE(kRunSuccessFloor, (1.0 - std::exp(-1.0)) / 8.0);
}

TEST(Config, Validation) {
  EXPECT_THROW(config(1, 2, 0).validate(), std::invalid_argument);
  EXPECT_THROW(config(2, 0, 0).validate(), std::invalid_argument);
  EXPECT_THROW(config(2, 17, 0).validate(), std::invalid_argument);
  EXPECT_THROW(config(2, 2, 0, 0).validate(), std::invalid_argument);
  auto cfg = config(2, 17, 0);
  cfg.max_k = 18;
  EXPECT_NO_THROW(cfg.validate());
  cfg.loop_budget = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = config(2, 2, 0);
  cfg.jobs = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Run, RejectsNonTreeLike) {
  EXPECT_THROW(run(load_fixture("not_tree.circ"), config(2, 2, 1)), NotTreeLikeError);
}

TEST(RunIteration, SingleVariableHitsHalfTheTime) {
  const ReconstructedCircuit rc = reconstruct(load_fixture("single.circ"));
  std::mt19937_64 rng(1);
  int hits = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) hits += run_iteration(rc, config(2, 1, 0), rng);
  EXPECT_NEAR(hits / static_cast<double>(n), 0.5, 0.03);
}

TEST(RunIteration, SquareNeverHitsForMultilinearQuery) {
  const ReconstructedCircuit rc = reconstruct(load_fixture("square.circ"));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) ASSERT_FALSE(run_iteration(rc, config(2, 2, 0), rng));
}

TEST(Run, QuarticSumHasNoMultilinearMonomial) {
  const Circuit c = load_fixture("quartic_sum.circ");
  for (unsigned k = 1; k <= 5; ++k) {
    const auto r = run(c, config(2, k, 100 + k, 3));
    EXPECT_FALSE(r.decision) << "k=" << k;
    EXPECT_EQ(r.iterations_executed, 3 * default_loop_budget(k));
    EXPECT_FALSE(r.first_hit_iteration.has_value());
  }
}

TEST(Run, QuarticSumDegreeFiveFiveMonomialIsFound) {
  const Circuit c = load_fixture("quartic_sum.circ");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RandQMTConfig base;
    base.seed = seed;
    const auto r = decision_with_confidence(c, 5, 5, 1e-4, base);
    EXPECT_TRUE(r.decision) << "seed=" << seed;
    EXPECT_EQ(r.field_degree, 5U);
  }
}

TEST(Run, HitReportIsConsistent) {
  const Circuit c = load_fixture("triangle.circ");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto cfg = config(2, 3, seed, 20);
    const auto r = run(c, cfg);
    ASSERT_TRUE(r.decision);
    ASSERT_TRUE(r.first_hit_iteration && r.restart_index);
    EXPECT_LT(*r.first_hit_iteration, default_loop_budget(3));
    EXPECT_EQ(r.iterations_executed,
              *r.restart_index * default_loop_budget(3) + *r.first_hit_iteration + 1);
  }
}

TEST(Run, DeterministicAcrossThreadCounts) {
  for (const auto& [file, q, k] : std::vector<std::tuple<std::string, unsigned, unsigned>>{
           {"four_cycle.circ", 2, 4}, {"quartic_sum.circ", 2, 3}, {"cross_terms.circ", 4, 4}}) {
    const Circuit c = load_fixture(file);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      auto cfg = config(q, k, seed, 3);
      const auto base = run(c, cfg);
      for (unsigned jobs : {2U, 3U, 4U}) {
        cfg.jobs = jobs;
        expect_same_outcome(run(c, cfg), base);
      }
    }
  }
}

TEST(Run, EvaluatorsGiveIdenticalReports) {
  for (const auto& cc : testing::completeness_cases()) {
    const Circuit c = load_fixture(cc.fixture);
    auto cfg = config(cc.q, cc.k, 99, 2);
    const auto direct = run(c, cfg);
    cfg.evaluator = Evaluator::kTransform;
    expect_same_outcome(run(c, cfg), direct);
  }
}

TEST(Run, DifferentSeedsGiveDifferentStreams) {
  EXPECT_NE(iteration_seed(1, 0, 0), iteration_seed(2, 0, 0));
  EXPECT_NE(iteration_seed(1, 0, 1), iteration_seed(1, 1, 0));
  EXPECT_EQ(iteration_seed(5, 3, 7), iteration_seed(5, 3, 7));
}

TEST(Run, CustomLoopBudget) {
  auto cfg = config(2, 2, 1, 2);
  cfg.loop_budget = 5;
  const auto r = run(load_fixture("square.circ"), cfg);
  EXPECT_FALSE(r.decision);
  EXPECT_EQ(r.iterations_executed, 10U);
}

// Random circuits meeting the degree precondition: a "no" from the oracle is
// always matched, and "yes" instances are found at the 1e-4 confidence level.
TEST(Run, AgreesWithOracleOnRandomCircuits) {
  static constexpr unsigned kQs[] = {2, 3, 4, 6};
  std::mt19937_64 rng(555);
  testing::RandomCircuitOptions o;
  o.max_gates = 14;
  o.mul_probability = 0.55;
  int yes_total = 0;
  int yes_found = 0;
  int instances = 0;
  while (instances < 200) {
    o.variables = 1 + static_cast<unsigned>(rng() % 5);
    const Circuit c = testing::random_tree_circuit(o, rng);
    const unsigned q = kQs[instances % 4];
    const unsigned k = 1 + static_cast<unsigned>(rng() % 4);
    const auto f = expand(c);
    const auto low = min_q_monomial_degree(f, q);
    if (low && *low < k) continue;
    ++instances;
    RandQMTConfig base;
    base.seed = rng();
    const bool expected = has_q_monomial(f, q, k);
    const bool got = decision_with_confidence(c, q, k, 1e-4, base).decision;
    if (!expected) {
      ASSERT_FALSE(got) << serialize(c) << " q=" << q << " k=" << k;
    } else {
      ++yes_total;
      yes_found += got;
    }
  }
  ASSERT_GT(yes_total, 20);
  EXPECT_GE(yes_found, 0.99 * yes_total);
}

}  // namespace
}  // namespace qmono
