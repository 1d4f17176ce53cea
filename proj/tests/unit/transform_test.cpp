#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qmono/oracle.hpp"
#include "qmono/reconstruct.hpp"
#include "qmono/transform.hpp"
#include "test_support.hpp"

namespace qmono {
namespace {

using testing::load_fixture;

Circuit power_of_x(unsigned d) {
  std::string text = "var x\n";
  if (d == 1) return parse(text + "out x\n");
  text += "gate m2 MUL x x\n";
  for (unsigned i = 3; i <= d; ++i) {
    text += "gate m" + std::to_string(i) + " MUL m" + std::to_string(i - 1) + " x\n";
  }
  return parse(text + "out m" + std::to_string(d) + "\n");
}

void set_plan_bits(ReplacementPlan& plan, std::uint64_t bits) {
  std::size_t pos = 0;
  for (std::size_t r = 0; r < plan.row_count(); ++r) {
    for (std::size_t l = 0; l < plan.row_length(); ++l) plan.set_bit(r, l, (bits >> pos++) & 1U);
  }
}

std::size_t plan_bit_count(const ReplacementPlan& plan) {
  return plan.row_count() * plan.row_length();
}

ExpandedPolynomial expand_g(const TransformedCircuit& t) {
  if (!t.circuit) return {};
  return expand(*t.circuit);
}

// Some term of G with an odd coefficient whose y-part is multilinear and
// nonempty.
bool has_odd_y_multilinear_term(const ExpandedPolynomial& g, const TransformedCircuit& t) {
  auto is_y = [&](const std::string& n) { return t.is_y(n); };
  for (const auto& [m, c] : g.terms()) {
    const Monomial y = m.restrict(is_y);
    if (y.degree() > 0 && y.is_multilinear() && c % 2 != 0) return true;
  }
  return false;
}

BigInt y_coefficient(const ExpandedPolynomial& g, const TransformedCircuit& t,
                     const Monomial& target) {
  BigInt total = 0;
  for (const auto& [m, c] : g.terms()) {
    if (m.restrict([&](const std::string& n) { return t.is_y(n); }) == target) total += c;
  }
  return total;
}

TEST(ReplacementPlan, ShapeFollowsOccurrences) {
  const ReconstructedCircuit rc = reconstruct(load_fixture("quartic_sum.circ"));
  const ReplacementPlan plan(rc, 4);
  EXPECT_EQ(plan.row_count(), 11U);
  EXPECT_EQ(plan.row_length(), 3U);
  ASSERT_EQ(plan.y_vars().size(), 2U);
  EXPECT_EQ(plan.y_vars()[0].size(), 3U);
  EXPECT_EQ(plan.row_variable(plan.row_index(1, 2)), 1U);
  EXPECT_THROW(plan.row_index(1, 3), std::out_of_range);
  EXPECT_THROW(ReplacementPlan(rc, 1), std::invalid_argument);
}

TEST(SamplePlan, DeterministicUnderFixedSeed) {
  const ReconstructedCircuit rc = reconstruct(load_fixture("quartic_sum.circ"));
  std::mt19937_64 a(9), b(9);
  EXPECT_EQ(sample_plan(rc, 5, a), sample_plan(rc, 5, b));
}

TEST(SamplePlan, RejectsQBelowTwo) {
  const ReconstructedCircuit rc = reconstruct(load_fixture("cube.circ"));
  std::mt19937_64 rng(1);
  EXPECT_THROW(sample_plan(rc, 1, rng), std::invalid_argument);
  EXPECT_THROW(sample_plan(rc, 0, rng), std::invalid_argument);
}

TEST(SamplePlan, QTwoGivesSingleBitRows) {
  const ReconstructedCircuit rc = reconstruct(load_fixture("cube.circ"));
  std::mt19937_64 rng(1);
  const auto plan = sample_plan(rc, 2, rng);
  EXPECT_EQ(plan.row_length(), 1U);
  const TransformedCircuit t = apply_plan(rc, plan);
  EXPECT_EQ(t.y_names.size(), 1U);
}

TEST(SamplePlan, BitFrequenciesAreBalanced) {
  const ReconstructedCircuit rc = reconstruct(load_fixture("quartic_sum.circ"));
  std::mt19937_64 rng(17);
  const int samples = 10000;
  std::vector<int> ones(11 * 3, 0);
  for (int s = 0; s < samples; ++s) {
    const auto plan = sample_plan(rc, 4, rng);
    for (std::size_t r = 0; r < plan.row_count(); ++r) {
      for (std::size_t l = 0; l < 3; ++l) ones[r * 3 + l] += plan.bit(r, l);
    }
  }
  double chi2 = 0;
  for (int c : ones) {
    const double e = samples / 2.0;
    chi2 += 2 * (c - e) * (c - e) / e;
  }
  EXPECT_LT(chi2, 63.9);  // 33 dof, p = 0.001
}

TEST(ApplyPlan, AllOnesPlanOnCubeGivesEvenCoefficient) {
  const ReconstructedCircuit rc = reconstruct(load_fixture("cube.circ"));
  ReplacementPlan plan(rc, 4);
  set_plan_bits(plan, ~0ULL);
  const TransformedCircuit t = apply_plan(rc, plan);
  const auto g = expand_g(t);
  const auto& ys = plan.y_vars()[0];
  const Monomial y123({{ys[0], 1}, {ys[1], 1}, {ys[2], 1}});
  EXPECT_EQ(y_coefficient(g, t, y123), 6);
  EXPECT_FALSE(y_multilinear_witness(g, 3, [&](const std::string& n) { return t.is_y(n); }));
}

TEST(ApplyPlan, AllZeroPlanGivesZero) {
  const ReconstructedCircuit rc = reconstruct(load_fixture("quartic_sum.circ"));
  const TransformedCircuit t = apply_plan(rc, ReplacementPlan(rc, 3));
  EXPECT_FALSE(t.circuit.has_value());
}

TEST(ApplyPlan, ZeroRowsInsideSumsAreDropped) {
  // Only the x2 occurrences under p survive; G = z_top*z_e1*y*y' + ...
  const ReconstructedCircuit rc = reconstruct(load_fixture("quartic_sum.circ"));
  ReplacementPlan plan(rc, 2);
  for (std::size_t j = 0; j < 3; ++j) plan.set_bit(plan.row_index(1, j), 0, true);
  const TransformedCircuit t = apply_plan(rc, plan);
  ASSERT_TRUE(t.circuit.has_value());
  const auto g = expand_g(t);
  ASSERT_EQ(g.term_count(), 2U);
  for (const auto& [m, c] : g.terms()) {
    EXPECT_EQ(c, 1);
    EXPECT_EQ(m.exponent(plan.y_vars()[1][0]), 2U);
  }
}

TEST(ApplyPlan, RejectsForeignPlan) {
  const ReconstructedCircuit a = reconstruct(load_fixture("cube.circ"));
  const ReconstructedCircuit b = reconstruct(load_fixture("quartic_sum.circ"));
  EXPECT_THROW(apply_plan(a, ReplacementPlan(b, 3)), std::invalid_argument);
}

TEST(ApplyPlan, YNamesAvoidCircuitNames) {
  const ReconstructedCircuit rc = reconstruct(parse("var x y_x_1\ngate m MUL x y_x_1\nout m\n"));
  const ReplacementPlan plan(rc, 2);
  EXPECT_NE(plan.y_vars()[0][0], "y_x_1");
  ReplacementPlan ones = plan;
  set_plan_bits(ones, ~0ULL);
  EXPECT_NO_THROW(apply_plan(rc, ones));
}

TEST(ApplyPlan, TwoOccurrencesSixOfSixteenPlansAreNonsingular) {
  const ReconstructedCircuit rc = reconstruct(load_fixture("square.circ"));
  ReplacementPlan plan(rc, 3);
  ASSERT_EQ(plan_bit_count(plan), 4U);
  int nonsingular = 0;
  for (std::uint64_t bits = 0; bits < 16; ++bits) {
    set_plan_bits(plan, bits);
    const auto m = CoefficientMatrix::from_plan(plan, 0, 2);
    const TransformedCircuit t = apply_plan(rc, plan);
    const auto g = expand_g(t);
    const auto& ys = plan.y_vars()[0];
    const bool odd = y_coefficient(g, t, Monomial({{ys[0], 1}, {ys[1], 1}})) % 2 != 0;
    EXPECT_EQ(odd, det_mod2(m));
    nonsingular += det_mod2(m);
  }
  EXPECT_EQ(nonsingular, 6);
  EXPECT_DOUBLE_EQ(nonsingular / 16.0, 0.375);
}

// Circuits without any q-monomial: no plan produces an odd y-multilinear
// term. Exhaustive over all plans with at most 12 bits.
TEST(PlanSoundness, NoPlanCreatesMultilinearYTerms) {
  struct Case {
    Circuit c;
    unsigned q;
  };
  std::vector<Case> cases = {{load_fixture("cube.circ"), 2}, {load_fixture("cube.circ"), 3},
                             {load_fixture("square.circ"), 2}, {load_fixture("quartic_sum.circ"), 2}};
  std::mt19937_64 rng(77);
  testing::RandomCircuitOptions o;
  o.max_gates = 6;
  o.mul_probability = 0.7;
  while (cases.size() < 30) {
    o.variables = 1 + static_cast<unsigned>(rng() % 3);
    Circuit c = testing::random_tree_circuit(o, rng);
    const unsigned q = 2 + static_cast<unsigned>(rng() % 3);
    if (min_q_monomial_degree(expand(c), q)) continue;
    const ReconstructedCircuit rc = reconstruct(c);
    if (rc.occurrence_count() * (q - 1) > 12) continue;
    cases.push_back({std::move(c), q});
  }
  for (const auto& [c, q] : cases) {
    ASSERT_FALSE(min_q_monomial_degree(expand(c), q).has_value());
    const ReconstructedCircuit rc = reconstruct(c);
    ReplacementPlan plan(rc, q);
    ASSERT_LE(plan_bit_count(plan), 12U);
    for (std::uint64_t bits = 0; bits < (1ULL << plan_bit_count(plan)); ++bits) {
      set_plan_bits(plan, bits);
      const TransformedCircuit t = apply_plan(rc, plan);
      ASSERT_FALSE(has_odd_y_multilinear_term(expand_g(t), t))
          << serialize(c) << "q=" << q << " plan=" << bits;
    }
  }
}

// x^d with d >= q: d factors drawn from q-1 y's cannot be multilinear.
TEST(PlanSoundness, PigeonholeForHighPowers) {
  for (unsigned q = 2; q <= 4; ++q) {
    for (unsigned d = q; d <= 5; ++d) {
      const ReconstructedCircuit rc = reconstruct(power_of_x(d));
      ReplacementPlan plan(rc, q);
      for (std::uint64_t bits = 0; bits < (1ULL << plan_bit_count(plan)); ++bits) {
        set_plan_bits(plan, bits);
        const TransformedCircuit t = apply_plan(rc, plan);
        ASSERT_FALSE(has_odd_y_multilinear_term(expand_g(t), t)) << "q=" << q << " d=" << d;
      }
    }
  }
}

// Fraction of plans under which G has an odd y-multilinear degree-k term.
TEST(PlanCompleteness, SurvivalRateAtLeastPointTwoEightToTheK) {
  const std::vector<testing::CompletenessCase> cases = {
      {"cube.circ", 4, 3}, {"square_sum.circ", 2, 2}, {"quartic_sum.circ", 3, 2}, {"triangle.circ", 2, 3}};
  const int plans = 10000;
  for (const auto& cc : cases) {
    const ReconstructedCircuit rc = reconstruct(load_fixture(cc.fixture));
    std::mt19937_64 rng(123);
    int hits = 0;
    for (int i = 0; i < plans; ++i) {
      const TransformedCircuit t = apply_plan(rc, sample_plan(rc, cc.q, rng));
      if (y_multilinear_witness(expand_g(t), cc.k,
                                [&](const std::string& n) { return t.is_y(n); })) {
        ++hits;
      }
    }
    const double p = std::pow(0.28, cc.k);
    const double floor = p - 3 * std::sqrt(p * (1 - p) / plans);
    EXPECT_GE(hits / static_cast<double>(plans), floor) << cc.fixture << " q=" << cc.q;
  }
}

// The y_1...y_s coefficient of r(x)^s is the permanent of the plan's
// coefficient matrix.
TEST(CoefficientMatrix, YCoefficientIsPermanent) {
  std::mt19937_64 rng(5);
  for (unsigned s = 1; s <= 5; ++s) {
    const ReconstructedCircuit rc = reconstruct(power_of_x(s));
    for (int t = 0; t < 20; ++t) {
      ReplacementPlan plan = sample_plan(rc, s + 1, rng);
      const auto m = CoefficientMatrix::from_plan(plan, 0, s);
      const TransformedCircuit tc = apply_plan(rc, plan);
      std::map<std::string, unsigned> ys;
      for (unsigned l = 0; l < s; ++l) ys[plan.y_vars()[0][l]] = 1;
      const BigInt coeff = y_coefficient(expand_g(tc), tc, Monomial(ys));
      EXPECT_EQ(coeff, BigInt(permanent(m)));
      EXPECT_EQ(coeff % 2 != 0, det_mod2(m));
    }
  }
}

TEST(CoefficientMatrix, KnownPermanents) {
  EXPECT_EQ(permanent(CoefficientMatrix(2, {0b01, 0b10})), 1U);
  EXPECT_TRUE(perm_mod2(CoefficientMatrix(2, {0b01, 0b10})));
  EXPECT_TRUE(det_mod2(CoefficientMatrix(2, {0b01, 0b10})));
  EXPECT_EQ(permanent(CoefficientMatrix(2, {0b11, 0b11})), 2U);
  EXPECT_FALSE(det_mod2(CoefficientMatrix(2, {0b11, 0b11})));
  EXPECT_EQ(permanent(CoefficientMatrix(3, {0b111, 0b111, 0b111})), 6U);
  EXPECT_FALSE(det_mod2(CoefficientMatrix(3, {0b111, 0b111, 0b111})));
  EXPECT_EQ(permanent(CoefficientMatrix(0)), 1U);
  std::vector<std::uint64_t> ones(12, (1U << 12) - 1);
  EXPECT_EQ(permanent(CoefficientMatrix(12, ones)), 479001600U);  // 12!
  EXPECT_THROW(permanent(CoefficientMatrix(13)), std::invalid_argument);
  EXPECT_THROW(CoefficientMatrix(2, {0b100, 0}), std::invalid_argument);
}

TEST(CoefficientMatrix, RyserMatchesPermutationSum) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<std::uint64_t> rows(n);
    for (auto& r : rows) r = rng() & ((1ULL << n) - 1);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t brute = 0;
    do {
      bool all = true;
      for (std::size_t i = 0; i < n; ++i) all = all && ((rows[i] >> perm[i]) & 1U);
      brute += all;
    } while (std::next_permutation(perm.begin(), perm.end()));
    ASSERT_EQ(permanent(CoefficientMatrix(n, rows)), brute);
  }
}

TEST(CoefficientMatrix, PermanentAndDeterminantAgreeModTwo) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 1 + rng() % 7;
    std::vector<std::uint64_t> rows(n);
    for (auto& r : rows) r = rng() & ((1ULL << n) - 1);
    const CoefficientMatrix m(n, rows);
    ASSERT_EQ(perm_mod2(m), det_mod2(m));
  }
}

TEST(Rank, SmallCases) {
  EXPECT_EQ(rank_gf2({}), 0U);
  EXPECT_EQ(rank_gf2({0}), 0U);
  EXPECT_EQ(rank_gf2({0b01, 0b10, 0b11}), 2U);
  EXPECT_EQ(rank_gf2({0b001, 0b010, 0b100}), 3U);
}

TEST(Independence, ExactValuesByEnumeration) {
  for (unsigned k = 1; k <= 3; ++k) {
    const std::uint64_t n = 1ULL << k;
    std::uint64_t independent = 0;
    std::uint64_t total = 0;
    std::vector<std::uint64_t> v(k, 0);
    for (std::uint64_t code = 0; code < (1ULL << (k * k)); ++code) {
      for (unsigned i = 0; i < k; ++i) v[i] = (code >> (i * k)) & (n - 1);
      independent += rank_gf2(v) == k;
      ++total;
    }
    EXPECT_DOUBLE_EQ(static_cast<double>(independent) / total, independence_product(k));
  }
  EXPECT_DOUBLE_EQ(independence_product(1), 0.5);
  EXPECT_DOUBLE_EQ(independence_product(2), 0.375);
}

TEST(Independence, MonteCarloAbovePointTwoEight) {
  std::mt19937_64 rng(21);
  const std::size_t trials = 100000;
  const double slack = 3 * std::sqrt(0.28 * 0.72 / trials);
  for (unsigned k = 1; k <= 10; ++k) {
    const double est = independence_probability(k, trials, rng);
    EXPECT_GE(est, 0.28 - slack) << "k=" << k;
    EXPECT_NEAR(est, independence_product(k), 5 * std::sqrt(0.25 / trials)) << "k=" << k;
  }
  EXPECT_THROW(independence_probability(0, 10, rng), std::invalid_argument);
  EXPECT_THROW(independence_probability(21, 10, rng), std::invalid_argument);
}

TEST(Independence, InfiniteProductLimit) {
  EXPECT_NEAR(independence_product(40), 0.288788, 1e-6);
  for (unsigned m = 1; m < 40; ++m) {
    EXPECT_GT(independence_product(m), independence_product(m + 1));
    EXPECT_GE(independence_product(m), 0.28);
  }
}

TEST(PadDegree, MultipliesByFreshVariables) {
  const Circuit c = parse("var x\nout x\n");
  const Circuit padded = pad_degree(c, 3, 1);
  const auto f = expand(padded);
  ASSERT_EQ(f.term_count(), 1U);
  const Monomial& m = f.terms().begin()->first;
  EXPECT_EQ(m.degree(), 3U);
  EXPECT_TRUE(m.is_multilinear());
  EXPECT_EQ(m.exponent("x"), 1U);
  EXPECT_EQ(padded.variables().size(), 3U);
}

TEST(PadDegree, RaisesMinimumQDegreeToK) {
  const Circuit c = load_fixture("quartic_sum.circ");
  ASSERT_EQ(min_q_monomial_degree(expand(c), 3), 2U);
  const Circuit padded = pad_degree(c, 4, 2);
  EXPECT_EQ(min_q_monomial_degree(expand(padded), 3), 4U);
  EXPECT_TRUE(check_tree_like(padded).is_tree_like);
}

TEST(PadDegree, RejectsEllOutsideRange) {
  const Circuit c = load_fixture("cube.circ");
  EXPECT_THROW(pad_degree(c, 3, 3), std::invalid_argument);
  EXPECT_THROW(pad_degree(c, 3, 4), std::invalid_argument);
  EXPECT_THROW(pad_degree(c, 3, 0), std::invalid_argument);
}

}  // namespace
}  // namespace qmono
