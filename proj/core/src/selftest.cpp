#include "qmono/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "qmono/gf2d.hpp"
#include "qmono/group_algebra.hpp"
#include "qmono/transform.hpp"

namespace qmono {

namespace {

SelfTestResult independence_check(const SelfTestOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::ostringstream detail;
  bool ok = true;
  const double p = 0.28;
  const double slack = 3.0 * std::sqrt(p * (1 - p) / static_cast<double>(o.independence_trials));
  for (unsigned k = 1; k <= o.independence_max_k; ++k) {
    const double est = independence_probability(k, o.independence_trials, rng);
    detail << "k=" << k << ":" << est << ' ';
    if (est < p - slack) ok = false;
  }
  return {"independence probability >= 0.28", ok, detail.str()};
}

SelfTestResult product_limit_check() {
  const double v = independence_product(40);
  std::ostringstream detail;
  detail.precision(9);
  detail << v;
  return {"prod (1 - 2^-i), i <= 40", std::abs(v - 0.288788) < 1e-6, detail.str()};
}

SelfTestResult perm_det_check(const SelfTestOptions& o) {
  std::mt19937_64 rng(o.seed + 1);
  std::size_t disagreements = 0;
  for (std::size_t t = 0; t < o.matrix_trials; ++t) {
    const std::size_t n = 1 + rng() % o.matrix_max_dim;
    std::vector<std::uint64_t> rows(n);
    for (auto& r : rows) r = rng() & ((std::uint64_t{1} << n) - 1);
    const CoefficientMatrix m(n, rows);
    if (perm_mod2(m) != det_mod2(m)) ++disagreements;
  }
  return {"perm mod 2 = det mod 2", disagreements == 0,
          std::to_string(o.matrix_trials) + " matrices, " + std::to_string(disagreements) +
              " disagreements"};
}

SelfTestResult annihilation_check() {
  std::size_t failures = 0;
  std::size_t checked = 0;
  for (unsigned k = 1; k <= 6; ++k) {
    const FieldParams field = field_for_degree(k);
    for (std::uint32_t v = 1; v < (1U << k); ++v) {
      const auto e = ga_from_vector_plus_v0(field, GroupVector(k, v));
      if (!ga_mul(e, e).is_zero()) ++failures;
      ++checked;
    }
  }
  return {"(v + v0)^2 = 0, k <= 6", failures == 0,
          std::to_string(checked) + " vectors, " + std::to_string(failures) + " failures"};
}

// Every m-tuple of nonzero vectors for m <= k <= 4: the product of the
// (v_i + v0) is zero for dependent tuples and the sum over the span
// otherwise.
SelfTestResult product_check() {
  std::size_t failures = 0;
  std::size_t checked = 0;
  for (unsigned k = 1; k <= 4; ++k) {
    const FieldParams field = field_for_degree(k);
    const std::uint32_t nonzero = (1U << k) - 1;
    for (unsigned m = 1; m <= k; ++m) {
      std::vector<std::uint32_t> tuple(m, 1);
      while (true) {
        GroupAlgebraElement prod = ga_identity(field, k);
        for (auto v : tuple) prod = ga_mul(prod, ga_from_vector_plus_v0(field, GroupVector(k, v)));
        std::vector<std::uint64_t> vecs(tuple.begin(), tuple.end());
        GroupAlgebraElement expected(field, k);
        if (rank_gf2(vecs) == m) {
          for (std::uint32_t subset = 0; subset < (1U << m); ++subset) {
            std::uint32_t w = 0;
            for (unsigned i = 0; i < m; ++i) {
              if ((subset >> i) & 1U) w ^= tuple[i];
            }
            expected.raw()[w] ^= 1U;
          }
        }
        if (!(prod == expected)) ++failures;
        ++checked;
        unsigned i = 0;
        while (i < m && tuple[i] == nonzero) tuple[i++] = 1;
        if (i == m) break;
        ++tuple[i];
      }
    }
  }
  return {"products of (v_i + v0), k <= 4", failures == 0,
          std::to_string(checked) + " tuples, " + std::to_string(failures) + " failures"};
}

}  // namespace

std::vector<SelfTestResult> run_selftest(const SelfTestOptions& options) {
  return {independence_check(options), product_limit_check(), perm_det_check(options),
          annihilation_check(), product_check()};
}

}  // namespace qmono
