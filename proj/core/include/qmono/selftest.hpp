#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmono {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfTestOptions {
  std::uint64_t seed = 1;
  /// Monte Carlo trials per k for the independence check.
  std::size_t independence_trials = 20'000;
  unsigned independence_max_k = 10;
  std::size_t matrix_trials = 10'000;
  unsigned matrix_max_dim = 7;
};

/// Checks of the algebraic facts the algorithm relies on: independence
/// probability of random vectors, permanent = determinant mod 2,
/// annihilation of (v + v_0)^2, and products of (v_i + v_0) terms.
std::vector<SelfTestResult> run_selftest(const SelfTestOptions& options = {});

}  // namespace qmono
