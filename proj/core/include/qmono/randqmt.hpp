#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>

#include "qmono/circuit.hpp"
#include "qmono/gf2d.hpp"
#include "qmono/reconstruct.hpp"
#include "qmono/substitution.hpp"

namespace qmono {

enum class Evaluator {
  kDirect,     // evaluate_direct (ga_mul per gate)
  kTransform,  // WalshEvaluator; faster for large k
};

/// Lower bound used for the per-run success probability; sits just below
/// (1/8)(1 - 1/e).
inline constexpr double kRunSuccessFloor = 0.0787;

struct RandQMTConfig {
  unsigned q = 2;
  unsigned k = 1;
  /// Iterations per run; default_loop_budget(k) when unset.
  std::optional<std::uint64_t> loop_budget;
  std::uint64_t restarts = 1;
  std::uint64_t seed = 0;
  unsigned max_k = 16;
  /// Worker threads; the report does not depend on this.
  unsigned jobs = 1;
  Evaluator evaluator = Evaluator::kDirect;

  std::uint64_t effective_loop_budget() const;
  /// Throws std::invalid_argument on any violated bound.
  void validate() const;
};

struct RandQMTReport {
  bool decision = false;
  std::uint64_t iterations_executed = 0;
  /// Iteration index within the successful restart (0-based).
  std::optional<std::uint64_t> first_hit_iteration;
  std::optional<std::uint64_t> restart_index;
  unsigned field_degree = 0;
  std::chrono::duration<double> wall_time{0};
};

/// ceil((1/0.28)^k).
std::uint64_t default_loop_budget(unsigned k);

/// Smallest r >= 1 with (1 - 0.0787)^r <= target. Throws unless
/// 0 < target <= 1.
std::uint64_t restarts_for_confidence(double target_failure_prob);

/// Seed of the random stream for one (restart, iteration) pair.
std::uint64_t iteration_seed(std::uint64_t seed, std::uint64_t restart,
                             std::uint64_t iteration);

/// Reusable per-run state: field, sample buffers and evaluator.
class IterationRunner {
 public:
  IterationRunner(const ReconstructedCircuit& rc, const RandQMTConfig& cfg);

  /// One iteration: sample, substitute, evaluate; true iff the value is
  /// nonzero.
  bool run(std::mt19937_64& rng);
  /// The group-algebra value for the last sample.
  const GroupAlgebraElement& last_value() const { return *last_; }
  const IterationSample& last_sample() const { return sample_; }

 private:
  const ReconstructedCircuit* rc_;
  unsigned k_;
  FieldParams field_;
  Evaluator evaluator_;
  IterationSample sample_;
  WalshEvaluator walsh_;
  std::optional<GroupAlgebraElement> last_;
};

bool run_iteration(const ReconstructedCircuit& rc, const RandQMTConfig& cfg,
                   std::mt19937_64& rng);

/// Reconstructs once, then runs restarts x loop_budget iterations and stops
/// at the first nonzero evaluation. Throws NotTreeLikeError or
/// std::invalid_argument.
RandQMTReport run(const Circuit& c, const RandQMTConfig& cfg);
RandQMTReport run(const ReconstructedCircuit& rc, const RandQMTConfig& cfg);

/// run() with restarts chosen by restarts_for_confidence. Other settings
/// are taken from `base`.
RandQMTReport decision_with_confidence(const Circuit& c, unsigned q, unsigned k,
                                       double target_failure_prob,
                                       RandQMTConfig base = {});

}  // namespace qmono
