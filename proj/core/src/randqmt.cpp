#include "qmono/randqmt.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qmono {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kNoHit = std::numeric_limits<std::uint64_t>::max();

}  // namespace

std::uint64_t default_loop_budget(unsigned k) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  return static_cast<std::uint64_t>(std::ceil(std::pow(100.0 / 28.0, k) - 1e-9));
}

std::uint64_t restarts_for_confidence(double target) {
  if (!(target > 0.0) || target > 1.0) {
    throw std::invalid_argument("target failure probability must be in (0, 1]");
  }
  if (target == 1.0) return 1;
  const double r = std::ceil(std::log(target) / std::log1p(-kRunSuccessFloor) - 1e-9);
  return r < 1.0 ? 1 : static_cast<std::uint64_t>(r);
}

std::uint64_t iteration_seed(std::uint64_t seed, std::uint64_t restart,
                             std::uint64_t iteration) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ restart);
  return splitmix64(h ^ (iteration * 0xD1342543DE82EF95ULL));
}

std::uint64_t RandQMTConfig::effective_loop_budget() const {
  return loop_budget ? *loop_budget : default_loop_budget(k);
}

void RandQMTConfig::validate() const {
  if (q < 2) throw std::invalid_argument("q must be >= 2");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (max_k > GroupAlgebraElement::kMaxK) {
    throw std::invalid_argument("max_k above " + std::to_string(GroupAlgebraElement::kMaxK));
  }
  if (k > max_k) {
    throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the cap max_k = " +
                                std::to_string(max_k));
  }
  if (loop_budget && *loop_budget < 1) throw std::invalid_argument("loop_budget must be >= 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

IterationRunner::IterationRunner(const ReconstructedCircuit& rc, const RandQMTConfig& cfg)
    : rc_(&rc),
      k_(cfg.k),
      field_(field_for_degree(cfg.k)),
      evaluator_(cfg.evaluator),
      sample_{ReplacementPlan(rc, cfg.q), {}, {}},
      walsh_(rc, field_, cfg.k) {
  cfg.validate();
  sample_.vectors.assign(rc.x_variables.size(),
                         std::vector<GroupVector>(cfg.q - 1, GroupVector(cfg.k, 0)));
  sample_.z_values.assign(rc.h(), GF2dElement::zero(field_));
}

bool IterationRunner::run(std::mt19937_64& rng) {
  resample_iteration(sample_, k_, field_, rng);
  if (evaluator_ == Evaluator::kDirect) {
    last_ = evaluate_direct(*rc_, sample_, field_, k_);
  } else {
    last_ = walsh_.evaluate(sample_);
  }
  return !last_->is_zero();
}

bool run_iteration(const ReconstructedCircuit& rc, const RandQMTConfig& cfg,
                   std::mt19937_64& rng) {
  IterationRunner runner(rc, cfg);
  return runner.run(rng);
}

RandQMTReport run(const Circuit& c, const RandQMTConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const ReconstructedCircuit rc = reconstruct(c);
  RandQMTReport report = run(rc, cfg);
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

RandQMTReport run(const ReconstructedCircuit& rc, const RandQMTConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t budget = cfg.effective_loop_budget();
  if (cfg.restarts > kNoHit / budget) throw std::invalid_argument("iteration count overflows");
  const std::uint64_t total = cfg.restarts * budget;

  RandQMTReport report;
  report.field_degree = field_for_degree(cfg.k).degree();

  auto run_one = [&](IterationRunner& runner, std::uint64_t t) {
    std::mt19937_64 rng(iteration_seed(cfg.seed, t / budget, t % budget));
    return runner.run(rng);
  };

  std::uint64_t hit = kNoHit;
  if (cfg.jobs == 1) {
    IterationRunner runner(rc, cfg);
    for (std::uint64_t t = 0; t < total; ++t) {
      if (run_one(runner, t)) {
        hit = t;
        break;
      }
    }
  } else {
    // Iterations are handed out in blocks; a block is finished in full before
    // the earliest hit is read, so the result does not depend on scheduling.
    std::vector<IterationRunner> runners;
    runners.reserve(cfg.jobs);
    for (unsigned j = 0; j < cfg.jobs; ++j) runners.emplace_back(rc, cfg);
    const std::uint64_t block = std::uint64_t{64} * cfg.jobs;
    for (std::uint64_t begin = 0; begin < total && hit == kNoHit; begin += block) {
      const std::uint64_t end = std::min(total, begin + block);
      std::atomic<std::uint64_t> cursor{begin};
      std::atomic<std::uint64_t> best{kNoHit};
      std::exception_ptr error;
      std::mutex error_mutex;
      auto worker = [&](IterationRunner& runner) {
        try {
          for (std::uint64_t t = cursor++; t < end; t = cursor++) {
            if (t > best.load(std::memory_order_relaxed)) break;
            if (!run_one(runner, t)) continue;
            std::uint64_t cur = best.load();
            while (t < cur && !best.compare_exchange_weak(cur, t)) {
            }
          }
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      };
      std::vector<std::thread> threads;
      for (unsigned j = 1; j < cfg.jobs; ++j) threads.emplace_back(worker, std::ref(runners[j]));
      worker(runners[0]);
      for (auto& th : threads) th.join();
      if (error) std::rethrow_exception(error);
      hit = best.load();
    }
  }

  if (hit != kNoHit) {
    report.decision = true;
    report.iterations_executed = hit + 1;
    report.restart_index = hit / budget;
    report.first_hit_iteration = hit % budget;
  } else {
    report.iterations_executed = total;
  }
  report.wall_time = std::chrono::steady_clock::now() - start;
  return report;
}

RandQMTReport decision_with_confidence(const Circuit& c, unsigned q, unsigned k,
                                       double target_failure_prob, RandQMTConfig base) {
  base.q = q;
  base.k = k;
  base.restarts = restarts_for_confidence(target_failure_prob);
  return run(c, base);
}

}  // namespace qmono
