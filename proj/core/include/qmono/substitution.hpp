#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qmono/gf2d.hpp"
#include "qmono/group_algebra.hpp"
#include "qmono/reconstruct.hpp"
#include "qmono/transform.hpp"

namespace qmono {

/// Everything one iteration draws: the replacement plan, a nonzero vector
/// v_{il} per y-variable and a field value per z-variable.
struct IterationSample {
  ReplacementPlan plan;
  /// [variable][l], l = 0..q-2.
  std::vector<std::vector<GroupVector>> vectors;
  std::vector<GF2dElement> z_values;
};

/// Draw order: plan bits, then vectors (variable-major), then z values.
IterationSample sample_iteration(const ReconstructedCircuit& rc, unsigned q, unsigned k,
                                 const FieldParams& field, std::mt19937_64& rng);
/// Refills `sample` in place with the same draw order.
void resample_iteration(IterationSample& sample, unsigned k, const FieldParams& field,
                        std::mt19937_64& rng);

/// Group-algebra value of x-occurrence `var` of rc under the sample:
/// sum_l c_l (v_l + v_0).
GroupAlgebraElement occurrence_value(const ReconstructedCircuit& rc,
                                     const IterationSample& sample, std::size_t var,
                                     const FieldParams& field, unsigned k);

/// Evaluates C' over F[Z_2^k] gate by gate with ga_mul.
GroupAlgebraElement evaluate_direct(const ReconstructedCircuit& rc,
                                    const IterationSample& sample, const FieldParams& field,
                                    unsigned k);

/// Evaluates C' pointwise in the Walsh-Hadamard domain over a lift of
/// GF(2^d) to (Z/2^64)[b], then inverts. Gives the same element as
/// evaluate_direct in O(2^k * gates * d^2) time. Requires k <= GroupAlgebraElement::kMaxK.
class WalshEvaluator {
 public:
  WalshEvaluator(const ReconstructedCircuit& rc, const FieldParams& field, unsigned k);

  GroupAlgebraElement evaluate(const IterationSample& sample);

 private:
  struct Node {
    bool is_mul = false;
    std::vector<std::size_t> inputs;  // slots
  };

  void mul_into(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out);

  const ReconstructedCircuit* rc_;
  FieldParams field_;
  unsigned k_;
  unsigned d_;
  std::vector<unsigned> modulus_taps_;  // i < d with bit i of the modulus set
  std::size_t variable_count_;
  std::vector<Node> gates_;
  std::size_t output_slot_;
  std::vector<std::uint64_t> values_;  // slot-major, d words each
  std::vector<std::uint64_t> product_;
};

}  // namespace qmono
