#include "qmono/substitution.hpp"

#include <stdexcept>

namespace qmono {

IterationSample sample_iteration(const ReconstructedCircuit& rc, unsigned q, unsigned k,
                                 const FieldParams& field, std::mt19937_64& rng) {
  IterationSample s{ReplacementPlan(rc, q), {}, {}};
  s.vectors.assign(rc.x_variables.size(), std::vector<GroupVector>(q - 1, GroupVector(k, 0)));
  s.z_values.assign(rc.h(), GF2dElement::zero(field));
  resample_iteration(s, k, field, rng);
  return s;
}

void resample_iteration(IterationSample& sample, unsigned k, const FieldParams& field,
                        std::mt19937_64& rng) {
  resample_plan(sample.plan, rng);
  for (auto& row : sample.vectors) {
    for (auto& v : row) v = random_nonzero_vector(k, rng);
  }
  for (auto& z : sample.z_values) z = random_element(field, rng);
}

GroupAlgebraElement occurrence_value(const ReconstructedCircuit& rc,
                                     const IterationSample& sample, std::size_t var,
                                     const FieldParams& field, unsigned k) {
  const TerminalRole& role = rc.roles.at(var);
  if (role.is_z) throw std::invalid_argument("occurrence_value called on a z-variable");
  GroupAlgebraElement out(field, k);
  auto coeffs = out.raw();
  const std::size_t row = sample.plan.row_index(role.variable, role.occurrence);
  for (std::size_t l = 0; l < sample.plan.row_length(); ++l) {
    if (!sample.plan.bit(row, l)) continue;
    coeffs[sample.vectors[role.variable][l].bits()] ^= 1U;
    coeffs[0] ^= 1U;
  }
  return out;
}

GroupAlgebraElement evaluate_direct(const ReconstructedCircuit& rc,
                                    const IterationSample& sample, const FieldParams& field,
                                    unsigned k) {
  std::vector<GroupAlgebraElement> leaves;
  leaves.reserve(rc.roles.size());
  for (std::size_t v = 0; v < rc.roles.size(); ++v) {
    const auto& role = rc.roles[v];
    if (role.is_z) {
      GroupAlgebraElement e(field, k);
      e.raw()[0] = sample.z_values.at(role.z_index).bits();
      leaves.push_back(std::move(e));
    } else {
      leaves.push_back(occurrence_value(rc, sample, v, field, k));
    }
  }
  Domain<GroupAlgebraElement> domain{
      [&] { return ga_zero(field, k); },
      [](const GroupAlgebraElement& a, const GroupAlgebraElement& b) { return ga_add(a, b); },
      [](const GroupAlgebraElement& a, const GroupAlgebraElement& b) { return ga_mul(a, b); }};
  return evaluate<GroupAlgebraElement>(rc.circuit, std::span<const GroupAlgebraElement>(leaves),
                                       domain);
}

}  // namespace qmono
