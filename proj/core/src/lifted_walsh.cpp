#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

#include "qmono/substitution.hpp"

// Arithmetic in R = (Z/2^64)[b] / (b^d - sum m_i b^i), which reduces mod 2
// to GF(2^d). The Walsh-Hadamard transform is a ring map R[Z_2^k] -> R^{2^k},
// so the circuit can be evaluated independently at every character S. The
// unnormalised inverse transform returns 2^k times the true coefficients;
// bit k of each word is then the coefficient mod 2.

namespace qmono {

WalshEvaluator::WalshEvaluator(const ReconstructedCircuit& rc, const FieldParams& field,
                               unsigned k)
    : rc_(&rc), field_(field), k_(k), d_(field.degree()) {
  if (k == 0 || k > GroupAlgebraElement::kMaxK) {
    throw std::invalid_argument("group dimension k must be in [1, 20]");
  }
  for (unsigned i = 0; i < d_; ++i) {
    if ((field.modulus() >> i) & 1U) modulus_taps_.push_back(i);
  }
  const Circuit& c = rc.circuit;
  variable_count_ = c.variables().size();
  auto slot = [&](NodeRef r) { return r.is_variable() ? r.index : variable_count_ + r.index; };
  for (const auto& g : c.gates()) {
    Node n;
    n.is_mul = g.op == GateOp::kMul;
    for (const auto& in : g.inputs) n.inputs.push_back(slot(in));
    gates_.push_back(std::move(n));
  }
  output_slot_ = slot(c.output());
  values_.assign((variable_count_ + gates_.size()) * d_, 0);
  product_.assign(2 * d_, 0);
}

void WalshEvaluator::mul_into(const std::uint64_t* a, const std::uint64_t* b,
                              std::uint64_t* out) {
  std::uint64_t* p = product_.data();
  std::fill(p, p + 2 * d_ - 1, 0);
  for (unsigned i = 0; i < d_; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < d_; ++j) p[i + j] += a[i] * b[j];
  }
  for (unsigned t = 2 * d_ - 2; t >= d_; --t) {
    const std::uint64_t c = p[t];
    if (c == 0) continue;
    for (unsigned i : modulus_taps_) p[t - d_ + i] += c;
  }
  std::copy(p, p + d_, out);
}

GroupAlgebraElement WalshEvaluator::evaluate(const IterationSample& sample) {
  const ReconstructedCircuit& rc = *rc_;
  const std::size_t n = std::size_t{1} << k_;
  const std::size_t q1 = sample.plan.row_length();
  const std::size_t nvars = rc.x_variables.size();
  std::vector<std::uint64_t> result(n * d_, 0);
  std::vector<std::uint8_t> even(nvars * q1);

  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t i = 0; i < nvars; ++i) {
      for (std::size_t l = 0; l < q1; ++l) {
        even[i * q1 + l] = (std::popcount(sample.vectors[i][l].bits() & s) & 1) == 0;
      }
    }
    for (std::size_t v = 0; v < variable_count_; ++v) {
      std::uint64_t* out = &values_[v * d_];
      std::fill(out, out + d_, 0);
      const TerminalRole& role = rc.roles[v];
      if (role.is_z) {
        const std::uint32_t z = sample.z_values[role.z_index].bits();
        for (unsigned t = 0; t < d_; ++t) out[t] = (z >> t) & 1U;
        continue;
      }
      const std::size_t row = sample.plan.row_index(role.variable, role.occurrence);
      std::uint64_t count = 0;
      for (std::size_t l = 0; l < q1; ++l) {
        if (sample.plan.bit(row, l) && even[role.variable * q1 + l]) ++count;
      }
      out[0] = 2 * count;
    }
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      const Node& node = gates_[g];
      std::uint64_t* out = &values_[(variable_count_ + g) * d_];
      if (node.is_mul) {
        mul_into(&values_[node.inputs[0] * d_], &values_[node.inputs[1] * d_], out);
      } else {
        std::fill(out, out + d_, 0);
        for (std::size_t in : node.inputs) {
          const std::uint64_t* x = &values_[in * d_];
          for (unsigned t = 0; t < d_; ++t) out[t] += x[t];
        }
      }
    }
    std::copy_n(&values_[output_slot_ * d_], d_, &result[s * d_]);
  }

  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t base = 0; base < n; base += 2 * half) {
      for (std::size_t j = base; j < base + half; ++j) {
        std::uint64_t* a = &result[j * d_];
        std::uint64_t* b = &result[(j + half) * d_];
        for (unsigned t = 0; t < d_; ++t) {
          const std::uint64_t x = a[t];
          const std::uint64_t y = b[t];
          a[t] = x + y;
          b[t] = x - y;
        }
      }
    }
  }

  GroupAlgebraElement out(field_, k_);
  auto coeffs = out.raw();
  const std::uint64_t low = (std::uint64_t{1} << k_) - 1;
  for (std::size_t x = 0; x < n; ++x) {
    std::uint32_t bits = 0;
    for (unsigned t = 0; t < d_; ++t) {
      const std::uint64_t w = result[x * d_ + t];
      assert((w & low) == 0);
      (void)low;
      bits |= static_cast<std::uint32_t>((w >> k_) & 1U) << t;
    }
    coeffs[x] = bits;
  }
  return out;
}

}  // namespace qmono
