#include "qmono/transform.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qmono {

ReplacementPlan::ReplacementPlan(const ReconstructedCircuit& rc, unsigned q) : q_(q) {
  if (q < 2) throw std::invalid_argument("q must be >= 2");
  if (q > 1025) throw std::invalid_argument("q above 1025 is not supported");
  NameAllocator names(rc.circuit);
  for (std::size_t i = 0; i < rc.x_variables.size(); ++i) {
    const auto& x = rc.x_variables[i];
    row_offset_.push_back(row_variable_.size());
    const std::size_t occ = rc.x_occurrences.at(x).size();
    row_variable_.insert(row_variable_.end(), occ, i);
    auto& ys = y_vars_.emplace_back();
    for (unsigned l = 1; l < q; ++l) {
      ys.push_back(names.fresh("y_" + x + "_" + std::to_string(l)));
    }
  }
  bits_.assign(row_variable_.size() * row_length(), 0);
}

std::size_t ReplacementPlan::row_index(std::size_t variable, std::size_t occurrence) const {
  const std::size_t row = row_offset_.at(variable) + occurrence;
  if (row >= row_variable_.size() || row_variable_[row] != variable) {
    throw std::out_of_range("occurrence index out of range");
  }
  return row;
}

bool ReplacementPlan::bit(std::size_t row, std::size_t l) const {
  if (l >= row_length()) throw std::out_of_range("plan column out of range");
  return bits_.at(row * row_length() + l) != 0;
}

void ReplacementPlan::set_bit(std::size_t row, std::size_t l, bool value) {
  if (l >= row_length()) throw std::out_of_range("plan column out of range");
  bits_.at(row * row_length() + l) = value ? 1 : 0;
}

ReplacementPlan sample_plan(const ReconstructedCircuit& rc, unsigned q,
                            std::mt19937_64& rng) {
  ReplacementPlan plan(rc, q);
  resample_plan(plan, rng);
  return plan;
}

void resample_plan(ReplacementPlan& plan, std::mt19937_64& rng) {
  std::uint64_t word = 0;
  unsigned left = 0;
  for (std::size_t r = 0; r < plan.row_count(); ++r) {
    for (std::size_t l = 0; l < plan.row_length(); ++l) {
      if (left == 0) {
        word = rng();
        left = 64;
      }
      plan.set_bit(r, l, word & 1U);
      word >>= 1;
      --left;
    }
  }
}

bool TransformedCircuit::is_y(const std::string& name) const {
  for (const auto& y : y_names) {
    if (y == name) return true;
  }
  return false;
}

TransformedCircuit apply_plan(const ReconstructedCircuit& rc, const ReplacementPlan& plan) {
  if (plan.y_vars().size() != rc.x_variables.size() ||
      plan.row_count() != rc.occurrence_count()) {
    throw std::invalid_argument("replacement plan does not match the circuit's occurrences");
  }
  const Circuit& c = rc.circuit;
  TransformedCircuit out;
  CircuitBuilder b;
  NameAllocator names(c);
  for (const auto& ys : plan.y_vars()) {
    for (const auto& y : ys) names.reserve(y);
  }

  std::vector<std::vector<NodeRef>> y_refs;
  for (const auto& ys : plan.y_vars()) {
    auto& refs = y_refs.emplace_back();
    for (const auto& y : ys) {
      refs.push_back(b.add_variable(y));
      out.y_names.push_back(y);
    }
  }

  // nullopt marks a structural zero.
  std::vector<std::optional<NodeRef>> var_value(c.variables().size());
  for (std::size_t v = 0; v < c.variables().size(); ++v) {
    const auto& role = rc.roles.at(v);
    if (role.is_z) {
      var_value[v] = b.add_variable(c.variables()[v]);
      out.z_names.push_back(c.variables()[v]);
      continue;
    }
    const std::size_t row = plan.row_index(role.variable, role.occurrence);
    std::vector<NodeRef> selected;
    for (std::size_t l = 0; l < plan.row_length(); ++l) {
      if (plan.bit(row, l)) selected.push_back(y_refs[role.variable][l]);
    }
    if (selected.size() == 1) {
      var_value[v] = selected.front();
    } else if (selected.size() > 1) {
      var_value[v] = b.add_gate(names.fresh(c.variables()[v] + "_r"), GateOp::kAdd,
                                std::move(selected));
    }
  }

  std::vector<std::optional<NodeRef>> gate_value(c.gates().size());
  auto value_of = [&](NodeRef r) {
    return r.is_variable() ? var_value[r.index] : gate_value[r.index];
  };
  for (std::size_t g = 0; g < c.gates().size(); ++g) {
    const Gate& gate = c.gates()[g];
    std::vector<NodeRef> live;
    bool any_zero = false;
    for (const auto& in : gate.inputs) {
      if (auto v = value_of(in)) {
        live.push_back(*v);
      } else {
        any_zero = true;
      }
    }
    if (gate.op == GateOp::kMul) {
      if (!any_zero) gate_value[g] = b.add_gate(names.fresh(gate.name), GateOp::kMul, live);
    } else if (live.size() == 1) {
      gate_value[g] = live.front();
    } else if (live.size() > 1) {
      gate_value[g] = b.add_gate(names.fresh(gate.name), GateOp::kAdd, live);
    }
  }

  if (auto root = value_of(c.output())) {
    b.set_output(*root);
    out.circuit = std::move(b).build();
  }
  return out;
}

Circuit pad_degree(const Circuit& c, unsigned k, unsigned ell) {
  if (ell < 1 || ell >= k) {
    throw std::invalid_argument("pad_degree requires 1 <= ell < k");
  }
  NameAllocator names(c);
  CircuitBuilder b;
  for (const auto& v : c.variables()) b.add_variable(v);
  for (const auto& g : c.gates()) b.add_gate(g.name, g.op, g.inputs);
  std::vector<NodeRef> pads;
  for (unsigned i = 1; i <= k - ell; ++i) {
    pads.push_back(b.add_variable(names.numbered("p", i)));
  }
  NodeRef acc = c.output();
  for (unsigned i = 0; i < pads.size(); ++i) {
    acc = b.add_gate(names.fresh("pad" + std::to_string(i + 1)), GateOp::kMul,
                     {acc, pads[i]});
  }
  b.set_output(acc);
  Circuit out = std::move(b).build();
  out.set_name(c.name());
  return out;
}

CoefficientMatrix::CoefficientMatrix(std::size_t n, std::vector<std::uint64_t> rows)
    : CoefficientMatrix(n) {
  if (rows.size() != n) throw std::invalid_argument("matrix must have n rows");
  const std::uint64_t mask = n == 64 ? ~0ULL : ((1ULL << n) - 1);
  for (auto r : rows) {
    if (r & ~mask) throw std::invalid_argument("matrix entry outside n columns");
  }
  rows_ = std::move(rows);
}

CoefficientMatrix CoefficientMatrix::from_plan(const ReplacementPlan& plan,
                                               std::size_t variable, std::size_t s) {
  if (s > plan.row_length()) {
    throw std::invalid_argument("coefficient matrix larger than q-1 columns");
  }
  CoefficientMatrix m(s);
  for (std::size_t t = 0; t < s; ++t) {
    const std::size_t row = plan.row_index(variable, t);
    for (std::size_t l = 0; l < s; ++l) m.set(t, l, plan.bit(row, l));
  }
  return m;
}

void CoefficientMatrix::set(std::size_t r, std::size_t c, bool v) {
  if (c >= n_) throw std::out_of_range("matrix column out of range");
  auto& row = rows_.at(r);
  row = v ? (row | (1ULL << c)) : (row & ~(1ULL << c));
}

std::uint64_t permanent(const CoefficientMatrix& m) {
  const std::size_t n = m.dim();
  if (n > CoefficientMatrix::kMaxPermanentDim) {
    throw std::invalid_argument("permanent limited to 12x12 matrices");
  }
  if (n == 0) return 1;
  // Ryser: perm = (-1)^n sum_S (-1)^{|S|} prod_i sum_{j in S} a_ij
  std::int64_t total = 0;
  for (std::uint64_t subset = 1; subset < (1ULL << n); ++subset) {
    std::int64_t prod = 1;
    for (std::size_t i = 0; i < n && prod != 0; ++i) {
      prod *= std::popcount(m.rows()[i] & subset);
    }
    const bool odd = (std::popcount(subset) & 1) != 0;
    total += odd ? -prod : prod;
  }
  if (n % 2 == 1) total = -total;
  return static_cast<std::uint64_t>(total);
}

bool perm_mod2(const CoefficientMatrix& m) { return (permanent(m) & 1U) != 0; }

std::size_t rank_gf2(std::vector<std::uint64_t> vectors) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < 64 && rank < vectors.size(); ++col) {
    const std::uint64_t bit = 1ULL << col;
    std::size_t pivot = rank;
    while (pivot < vectors.size() && !(vectors[pivot] & bit)) ++pivot;
    if (pivot == vectors.size()) continue;
    std::swap(vectors[rank], vectors[pivot]);
    for (std::size_t r = 0; r < vectors.size(); ++r) {
      if (r != rank && (vectors[r] & bit)) vectors[r] ^= vectors[rank];
    }
    ++rank;
  }
  return rank;
}

bool det_mod2(const CoefficientMatrix& m) { return rank_gf2(m.rows()) == m.dim(); }

double independence_probability(unsigned k, std::size_t trials, std::mt19937_64& rng) {
  if (k < 1 || k > 20) throw std::invalid_argument("k must be in [1, 20]");
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  const std::uint64_t mask = (1ULL << k) - 1;
  std::size_t hits = 0;
  std::vector<std::uint64_t> vecs(k);
  for (std::size_t t = 0; t < trials; ++t) {
    for (auto& v : vecs) v = rng() & mask;
    if (rank_gf2(vecs) == k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double independence_product(unsigned m) {
  double p = 1.0;
  for (unsigned i = 1; i <= m; ++i) p *= 1.0 - std::ldexp(1.0, -static_cast<int>(i));
  return p;
}

}  // namespace qmono
