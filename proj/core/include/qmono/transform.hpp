#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qmono/circuit.hpp"
#include "qmono/reconstruct.hpp"

namespace qmono {

/// Random Z_2 coefficients c_{ijl}: one row of q-1 bits per terminal
/// occurrence of the reconstructed circuit. Occurrence j of original
/// variable x_i is replaced by sum_l c_{ijl} y_{il}; the y's are shared by
/// all occurrences of x_i.
class ReplacementPlan {
 public:
  /// All-zero plan shaped for rc.
  ReplacementPlan(const ReconstructedCircuit& rc, unsigned q);

  unsigned q() const noexcept { return q_; }
  std::size_t row_length() const noexcept { return q_ - 1; }
  std::size_t row_count() const noexcept { return row_variable_.size(); }

  /// Row index of occurrence `occurrence` of x_variables[variable].
  std::size_t row_index(std::size_t variable, std::size_t occurrence) const;
  std::size_t row_variable(std::size_t row) const { return row_variable_.at(row); }

  bool bit(std::size_t row, std::size_t l) const;
  void set_bit(std::size_t row, std::size_t l, bool value);

  /// y_{il} names, indexed [variable][l].
  const std::vector<std::vector<std::string>>& y_vars() const noexcept { return y_vars_; }

  friend bool operator==(const ReplacementPlan&, const ReplacementPlan&) = default;

 private:
  unsigned q_;
  std::vector<std::size_t> row_offset_;  // per variable, first row index
  std::vector<std::size_t> row_variable_;
  std::vector<std::uint8_t> bits_;       // row-major, row_length() per row
  std::vector<std::vector<std::string>> y_vars_;
};

/// Independent uniform bits for every (occurrence, l). Throws for q < 2.
/// Consumes one 64-bit draw per 64 bits, row-major.
ReplacementPlan sample_plan(const ReconstructedCircuit& rc, unsigned q,
                            std::mt19937_64& rng);
/// Overwrites every bit of an existing plan; same draw order as sample_plan.
void resample_plan(ReplacementPlan& plan, std::mt19937_64& rng);

/// G = C' with every x-occurrence replaced by its y-sum. Occurrences whose
/// row is all zero are structural zeros, folded away by simplification.
struct TransformedCircuit {
  /// nullopt when G is identically zero.
  std::optional<Circuit> circuit;
  std::vector<std::string> y_names;
  std::vector<std::string> z_names;

  bool is_y(const std::string& name) const;
};

/// Throws std::invalid_argument if the plan was shaped for another circuit.
TransformedCircuit apply_plan(const ReconstructedCircuit& rc, const ReplacementPlan& plan);

/// Multiplies the output by k - ell fresh pad variables, raising every
/// monomial's degree by k - ell. Requires 1 <= ell < k.
Circuit pad_degree(const Circuit& c, unsigned k, unsigned ell);

/// Square 0/1 matrix with rows stored as bitmasks (bit j = column j).
class CoefficientMatrix {
 public:
  static constexpr std::size_t kMaxPermanentDim = 12;

  explicit CoefficientMatrix(std::size_t n) : n_(n), rows_(n, 0) {
    if (n > 64) throw std::invalid_argument("matrix dimension above 64");
  }
  CoefficientMatrix(std::size_t n, std::vector<std::uint64_t> rows);

  /// Row t is the first s bits of occurrence t of `variable` in the plan,
  /// over the first s occurrences (s = occurrences used).
  static CoefficientMatrix from_plan(const ReplacementPlan& plan, std::size_t variable,
                                     std::size_t s);

  std::size_t dim() const noexcept { return n_; }
  bool at(std::size_t r, std::size_t c) const { return (rows_.at(r) >> c) & 1U; }
  void set(std::size_t r, std::size_t c, bool v);
  const std::vector<std::uint64_t>& rows() const noexcept { return rows_; }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> rows_;
};

/// Exact permanent (Ryser). Throws std::invalid_argument above 12x12.
std::uint64_t permanent(const CoefficientMatrix& m);
bool perm_mod2(const CoefficientMatrix& m);
/// Determinant over Z_2 by Gaussian elimination.
bool det_mod2(const CoefficientMatrix& m);

/// Rank over Z_2 of bitmask vectors.
std::size_t rank_gf2(std::vector<std::uint64_t> vectors);

/// Monte Carlo estimate of the probability that k uniform vectors of Z_2^k
/// are linearly independent. Requires 1 <= k <= 20.
double independence_probability(unsigned k, std::size_t trials, std::mt19937_64& rng);

/// prod_{i=1}^{m} (1 - 2^{-i}); for m = k it is the exact independence
/// probability above.
double independence_product(unsigned m);

}  // namespace qmono
