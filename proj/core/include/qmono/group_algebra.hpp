#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "qmono/gf2d.hpp"

namespace qmono {

/// A vector of Z_2^k stored as a k-bit mask. The group operation is XOR and
/// the identity v_0 is the all-zero mask.
class GroupVector {
 public:
  GroupVector(unsigned k, std::uint32_t bits);

  unsigned k() const noexcept { return k_; }
  std::uint32_t bits() const noexcept { return bits_; }
  bool is_identity() const noexcept { return bits_ == 0; }

  GroupVector operator*(const GroupVector& other) const;

  friend bool operator==(const GroupVector&, const GroupVector&) = default;

 private:
  unsigned k_;
  std::uint32_t bits_;
};

/// An element of the group algebra F[Z_2^k]: 2^k coefficients, where index
/// i holds the coefficient of the group vector whose bitmask is i.
class GroupAlgebraElement {
 public:
  static constexpr unsigned kMaxK = 20;

  /// All-zero element. Throws for k = 0 or k > kMaxK.
  GroupAlgebraElement(const FieldParams& field, unsigned k);
  /// Takes ownership of raw coefficient bitmasks (size must be 2^k).
  GroupAlgebraElement(const FieldParams& field, unsigned k,
                      std::vector<std::uint32_t> coeffs);

  const FieldParams& field() const noexcept { return field_; }
  unsigned k() const noexcept { return k_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  GF2dElement coefficient(std::uint32_t index) const;
  void set_coefficient(std::uint32_t index, const GF2dElement& value);

  std::span<const std::uint32_t> raw() const noexcept { return coeffs_; }
  std::span<std::uint32_t> raw() noexcept { return coeffs_; }

  bool is_zero() const noexcept;

  friend bool operator==(const GroupAlgebraElement&,
                         const GroupAlgebraElement&) = default;

 private:
  FieldParams field_;
  unsigned k_;
  std::vector<std::uint32_t> coeffs_;
};

GroupAlgebraElement ga_zero(const FieldParams& field, unsigned k);
/// 1 * v_0.
GroupAlgebraElement ga_identity(const FieldParams& field, unsigned k);

/// Componentwise field addition. Throws std::invalid_argument on a k or
/// field mismatch.
GroupAlgebraElement ga_add(const GroupAlgebraElement& u,
                           const GroupAlgebraElement& v);

/// XOR convolution: (u*v)[w] = sum_x u[x] v[x ^ w]. Uses the recursive
/// three-multiplication split on the top bit.
GroupAlgebraElement ga_mul(const GroupAlgebraElement& u,
                           const GroupAlgebraElement& v);

/// The O(4^k) double loop. Reference implementation for ga_mul.
GroupAlgebraElement ga_mul_naive(const GroupAlgebraElement& u,
                                 const GroupAlgebraElement& v);

GroupAlgebraElement ga_scale(const GF2dElement& c, const GroupAlgebraElement& u);

/// v + v_0 for a non-identity v. Throws std::invalid_argument for v = v_0
/// (the sum would collapse to 2 v_0 = 0).
GroupAlgebraElement ga_from_vector_plus_v0(const FieldParams& field,
                                           const GroupVector& v);

/// Uniform over the 2^k - 1 non-identity vectors (rejection sampling on
/// raw 64-bit draws).
GroupVector random_nonzero_vector(unsigned k, std::mt19937_64& rng);

namespace detail {

/// In-place-free kernel used by ga_mul: out = a * b over arrays of length n
/// (a power of two). `scratch` must hold at least 3n entries.
void xor_convolve_karatsuba(const FieldParams& field,
                            std::span<const std::uint32_t> a,
                            std::span<const std::uint32_t> b,
                            std::span<std::uint32_t> out,
                            std::span<std::uint32_t> scratch);

}  // namespace detail

}  // namespace qmono
