#pragma once

#include <cstdint>
#include <random>

namespace qmono {

/// GF(2^d) described by its degree and an irreducible modulus over GF(2).
///
/// The modulus is stored as a bitmask with bit d set (x^d) and no higher
/// bits. Elements are bitmasks below 2^d; addition is XOR and
/// multiplication is carryless multiplication reduced by the modulus.
class FieldParams {
 public:
  static constexpr unsigned kMaxDegree = 16;

  /// Field of degree d using the built-in modulus table. Throws
  /// std::invalid_argument for d outside [1, kMaxDegree].
  static FieldParams of_degree(unsigned d);

  /// Field with a caller-chosen modulus. Throws std::invalid_argument if the
  /// modulus is not an irreducible polynomial of degree 1..kMaxDegree.
  static FieldParams with_modulus(std::uint32_t modulus);

  unsigned degree() const noexcept { return degree_; }
  std::uint32_t modulus() const noexcept { return modulus_; }
  std::uint32_t size() const noexcept { return std::uint32_t{1} << degree_; }
  std::uint32_t mask() const noexcept { return size() - 1; }

  /// Raw arithmetic on bitmasks already known to be field elements.
  std::uint32_t add_raw(std::uint32_t a, std::uint32_t b) const noexcept {
    return a ^ b;
  }
  std::uint32_t mul_raw(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint32_t acc = 0;
    const std::uint32_t top = std::uint32_t{1} << degree_;
    while (b != 0) {
      if (b & 1U) acc ^= a;
      b >>= 1;
      a <<= 1;
      if (a & top) a ^= modulus_;
    }
    return acc;
  }

  friend bool operator==(const FieldParams&, const FieldParams&) = default;

 private:
  FieldParams(unsigned degree, std::uint32_t modulus)
      : degree_(degree), modulus_(modulus) {}

  unsigned degree_;
  std::uint32_t modulus_;
};

/// Trial-division irreducibility test for polynomials over GF(2) of
/// degree <= 31, given as bitmasks.
bool is_irreducible_gf2(std::uint32_t poly);

/// The built-in modulus for degree d (1..16).
std::uint32_t builtin_modulus(unsigned d);

/// Field sized for a degree-k run: d = ceil(log2(2k-1)) + 1, so that
/// 2^d >= 2(2k-1). Throws for k = 0 or when d would exceed 16.
FieldParams field_for_degree(unsigned k);

/// An element of a specific GF(2^d). Carries its modulus so that mixing
/// elements of different fields is detected.
class GF2dElement {
 public:
  GF2dElement(const FieldParams& field, std::uint32_t bits);

  static GF2dElement zero(const FieldParams& field) { return {field, 0}; }
  static GF2dElement one(const FieldParams& field) { return {field, 1}; }

  std::uint32_t bits() const noexcept { return bits_; }
  std::uint32_t modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return bits_ == 0; }

  friend bool operator==(const GF2dElement&, const GF2dElement&) = default;

 private:
  friend GF2dElement add(const GF2dElement& a, const GF2dElement& b);
  friend GF2dElement mul(const GF2dElement& a, const GF2dElement& b);

  std::uint32_t bits_;
  std::uint32_t modulus_;
};

/// Throws std::invalid_argument if a and b belong to different fields.
GF2dElement add(const GF2dElement& a, const GF2dElement& b);
GF2dElement mul(const GF2dElement& a, const GF2dElement& b);

/// Uniform over all 2^d elements; consumes one 64-bit draw.
GF2dElement random_element(const FieldParams& field, std::mt19937_64& rng);

}  // namespace qmono
