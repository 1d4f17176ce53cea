#include "qmono/gf2d.hpp"

#include <array>
#include <bit>
#include <cassert>
#include <stdexcept>
#include <string>

namespace qmono {

namespace {

// One irreducible polynomial per degree; low-weight trinomials or
// pentanomials. Entry i is the modulus for degree i + 1.
constexpr std::array<std::uint32_t, FieldParams::kMaxDegree> kModulusTable = {
    0x3,     // x + 1
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x83,    // x^7 + x + 1
    0x11B,   // x^8 + x^4 + x^3 + x + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1009,  // x^12 + x^3 + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4021,  // x^14 + x^5 + 1
    0x8003,  // x^15 + x + 1
    0x1002B  // x^16 + x^5 + x^3 + x + 1
};

int poly_degree(std::uint64_t p) { return static_cast<int>(std::bit_width(p)) - 1; }

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t b) {
  const int db = poly_degree(b);
  for (int da = poly_degree(a); da >= db; da = poly_degree(a)) {
    a ^= b << (da - db);
  }
  return a;
}

#ifndef NDEBUG
const bool kTableVerified = [] {
  for (std::size_t i = 0; i < kModulusTable.size(); ++i) {
    assert(poly_degree(kModulusTable[i]) == static_cast<int>(i + 1));
    assert(is_irreducible_gf2(kModulusTable[i]));
  }
  return true;
}();
#endif

void require_same_field(const GF2dElement& a, const GF2dElement& b) {
  if (a.modulus() != b.modulus()) {
    throw std::invalid_argument("GF(2^d) elements belong to different fields");
  }
}

}  // namespace

bool is_irreducible_gf2(std::uint32_t poly) {
  const int d = poly_degree(poly);
  if (d < 1) return false;
  // Any factorisation has a factor of degree <= d/2.
  for (std::uint64_t f = 2; poly_degree(f) <= d / 2; ++f) {
    if (poly_mod(poly, f) == 0) return false;
  }
  return true;
}

std::uint32_t builtin_modulus(unsigned d) {
  if (d < 1 || d > FieldParams::kMaxDegree) {
    throw std::invalid_argument("field degree must be in [1, 16], got " +
                                std::to_string(d));
  }
  return kModulusTable[d - 1];
}

FieldParams FieldParams::of_degree(unsigned d) {
  return FieldParams(d, builtin_modulus(d));
}

FieldParams FieldParams::with_modulus(std::uint32_t modulus) {
  const int d = poly_degree(modulus);
  if (d < 1 || d > static_cast<int>(kMaxDegree)) {
    throw std::invalid_argument("modulus degree must be in [1, 16]");
  }
  if (!is_irreducible_gf2(modulus)) {
    throw std::invalid_argument("modulus is reducible over GF(2)");
  }
  return FieldParams(static_cast<unsigned>(d), modulus);
}

FieldParams field_for_degree(unsigned k) {
  if (k == 0) throw std::invalid_argument("target degree k must be >= 1");
  // ceil(log2(m)) == bit_width(m - 1) for m >= 1.
  const std::uint64_t m = 2ULL * k - 1;
  const unsigned d = static_cast<unsigned>(std::bit_width(m - 1)) + 1;
  if (d > FieldParams::kMaxDegree) {
    throw std::invalid_argument("k = " + std::to_string(k) +
                                " needs a field larger than GF(2^16)");
  }
  return FieldParams::of_degree(d);
}

GF2dElement::GF2dElement(const FieldParams& field, std::uint32_t bits)
    : bits_(bits), modulus_(field.modulus()) {
  if (bits >= field.size()) {
    throw std::invalid_argument("element bits exceed field size");
  }
}

GF2dElement add(const GF2dElement& a, const GF2dElement& b) {
  require_same_field(a, b);
  GF2dElement out = a;
  out.bits_ = a.bits_ ^ b.bits_;
  return out;
}

GF2dElement mul(const GF2dElement& a, const GF2dElement& b) {
  require_same_field(a, b);
  std::uint32_t x = a.bits_;
  std::uint32_t y = b.bits_;
  std::uint32_t acc = 0;
  const std::uint32_t top = std::bit_floor(a.modulus_);
  while (y != 0) {
    if (y & 1U) acc ^= x;
    y >>= 1;
    x <<= 1;
    if (x & top) x ^= a.modulus_;
  }
  GF2dElement out = a;
  out.bits_ = acc;
  return out;
}

GF2dElement random_element(const FieldParams& field, std::mt19937_64& rng) {
  return GF2dElement(field, static_cast<std::uint32_t>(rng()) & field.mask());
}

}  // namespace qmono
