#include "qmono/group_algebra.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace qmono {

namespace {

constexpr std::size_t kNaiveCutoff = 8;

void require_compatible(const GroupAlgebraElement& u,
                        const GroupAlgebraElement& v) {
  if (u.k() != v.k()) {
    throw std::invalid_argument("group algebra dimension mismatch: k=" +
                                std::to_string(u.k()) + " vs k=" +
                                std::to_string(v.k()));
  }
  if (!(u.field() == v.field())) {
    throw std::invalid_argument("group algebra elements over different fields");
  }
}

void naive_kernel(const FieldParams& field, std::span<const std::uint32_t> a,
                  std::span<const std::uint32_t> b,
                  std::span<std::uint32_t> out) {
  const std::size_t n = a.size();
  for (std::size_t w = 0; w < n; ++w) out[w] = 0;
  // Small fields: one multiplication row per a[x] instead of a carryless
  // multiply per pair.
  const bool tabulate = field.size() <= n;
  std::vector<std::uint32_t> row(tabulate ? field.size() : 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (a[x] == 0) continue;
    if (tabulate) {
      for (std::uint32_t c = 0; c < field.size(); ++c) row[c] = field.mul_raw(a[x], c);
      for (std::size_t y = 0; y < n; ++y) out[x ^ y] ^= row[b[y]];
    } else {
      for (std::size_t y = 0; y < n; ++y) out[x ^ y] ^= field.mul_raw(a[x], b[y]);
    }
  }
}

}  // namespace

GroupVector::GroupVector(unsigned k, std::uint32_t bits) : k_(k), bits_(bits) {
  if (k == 0 || k > GroupAlgebraElement::kMaxK) {
    throw std::invalid_argument("group dimension k must be in [1, 20]");
  }
  if (bits >> k) throw std::invalid_argument("group vector has bits above k");
}

GroupVector GroupVector::operator*(const GroupVector& other) const {
  if (k_ != other.k_) throw std::invalid_argument("group dimension mismatch");
  return GroupVector(k_, bits_ ^ other.bits_);
}

GroupAlgebraElement::GroupAlgebraElement(const FieldParams& field, unsigned k)
    : field_(field), k_(k) {
  if (k == 0 || k > kMaxK) {
    throw std::invalid_argument("group dimension k must be in [1, 20], got " +
                                std::to_string(k));
  }
  coeffs_.assign(std::size_t{1} << k, 0);
}

GroupAlgebraElement::GroupAlgebraElement(const FieldParams& field, unsigned k,
                                         std::vector<std::uint32_t> coeffs)
    : GroupAlgebraElement(field, k) {
  if (coeffs.size() != coeffs_.size()) {
    throw std::invalid_argument("coefficient vector must have 2^k entries");
  }
  for (auto c : coeffs) {
    if (c >= field.size()) {
      throw std::invalid_argument("coefficient outside the field");
    }
  }
  coeffs_ = std::move(coeffs);
}

GF2dElement GroupAlgebraElement::coefficient(std::uint32_t index) const {
  return GF2dElement(field_, coeffs_.at(index));
}

void GroupAlgebraElement::set_coefficient(std::uint32_t index,
                                          const GF2dElement& value) {
  if (value.modulus() != field_.modulus()) {
    throw std::invalid_argument("coefficient from a different field");
  }
  coeffs_.at(index) = value.bits();
}

bool GroupAlgebraElement::is_zero() const noexcept {
  for (auto c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

GroupAlgebraElement ga_zero(const FieldParams& field, unsigned k) {
  return GroupAlgebraElement(field, k);
}

GroupAlgebraElement ga_identity(const FieldParams& field, unsigned k) {
  GroupAlgebraElement e(field, k);
  e.raw()[0] = 1;
  return e;
}

GroupAlgebraElement ga_add(const GroupAlgebraElement& u,
                           const GroupAlgebraElement& v) {
  require_compatible(u, v);
  GroupAlgebraElement out = u;
  auto dst = out.raw();
  auto src = v.raw();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
  return out;
}

GroupAlgebraElement ga_mul_naive(const GroupAlgebraElement& u,
                                 const GroupAlgebraElement& v) {
  require_compatible(u, v);
  GroupAlgebraElement out(u.field(), u.k());
  naive_kernel(u.field(), u.raw(), v.raw(), out.raw());
  return out;
}

GroupAlgebraElement ga_mul(const GroupAlgebraElement& u,
                           const GroupAlgebraElement& v) {
  require_compatible(u, v);
  GroupAlgebraElement out(u.field(), u.k());
  std::vector<std::uint32_t> scratch(3 * u.size());
  detail::xor_convolve_karatsuba(u.field(), u.raw(), v.raw(), out.raw(),
                                 scratch);
  return out;
}

GroupAlgebraElement ga_scale(const GF2dElement& c, const GroupAlgebraElement& u) {
  if (c.modulus() != u.field().modulus()) {
    throw std::invalid_argument("scalar from a different field");
  }
  GroupAlgebraElement out = u;
  for (auto& x : out.raw()) x = u.field().mul_raw(c.bits(), x);
  return out;
}

GroupAlgebraElement ga_from_vector_plus_v0(const FieldParams& field,
                                           const GroupVector& v) {
  if (v.is_identity()) {
    throw std::invalid_argument(
        "v + v_0 requires v != v_0 (the sum would be zero)");
  }
  GroupAlgebraElement e(field, v.k());
  e.raw()[0] = 1;
  e.raw()[v.bits()] = 1;
  return e;
}

GroupVector random_nonzero_vector(unsigned k, std::mt19937_64& rng) {
  if (k == 0 || k > GroupAlgebraElement::kMaxK) {
    throw std::invalid_argument("group dimension k must be in [1, 20]");
  }
  const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  for (;;) {
    const auto bits = static_cast<std::uint32_t>(rng() & mask);
    if (bits != 0) return GroupVector(k, bits);
  }
}

namespace detail {

void xor_convolve_karatsuba(const FieldParams& field,
                            std::span<const std::uint32_t> a,
                            std::span<const std::uint32_t> b,
                            std::span<std::uint32_t> out,
                            std::span<std::uint32_t> scratch) {
  const std::size_t n = a.size();
  if (n <= kNaiveCutoff) {
    naive_kernel(field, a, b, out);
    return;
  }
  // Split on the top bit: a = a0 + t a1 with t^2 = 1, so
  //   low  = a0 b0 + a1 b1
  //   high = a0 b1 + a1 b0 = (a0 + a1)(b0 + b1) + low   (characteristic 2)
  const std::size_t h = n / 2;
  auto sum_a = scratch.subspan(0, h);
  auto sum_b = scratch.subspan(h, h);
  auto cross = scratch.subspan(2 * h, h);
  auto rest = scratch.subspan(3 * h);

  xor_convolve_karatsuba(field, a.first(h), b.first(h), out.first(h), rest);
  xor_convolve_karatsuba(field, a.subspan(h), b.subspan(h), out.subspan(h),
                         rest);
  for (std::size_t i = 0; i < h; ++i) {
    sum_a[i] = a[i] ^ a[h + i];
    sum_b[i] = b[i] ^ b[h + i];
  }
  xor_convolve_karatsuba(field, sum_a, sum_b, cross, rest);
  for (std::size_t i = 0; i < h; ++i) {
    const std::uint32_t low = out[i] ^ out[h + i];
    out[i] = low;
    out[h + i] = cross[i] ^ low;
  }
}

}  // namespace detail

}  // namespace qmono
