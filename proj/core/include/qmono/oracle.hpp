#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qmono/circuit.hpp"

namespace qmono {

using BigInt = boost::multiprecision::cpp_int;

/// A product of variables with positive exponents, keyed by variable name.
/// Ordering is lexicographic over (name, exponent) pairs.
class Monomial {
 public:
  Monomial() = default;
  /// Zero exponents are dropped.
  explicit Monomial(std::map<std::string, unsigned> exponents);
  static Monomial variable(const std::string& name) { return Monomial({{name, 1}}); }

  const std::map<std::string, unsigned>& exponents() const noexcept { return exponents_; }
  unsigned exponent(const std::string& name) const;
  unsigned degree() const noexcept;
  bool is_multilinear() const noexcept;
  /// Every exponent in [1, q-1]. A 2-monomial is multilinear.
  bool is_q_monomial(unsigned q) const noexcept;

  Monomial operator*(const Monomial& other) const;

  /// The sub-monomial on variables accepted by `keep`.
  Monomial restrict(const std::function<bool(const std::string&)>& keep) const;

  /// `x1^4*x2`; "1" for the empty monomial.
  std::string to_string() const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  std::map<std::string, unsigned> exponents_;
};

/// A polynomial in sum-product form with exact integer coefficients. Zero
/// coefficients are never stored.
class ExpandedPolynomial {
 public:
  using Terms = std::map<Monomial, BigInt>;

  ExpandedPolynomial() = default;
  explicit ExpandedPolynomial(Terms terms);
  static ExpandedPolynomial monomial(const Monomial& m, BigInt coeff = 1);

  const Terms& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Value at an integer point; unlisted variables evaluate to 0.
  BigInt evaluate(const std::map<std::string, BigInt>& point) const;

  /// One term per line: `coef*var^exp*...`, in monomial order.
  std::string to_string() const;

  friend bool operator==(const ExpandedPolynomial&, const ExpandedPolynomial&) = default;

 private:
  friend ExpandedPolynomial add(const ExpandedPolynomial&, const ExpandedPolynomial&,
                                std::size_t);
  friend ExpandedPolynomial multiply(const ExpandedPolynomial&,
                                     const ExpandedPolynomial&, std::size_t);
  Terms terms_;
};

constexpr std::size_t kDefaultMaxTerms = 1'000'000;

/// Polynomial sum/product; throw OracleLimitError when the result would hold
/// more than max_terms terms.
ExpandedPolynomial add(const ExpandedPolynomial& a, const ExpandedPolynomial& b,
                       std::size_t max_terms = kDefaultMaxTerms);
ExpandedPolynomial multiply(const ExpandedPolynomial& a, const ExpandedPolynomial& b,
                            std::size_t max_terms = kDefaultMaxTerms);

struct ExpandOptions {
  std::size_t max_terms = kDefaultMaxTerms;
  /// Optional per-variable names to use in the expansion instead of the
  /// circuit's own (e.g. to merge terminal copies back into originals).
  std::vector<std::string> labels;
};

/// Exact sum-product expansion of the circuit.
ExpandedPolynomial expand(const Circuit& c, const ExpandOptions& options = {});

bool has_q_monomial(const ExpandedPolynomial& p, unsigned q, unsigned k);
/// A q-monomial of degree exactly k, if any (first in monomial order).
std::optional<Monomial> q_monomial_witness(const ExpandedPolynomial& p, unsigned q,
                                           unsigned k);
std::optional<unsigned> min_q_monomial_degree(const ExpandedPolynomial& p, unsigned q);

BigInt coefficient_of(const ExpandedPolynomial& p, const Monomial& m);

/// A term beta*phi that survives characteristic 2 (odd coefficient) with
/// phi multilinear of degree k over the variables accepted by `is_y` and
/// beta multilinear over the rest.
std::optional<std::pair<Monomial, BigInt>> y_multilinear_witness(
    const ExpandedPolynomial& g, unsigned k,
    const std::function<bool(const std::string&)>& is_y);

}  // namespace qmono
