#include "qmono/oracle.hpp"

#include <sstream>

#include "qmono/errors.hpp"

namespace qmono {

namespace {

[[noreturn]] void too_large(std::size_t max_terms) {
  throw OracleLimitError("expansion exceeds the term cap of " +
                         std::to_string(max_terms) +
                         " terms; instance too large for the oracle");
}

}  // namespace

Monomial::Monomial(std::map<std::string, unsigned> exponents) {
  for (auto& [name, e] : exponents) {
    if (e != 0) exponents_.emplace(name, e);
  }
}

unsigned Monomial::exponent(const std::string& name) const {
  auto it = exponents_.find(name);
  return it == exponents_.end() ? 0 : it->second;
}

unsigned Monomial::degree() const noexcept {
  unsigned d = 0;
  for (const auto& [name, e] : exponents_) d += e;
  return d;
}

bool Monomial::is_multilinear() const noexcept { return is_q_monomial(2); }

bool Monomial::is_q_monomial(unsigned q) const noexcept {
  for (const auto& [name, e] : exponents_) {
    if (e < 1 || e > q - 1) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out = *this;
  for (const auto& [name, e] : other.exponents_) out.exponents_[name] += e;
  return out;
}

Monomial Monomial::restrict(const std::function<bool(const std::string&)>& keep) const {
  Monomial out;
  for (const auto& [name, e] : exponents_) {
    if (keep(name)) out.exponents_.emplace(name, e);
  }
  return out;
}

std::string Monomial::to_string() const {
  if (exponents_.empty()) return "1";
  std::string s;
  for (const auto& [name, e] : exponents_) {
    if (!s.empty()) s += '*';
    s += name;
    if (e != 1) s += '^' + std::to_string(e);
  }
  return s;
}

ExpandedPolynomial::ExpandedPolynomial(Terms terms) {
  for (auto& [m, c] : terms) {
    if (c != 0) terms_.emplace(m, c);
  }
}

ExpandedPolynomial ExpandedPolynomial::monomial(const Monomial& m, BigInt coeff) {
  return ExpandedPolynomial(Terms{{m, std::move(coeff)}});
}

BigInt ExpandedPolynomial::evaluate(const std::map<std::string, BigInt>& point) const {
  BigInt total = 0;
  for (const auto& [m, c] : terms_) {
    BigInt term = c;
    for (const auto& [name, e] : m.exponents()) {
      auto it = point.find(name);
      if (it == point.end()) {
        term = 0;
        break;
      }
      term *= boost::multiprecision::pow(it->second, e);
    }
    total += term;
  }
  return total;
}

std::string ExpandedPolynomial::to_string() const {
  std::ostringstream os;
  for (const auto& [m, c] : terms_) {
    os << c;
    if (!m.exponents().empty()) os << '*' << m.to_string();
    os << '\n';
  }
  return os.str();
}

ExpandedPolynomial add(const ExpandedPolynomial& a, const ExpandedPolynomial& b,
                       std::size_t max_terms) {
  ExpandedPolynomial out = a;
  for (const auto& [m, c] : b.terms_) {
    auto [it, inserted] = out.terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) out.terms_.erase(it);
    }
  }
  if (out.terms_.size() > max_terms) too_large(max_terms);
  return out;
}

ExpandedPolynomial multiply(const ExpandedPolynomial& a, const ExpandedPolynomial& b,
                            std::size_t max_terms) {
  ExpandedPolynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto [it, inserted] = out.terms_.emplace(ma * mb, ca * cb);
      if (!inserted) it->second += ca * cb;
      if (out.terms_.size() > max_terms) too_large(max_terms);
    }
  }
  std::erase_if(out.terms_, [](const auto& kv) { return kv.second == 0; });
  return out;
}

ExpandedPolynomial expand(const Circuit& c, const ExpandOptions& options) {
  const auto& names = options.labels.empty() ? c.variables() : options.labels;
  if (names.size() != c.variables().size()) {
    throw std::invalid_argument("expand: label count does not match variable count");
  }
  std::vector<ExpandedPolynomial> leaves;
  leaves.reserve(names.size());
  for (const auto& n : names) leaves.push_back(ExpandedPolynomial::monomial(Monomial::variable(n)));

  const std::size_t cap = options.max_terms;
  Domain<ExpandedPolynomial> domain{
      [] { return ExpandedPolynomial{}; },
      [cap](const ExpandedPolynomial& x, const ExpandedPolynomial& y) { return add(x, y, cap); },
      [cap](const ExpandedPolynomial& x, const ExpandedPolynomial& y) {
        return multiply(x, y, cap);
      }};
  return evaluate<ExpandedPolynomial>(c, std::span<const ExpandedPolynomial>(leaves), domain);
}

bool has_q_monomial(const ExpandedPolynomial& p, unsigned q, unsigned k) {
  return q_monomial_witness(p, q, k).has_value();
}

std::optional<Monomial> q_monomial_witness(const ExpandedPolynomial& p, unsigned q,
                                           unsigned k) {
  for (const auto& [m, c] : p.terms()) {
    if (m.degree() == k && m.is_q_monomial(q)) return m;
  }
  return std::nullopt;
}

std::optional<unsigned> min_q_monomial_degree(const ExpandedPolynomial& p, unsigned q) {
  std::optional<unsigned> best;
  for (const auto& [m, c] : p.terms()) {
    if (!m.is_q_monomial(q)) continue;
    if (!best || m.degree() < *best) best = m.degree();
  }
  return best;
}

BigInt coefficient_of(const ExpandedPolynomial& p, const Monomial& m) {
  auto it = p.terms().find(m);
  return it == p.terms().end() ? BigInt(0) : it->second;
}

std::optional<std::pair<Monomial, BigInt>> y_multilinear_witness(
    const ExpandedPolynomial& g, unsigned k,
    const std::function<bool(const std::string&)>& is_y) {
  for (const auto& [m, c] : g.terms()) {
    if (!m.is_multilinear()) continue;
    if (c % 2 == 0) continue;
    if (m.restrict(is_y).degree() != k) continue;
    return std::make_pair(m, c);
  }
  return std::nullopt;
}

}  // namespace qmono
