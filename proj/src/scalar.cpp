#include "hydroham/scalar.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace hydroham {
namespace {

// Splits m > 0 into square * squarefree; returns {root of square, squarefree}.
std::pair<mpz_class, mpz_class> squarefree_split(mpz_class m) {
  mpz_class root = 1;
  mpz_class core = 1;
  for (unsigned long p = 2; p * p <= m && p < 1000000; ++p) {
    unsigned count = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      m /= p;
      ++count;
    }
    for (unsigned i = 0; i < count / 2; ++i) root *= p;
    if (count % 2 == 1) core *= p;
  }
  if (m > 1) {
    if (mpz_perfect_square_p(m.get_mpz_t()) != 0) {
      root *= sqrt(m);
    } else {
      core *= m;
    }
  }
  return {root, core};
}

std::vector<unsigned long> prime_factors(unsigned long r) {
  std::vector<unsigned long> out;
  for (unsigned long p = 2; p * p <= r; ++p) {
    if (r % p == 0) {
      out.push_back(p);
      while (r % p == 0) r /= p;
    }
  }
  if (r > 1) out.push_back(r);
  return out;
}

}  // namespace

std::string rational_str(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

std::optional<Rational> exact_root(const Rational& value, unsigned long k) {
  if (k == 1) return value;
  if (sgn(value) < 0 && k % 2 == 0) return std::nullopt;
  mpz_class num = abs(value.get_num());
  mpz_class den = value.get_den();
  mpz_class rn, rd;
  if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), k) == 0) return std::nullopt;
  if (mpz_root(rd.get_mpz_t(), den.get_mpz_t(), k) == 0) return std::nullopt;
  Rational out(rn, rd);
  out.canonicalize();
  if (sgn(value) < 0) out = -out;
  return out;
}

Scalar::Scalar(long value) {
  if (value != 0) terms_.emplace(1UL, Rational(value));
}

Scalar::Scalar(const Rational& value) {
  if (sgn(value) != 0) {
    Rational c = value;
    c.canonicalize();
    terms_.emplace(1UL, c);
  }
}

Scalar Scalar::sqrt_of(const Rational& q) {
  Rational v = q;
  v.canonicalize();
  if (sgn(v) < 0) throw ArithmeticError("square root of a negative rational");
  if (sgn(v) == 0) return {};
  // sqrt(n/d) = sqrt(n*d)/d
  mpz_class m = v.get_num() * v.get_den();
  auto [root, core] = squarefree_split(m);
  if (!core.fits_ulong_p()) throw ArithmeticError("surd radicand too large");
  Scalar out;
  Rational coeff(root, v.get_den());
  coeff.canonicalize();
  out.terms_.emplace(core.get_ui(), coeff);
  return out;
}

bool Scalar::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1UL);
}

bool Scalar::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first == 1UL && terms_.begin()->second == 1;
}

Rational Scalar::rational() const {
  if (!is_rational()) throw ArithmeticError("scalar is not rational: " + str());
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

void Scalar::add_term(unsigned long radicand, const Rational& coeff) {
  if (sgn(coeff) == 0) return;
  auto [it, inserted] = terms_.emplace(radicand, coeff);
  if (!inserted) {
    it->second += coeff;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Scalar Scalar::operator-() const {
  Scalar out = *this;
  for (auto& [r, c] : out.terms_) c = -c;
  return out;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  for (const auto& [r, c] : o.terms_) add_term(r, c);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  for (const auto& [r, c] : o.terms_) add_term(r, -c);
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_zero() || o.is_zero()) {
    terms_.clear();
    return *this;
  }
  if (o.is_rational()) {
    const Rational& k = o.terms_.begin()->second;
    for (auto& [r, c] : terms_) c *= k;
    return *this;
  }
  Scalar out;
  for (const auto& [ra, ca] : terms_) {
    for (const auto& [rb, cb] : o.terms_) {
      unsigned long g = std::gcd(ra, rb);
      unsigned long r = (ra / g) * (rb / g);
      out.add_term(r, ca * cb * g);
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ArithmeticError("division by zero");
  if (is_rational()) return Scalar(Rational(1) / terms_.begin()->second);
  std::vector<unsigned long> primes;
  for (const auto& [r, c] : terms_) {
    for (unsigned long p : prime_factors(r)) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  // Multiply by the conjugate flipping each prime in turn; the running product
  // loses that prime, so after all primes it is rational.
  Scalar numerator(1L);
  Scalar current = *this;
  for (unsigned long p : primes) {
    Scalar conj = current;
    for (auto& [r, c] : conj.terms_) {
      if (r % p == 0) c = -c;
    }
    numerator *= conj;
    current *= conj;
  }
  if (!current.is_rational() || current.is_zero()) {
    throw ArithmeticError("surd inverse failed to rationalise");
  }
  return numerator * Scalar(Rational(1) / current.rational());
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  Scalar result(1L);
  Scalar base = *this;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

std::optional<Scalar> Scalar::pow(const Rational& exponent) const {
  Rational e = exponent;
  e.canonicalize();
  if (e.get_den() == 1) {
    if (!e.get_num().fits_slong_p()) return std::nullopt;
    return pow(e.get_num().get_si());
  }
  if (e.get_den() != 2 || !is_rational()) return std::nullopt;
  Rational v = rational();
  if (sgn(v) < 0) return std::nullopt;
  if (!e.get_num().fits_slong_p()) return std::nullopt;
  return Scalar::sqrt_of(v).pow(e.get_num().get_si());
}

int Scalar::compare(const Scalar& o) const {
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
    if (a->first != b->first) return a->first < b->first ? -1 : 1;
    int c = cmp(a->second, b->second);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (a == terms_.end() && b == o.terms_.end()) return 0;
  return a == terms_.end() ? -1 : 1;
}

bool Scalar::is_negative_leading() const {
  return !terms_.empty() && sgn(terms_.begin()->second) < 0;
}

std::size_t Scalar::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& [r, c] : terms_) {
    h ^= std::hash<unsigned long>{}(r) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= std::hash<std::string>{}(rational_str(c)) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

std::string Scalar::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [r, c] : terms_) {
    Rational mag = abs(c);
    bool neg = sgn(c) < 0;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    if (r == 1) {
      out += rational_str(mag);
    } else {
      if (mag != 1) out += rational_str(mag) + "*";
      out += "sqrt(" + std::to_string(r) + ")";
    }
  }
  return out;
}

}  // namespace hydroham
