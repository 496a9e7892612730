#ifndef HYDROHAM_SCALAR_HPP
#define HYDROHAM_SCALAR_HPP

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace hydroham {

using Rational = mpq_class;

class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact element of Q(sqrt(p1), sqrt(p2), ...).
///
/// Stored as a sum of rational multiples of sqrt(r) with r squarefree; r = 1
/// is the rational part. Products of surds are reduced on the fly, so
/// sqrt(2)*sqrt(6) == 2*sqrt(3) and sqrt(8) == 2*sqrt(2).
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value);  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& value);  // NOLINT(google-explicit-constructor)

  /// Square root of a non-negative rational. Throws ArithmeticError on q < 0.
  static Scalar sqrt_of(const Rational& q);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  bool is_one() const;
  /// Rational value; throws if the scalar carries a surd.
  Rational rational() const;
  const std::map<unsigned long, Rational>& terms() const { return terms_; }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  Scalar inverse() const;
  Scalar pow(long exponent) const;
  /// Rational power; defined for integer exponents and for exponents with
  /// denominator 2 applied to a non-negative rational.
  std::optional<Scalar> pow(const Rational& exponent) const;

  /// Total order used for canonical sorting.
  int compare(const Scalar& o) const;
  /// True if the leading rational coefficient is negative.
  bool is_negative_leading() const;
  std::size_t hash() const;
  /// Grammar form, e.g. "3/2", "-sqrt(2)", "1 + 1/2*sqrt(3)".
  std::string str() const;
  /// True if str() needs parentheses when used as a factor.
  bool is_compound() const { return terms_.size() > 1; }

 private:
  void add_term(unsigned long radicand, const Rational& coeff);
  std::map<unsigned long, Rational> terms_;
};

/// Exact k-th root of a rational, if it exists (positive root for even k).
std::optional<Rational> exact_root(const Rational& value, unsigned long k);

std::string rational_str(const Rational& q);

}  // namespace hydroham

#endif  // HYDROHAM_SCALAR_HPP
