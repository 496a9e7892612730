#ifndef HYDROHAM_EXPR_HPP
#define HYDROHAM_EXPR_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydroham/scalar.hpp"

namespace hydroham {

class ExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind : std::uint8_t { Number, Jet, Param, Slot, Func, Add, Mul, Pow };

/// Independent variable a jet coordinate is differentiated along. Field
/// variables (order 0) carry Direction::None.
enum class Direction : char { None = '\0', X = 'x', T = 't' };

Direction other(Direction d);
char direction_char(Direction d);

struct Node;

/// Immutable symbolic expression.
///
/// A tree over numbers (exact surd scalars), jet coordinates u^i_sigma,
/// symbolic constants, function-argument slots, applications of arbitrary
/// functions (with a derivative multi-index) and the arithmetic nodes. Copies
/// share structure. Construction performs only trivial folding; canonical form
/// is produced by normalize().
class Expr {
 public:
  Expr();  // zero
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(int value) : Expr(static_cast<long>(value)) {}  // NOLINT
  Expr(const Scalar& value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr jet(int field, int order, Direction dir);
  /// Field variable u^i (order-0 jet).
  static Expr var(int field) { return jet(field, 0, Direction::None); }
  static Expr param(const std::string& name);
  /// Placeholder for the k-th argument of a function binding (1-based).
  static Expr slot(int k);
  /// Application f_{deriv}(args). An empty deriv means the undifferentiated
  /// function. A radicand P (an expression in slot 1) declares f as the
  /// algebraic function with f(z)^2 = P(z).
  static Expr func(const std::string& name, std::vector<Expr> args,
                   std::vector<int> deriv = {}, std::optional<Expr> radicand = {});
  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr pow(const Expr& base, const Rational& exponent);
  static Expr sqrt(const Rational& value) { return Expr(Scalar::sqrt_of(value)); }

  Kind kind() const;
  bool is_number() const { return kind() == Kind::Number; }
  bool is_literal_zero() const;
  bool is_literal_one() const;
  const Scalar& number() const;
  int field() const;
  int order() const;
  Direction direction() const;
  bool is_field_variable() const { return kind() == Kind::Jet && order() == 0; }
  const std::string& name() const;
  int slot_index() const;
  /// Func arguments, Add terms, Mul factors, or {base} for Pow.
  const std::vector<Expr>& children() const;
  const std::vector<int>& derivative_index() const;
  /// Radicand of an algebraic function, nullptr otherwise.
  const Expr* radicand() const;
  bool is_radical() const { return radicand() != nullptr; }
  const Rational& exponent() const;
  const Expr& base() const { return children().front(); }

  std::size_t hash() const;
  const Node* node() const { return node_.get(); }

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Structural total order; canonical forms compare equal iff identical.
int compare(const Expr& a, const Expr& b);
inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
inline bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }
inline bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

Expr pow(const Expr& base, long exponent);

}  // namespace hydroham

#endif  // HYDROHAM_EXPR_HPP
