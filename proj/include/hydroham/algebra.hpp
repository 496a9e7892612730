#ifndef HYDROHAM_ALGEBRA_HPP
#define HYDROHAM_ALGEBRA_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydroham/expr.hpp"

namespace hydroham {

/// Raised when an expansion exceeds the term budget.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Upper bound on the number of terms any intermediate polynomial may hold.
void set_term_budget(std::size_t terms);
std::size_t term_budget();

struct Factor {
  Expr atom;
  Rational exp;
};

/// Product of atoms with rational exponents, sorted by atom.
///
/// Atoms are jets, params, slots, function applications and canonical
/// primitive sums. A sum only appears with a negative integer exponent (an
/// inverse); positive powers are always expanded. Fractional exponents only
/// appear on field variables. Algebraic function atoms carry exponent 1.
using Monomial = std::vector<Factor>;

int compare(const Monomial& a, const Monomial& b);

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

/// Canonical sparse polynomial over surd scalars.
class Poly {
 public:
  using Terms = std::map<Monomial, Scalar, MonomialLess>;

  Poly() = default;
  explicit Poly(const Scalar& constant);
  static Poly atom(const Expr& atom, const Rational& exp = Rational(1));

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (zero if absent).
  Scalar constant() const;

  /// Adds c*m, reducing algebraic-function powers to exponent 0 or 1.
  void add_term(const Monomial& m, const Scalar& c);
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(const Scalar& c) const;
  Poly pow(unsigned long k) const;

  Expr to_expr() const;

 private:
  Terms terms_;
};

/// Expands an expression into canonical polynomial form.
Poly to_poly(const Expr& e);

/// Canonical form of e; idempotent, and zero expressions of any shape map to 0.
Expr normalize(const Expr& e);

struct Cleared {
  Poly numerator;
  /// False if inverse sums survive (for instance inside function arguments), in
  /// which case a nonzero numerator does not prove e nonzero.
  bool complete = true;
};

/// Multiplies e by the powers of its inverse-sum atoms needed to make it a
/// Laurent polynomial in the remaining atoms. e is zero iff the numerator is
/// zero, as long as the clearing is complete.
Cleared clear_denominators(const Expr& e);

/// Derivative with respect to an atom: a jet variable, a param or a slot.
Expr partial(const Expr& e, const Expr& var);
Poly partial(const Poly& p, const Expr& var);

/// Total derivative along dir: sum over jets of the same direction (and field
/// variables) of de/du^i_s * u^i_{s+1}.
Expr total_derivative(const Expr& e, Direction dir);
Poly total_derivative(const Poly& p, Direction dir);

/// Closed-form definition of an arbitrary function in terms of Expr::slot(k).
struct FunctionBinding {
  int arity = 1;
  Expr body;
};

struct Bindings {
  /// Jets, params and slots mapped to replacement expressions.
  std::map<Expr, Expr, ExprLess> atoms;
  std::map<std::string, FunctionBinding> functions;
};

/// Simultaneous substitution followed by normalization. A bound function's
/// derivative symbols become the matching derivatives of the body.
Expr substitute(const Expr& e, const Bindings& b);

/// Structural replacement of atoms without normalization.
Expr replace(const Expr& e, const std::map<Expr, Expr, ExprLess>& map);

/// Replaces field u^i by images[i-1] and prolongs: u^i_{kx} becomes D_x^k of
/// the image, and likewise for t-jets.
Expr substitute_fields(const Expr& e, const std::vector<Expr>& images);

/// Atoms of the given kind found anywhere in e (including inside function
/// arguments and inverse sums).
std::set<Expr, ExprLess> collect(const Expr& e, Kind kind);
std::set<std::string> function_names(const Expr& e);
bool has_functions(const Expr& e);
/// Highest jet order of field i along dir in e (-1 if absent, 0 for the field
/// variable itself).
int max_order(const Expr& e, int field, Direction dir);
/// Largest field index referenced.
int max_field(const Expr& e);

}  // namespace hydroham

#endif  // HYDROHAM_ALGEBRA_HPP
