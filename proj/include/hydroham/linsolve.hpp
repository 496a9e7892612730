#ifndef HYDROHAM_LINSOLVE_HPP
#define HYDROHAM_LINSOLVE_HPP

#include <map>
#include <string>
#include <vector>

#include "hydroham/algebra.hpp"

namespace hydroham {

/// Sparse linear equation sum_i a_i x_i + constant = 0.
struct LinearEquation {
  std::map<int, Scalar> coeffs;
  Scalar constant;
};

/// Incremental exact row reduction over surd scalars.
class RowReducer {
 public:
  explicit RowReducer(int unknowns) : unknowns_(unknowns) {}
  /// Widens the solution vectors when columns were added along the way.
  void set_unknowns(int unknowns) { unknowns_ = unknowns; }

  /// Adds an equation; returns false once the system has become inconsistent.
  bool add(LinearEquation eq);
  bool consistent() const { return consistent_; }
  int rank() const { return static_cast<int>(pivots_.size()); }

  /// Solution with all free unknowns set to zero.
  std::vector<Scalar> particular() const;
  /// One vector per free unknown, spanning the homogeneous solutions.
  std::vector<std::vector<Scalar>> kernel() const;

 private:
  void eliminate(LinearEquation& eq) const;
  /// Reduced row echelon form of the stored rows.
  std::map<int, LinearEquation> reduced() const;

  int unknowns_;
  bool consistent_ = true;
  std::map<int, LinearEquation> pivots_;
};

/// Affine solution set of a system of identities in symbolic unknowns.
struct IdentitySolution {
  bool consistent = false;
  std::vector<Expr> unknowns;
  /// Values with every free direction set to zero.
  std::map<Expr, Scalar, ExprLess> particular;
  /// Homogeneous directions, indexed like `unknowns`.
  std::vector<std::map<Expr, Scalar, ExprLess>> kernel;
  /// Products of unknowns that were treated as independent unknowns.
  std::vector<Monomial> linearized;
  int equations = 0;

  /// Substitution binding every unknown to its particular value.
  Bindings particular_bindings() const;
};

/// Finds all values of `unknowns` (params) making every residual vanish
/// identically in the remaining atoms. Each residual is cleared of
/// denominators and split by monomials in the other atoms; the coefficients
/// give linear equations. Products of unknowns are linearized as new unknowns,
/// so callers must re-verify solutions whenever `linearized` is non-empty;
/// inconsistency, on the other hand, is a proof that no solution exists.
/// Residuals are processed in order, optionally stopping at the first
/// inconsistency.
IdentitySolution solve_identities(const std::vector<Expr>& residuals, const std::vector<Expr>& unknowns,
                                  bool stop_when_inconsistent = false);

}  // namespace hydroham

#endif  // HYDROHAM_LINSOLVE_HPP
