#ifndef HYDROHAM_OPERATORS_HPP
#define HYDROHAM_OPERATORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "hydroham/expr.hpp"
#include "hydroham/parse.hpp"
#include "hydroham/reports.hpp"
#include "hydroham/zero_test.hpp"

namespace hydroham {

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& message, int line);
  int line() const { return line_; }

 private:
  int line_;
};

using Matrix = std::vector<std::vector<Expr>>;
/// t[i][j][k]; for b this is b^{ij}_k (0-based).
using Tensor3 = std::vector<Matrix>;

Matrix zero_matrix(int n);
Tensor3 zero_tensor(int n);

/// C^{ij} = g^{ij} D + b^{ij}_k u^k_D + omega^{ij}, with D the derivative
/// along `dir`.
struct NonHomOperator {
  int n = 0;
  Direction dir = Direction::X;
  Matrix g;
  Tensor3 b;
  Matrix omega;
  /// Names used when printing and reading the entries.
  SymbolTable symbols;

  static NonHomOperator zero(int n, Direction dir = Direction::X);
  /// Every entry in canonical form.
  NonHomOperator normalized() const;
  /// Throws ExprError if shapes disagree or an entry depends on jets.
  void validate() const;
};

/// Omega^{ij} = -omega^{ji} and the cyclic Jacobi sum.
CheckReport check_ultralocal(const Matrix& omega, const ZeroTestOptions& options = {});

/// The six conditions on (g, b) for g D + b u_D to be Hamiltonian, with no
/// non-degeneracy assumption.
CheckReport check_first_order(const Matrix& g, const Tensor3& b, const ZeroTestOptions& options = {});

/// Phi^{ijk} = g^{is} d_s omega^{jk} - b^{ij}_s omega^{sk} - b^{ik}_s omega^{js}.
Tensor3 compute_phi(const NonHomOperator& c);

/// Phi^{ijk} = Phi^{kij} and the derivative condition on Phi.
CheckReport check_compatibility(const NonHomOperator& c, const ZeroTestOptions& options = {});

CheckReport check_full(const NonHomOperator& c, const ZeroTestOptions& options = {});

/// Every residual whose vanishing check_full tests, unnormalized: ultralocal
/// and compatibility conditions first, then (optionally) the first-order ones.
std::vector<Expr> hamiltonian_residuals(const NonHomOperator& c, bool include_first_order = true);

/// Size of the largest minor of g that is not identically zero.
int generic_rank(const Matrix& g, const ZeroTestOptions& options = {});

/// Determinant by cofactor expansion (unnormalized).
Expr determinant(const Matrix& m);

/// Reads the operator file format:
///
///   components: 3
///   direction: x
///   variables: u, v, w        (optional)
///   parameters: c             (optional)
///   radical: s = 1 + arg1^2   (optional, repeatable)
///   g:
///     1, 0, 0
///     ...
///   b[3]:                     (matrix of b^{ij}_3)
///     ...
///   omega:
///     ...
///
/// Missing sections are zero; `#` starts a comment.
NonHomOperator parse_operator(const std::string& text);
std::string format_operator(const NonHomOperator& c);

}  // namespace hydroham

#endif  // HYDROHAM_OPERATORS_HPP
