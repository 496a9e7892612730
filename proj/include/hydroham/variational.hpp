#ifndef HYDROHAM_VARIATIONAL_HPP
#define HYDROHAM_VARIATIONAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "hydroham/linsolve.hpp"
#include "hydroham/operators.hpp"

namespace hydroham {

/// u^i_{evolution} = rhs[i-1]. The right-hand sides use jets along the other
/// independent variable, and may also use first derivatives u^k_{evolution'}
/// of the transverse kind (for instance u^1_t inside an x-evolution).
struct EvolutionSystem {
  int n = 0;
  Direction evolution = Direction::T;
  std::vector<Expr> rhs;
  SymbolTable symbols;
};

/// delta h / delta u^i = sum_s (-D)^s dh/du^i_s, with jets along dir.
Expr euler(const Expr& h, int field, Direction dir);

/// The Hamiltonian flow C(delta h): u^i_{other(C.dir)} = g^{ij} D E_j +
/// b^{ij}_k u^k_D E_j + omega^{ij} E_j with E = delta h and D along C.dir.
EvolutionSystem flow(const NonHomOperator& c, const Expr& h);

/// Componentwise zero test of the difference.
Verdict flows_equal(const EvolutionSystem& a, const EvolutionSystem& b, const ZeroTestOptions& options = {});

/// sum_k coeffs[k] D^k f along dir (a scalar differential operator).
Expr apply_scalar_operator(const std::vector<Expr>& coeffs, const Expr& f, Direction dir);

struct DensitySearch {
  bool found = false;
  /// A solution density (free directions set to zero).
  Expr density;
  /// Densities spanning the homogeneous solutions (constants, Casimirs, ...).
  std::vector<Expr> kernel;
  int equations = 0;
  /// The ansatz actually used: each monomial alone and times each parameter.
  std::vector<Expr> ansatz;
};

/// All densities sum_m a_m m over the ansatz whose flow equals target, with
/// each a_m affine in the parameters of C and target. The problem is linear
/// in the unknown coefficients and solved exactly.
DensitySearch find_density(const NonHomOperator& c, const EvolutionSystem& target, const std::vector<Expr>& ansatz);

/// Monomials in u1..un of total degree <= degree (including 1).
std::vector<Expr> polynomial_ansatz(int n, int degree);

/// polynomial_ansatz plus, for every non-natural power u^q found in the
/// target, the powers u^(q+e) for e in -2..2 alone and times each other field.
std::vector<Expr> default_ansatz(int n, int degree, const EvolutionSystem& target);

struct LocalStructureSearch {
  /// Whether some operator with entries in the ansatz span carries h to the
  /// target and satisfies d_k g^{ij} = b^{ij}_k + b^{ji}_k (linear conditions).
  bool found = false;
  /// Solution of the linear conditions with free directions set to zero.
  NonHomOperator particular;
  int kernel_dimension = 0;
  int unknowns = 0;
  int equations = 0;
  /// Fail: the remaining (quadratic) Hamiltonian conditions are inconsistent
  /// on the linear family even with products of unknowns linearized, so no
  /// Hamiltonian operator exists in the span. Pass: `hamiltonian_operator`
  /// passes check_full. Inconclusive otherwise, or when the family exceeds
  /// the size budget.
  Status hamiltonian = Status::Inconclusive;
  std::optional<NonHomOperator> hamiltonian_operator;
  std::string note;
};

/// Searches for C = g D + b u_D + omega (D along the transverse direction of
/// the target) with every entry in the span of `ansatz`, g symmetric and
/// omega skew, such that flow(C, h) = target, then imposes the Hamiltonian
/// conditions on the resulting affine family of dimension <= max_family.
LocalStructureSearch search_local_structure(const EvolutionSystem& target, const Expr& h,
                                            const std::vector<Expr>& ansatz, int max_family = 200,
                                            const ZeroTestOptions& options = {});

/// Checks that the flow of p is translation along C.dir: u^i_{other} = u^i_{dir}.
CheckReport momentum_check(const NonHomOperator& c, const Expr& p, const ZeroTestOptions& options = {});

/// System file: header `components`, `evolution: x|t`, optional `variables`
/// and `parameters`, then one line `u1_t = ...` per component.
EvolutionSystem parse_system(const std::string& text);
std::string format_system(const EvolutionSystem& s);

}  // namespace hydroham

#endif  // HYDROHAM_VARIATIONAL_HPP
