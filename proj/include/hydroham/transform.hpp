#ifndef HYDROHAM_TRANSFORM_HPP
#define HYDROHAM_TRANSFORM_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydroham/catalog.hpp"
#include "hydroham/operators.hpp"
#include "hydroham/variational.hpp"

namespace hydroham {

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// u_t = f1 + f2 * u_{kx}, with f1 and f2 depending on u, ..., u_{(k-1)x}.
struct ScalarEvolutionEquation {
  int order = 0;
  Expr f1;
  Expr f2;
};

/// Reads `u_t = ...` or any equation `lhs = rhs` linear in u_t, in the
/// scalar field u (field 1) and its x-jets.
ScalarEvolutionEquation scalar_equation(const std::string& text);
ScalarEvolutionEquation scalar_equation(const Expr& u_t_rhs);

/// With u^1 = u, u^2 = u_x, ..., u^k = u_{(k-1)x}: the x-evolution system
/// u^i_x = u^{i+1} (i < k), u^k_x = (u^1_t - F1) / F2.
EvolutionSystem invert_equation(const ScalarEvolutionEquation& eq);

/// Point change of variables ubar = forward(u), u = inverse(ubar). Both sides
/// use the field names u1..un.
struct PointMap {
  std::vector<Expr> forward;
  std::vector<Expr> inverse;

  static PointMap identity(int n);
  static PointMap permutation(const std::vector<int>& image);  // ubar^i = u^{image[i]}, 1-based
  /// ubar = A u + c with A invertible (exact inverse computed).
  static PointMap affine(const std::vector<std::vector<Scalar>>& a, const std::vector<Scalar>& shift);
  PointMap then(const PointMap& next) const;
  PointMap inverted() const { return {inverse, forward}; }
  /// forward(inverse(ubar)) == ubar and inverse(forward(u)) == u.
  bool consistent(const ZeroTestOptions& options = {}) const;
};

/// The operator in the new variables: gbar = J g J^T, omegabar = J omega J^T
/// and bbar^{ij}_k = (J^i_p J^j_q b^{pq}_s + J^i_p g^{pq} d_q d_s ubar^j)
/// (J^{-1})^s_k, all re-expressed through the inverse map.
NonHomOperator push_forward(const NonHomOperator& c, const PointMap& m, const ZeroTestOptions& options = {});

/// A density written in the new variables: h(inverse(ubar)).
Expr push_forward_density(const Expr& h, const PointMap& m);

/// The system in the new variables: ubar^i_e = J^i_p(u) u^p_e, with u and its
/// jets replaced through the inverse map.
EvolutionSystem push_forward_system(const EvolutionSystem& s, const PointMap& m);

/// Map file: `components`, optional `variables` and `parameters`, then a
/// `forward:` section (ubar^i in terms of u, one per line, an optional
/// "ubar1 =" label allowed) and an `inverse:` section (u^i in terms of ubar,
/// written with the same field names).
PointMap parse_point_map(const std::string& text);

/// Jacobian d forward^i / d u^p.
Matrix jacobian(const std::vector<Expr>& map);

/// forward as "ubar1 = ..., ubar2 = ...".
std::string describe(const PointMap& m);

struct CatalogMatch {
  std::string entry_id;
  /// push_forward(c, map) equals instantiate(entry, instantiation).
  PointMap map;
  Instantiation instantiation;
};

/// Restricted matcher: for every map in (identity and `extra_maps`) composed
/// with variable permutations and sign flips, pattern-unifies the transported
/// operator with the catalog templates of the same size and rank, solving for
/// each free function or constant from a template entry in which it is the
/// only unknown and occurs linearly and undifferentiated. The first full match
/// (side constraints included) is returned. No match does not mean the operator
/// is not Hamiltonian.
std::optional<CatalogMatch> match_catalog(const NonHomOperator& c, const std::vector<PointMap>& extra_maps = {},
                                          const ZeroTestOptions& options = {});

/// Unification against one entry, without any change of variables.
std::optional<Instantiation> unify_with_entry(const NonHomOperator& c, const CatalogEntry& entry,
                                              const ZeroTestOptions& options = {});

}  // namespace hydroham

#endif  // HYDROHAM_TRANSFORM_HPP
