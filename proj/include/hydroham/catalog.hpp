#ifndef HYDROHAM_CATALOG_HPP
#define HYDROHAM_CATALOG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hydroham/algebra.hpp"
#include "hydroham/operators.hpp"

namespace hydroham {

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bindings violate a side constraint; residual is the nonzero remainder.
class ConstraintViolation : public CatalogError {
 public:
  ConstraintViolation(const std::string& what, std::string residual)
      : CatalogError(what), residual_(std::move(residual)) {}
  const std::string& residual() const { return residual_; }

 private:
  std::string residual_;
};

/// An arbitrary function of the template and the fields it depends on.
struct FunctionParameter {
  std::string name;
  std::vector<int> fields;
};

struct CatalogEntry {
  std::string id;  // "C3,2"
  int n = 0;
  int rank = 0;
  /// Operator file with free functions and constants.
  std::string template_text;
  std::vector<FunctionParameter> functions;
  std::vector<std::string> constants;
  /// Expressions in the template's functions that must vanish identically.
  std::vector<std::string> side_constraints;
  /// Loci excluded from the working chart, e.g. "u != 0".
  std::vector<std::string> chart;

  NonHomOperator templ() const;
  std::vector<Expr> constraints() const;
};

/// All 13 entries in display order.
const std::vector<CatalogEntry>& catalog();
/// Entries with n components (2 or 3), optionally of one rank.
std::vector<CatalogEntry> enumerate(int n, std::optional<int> rank = {});
/// Accepts "C3,2", "C_{3,2}", "c32", "C3.10"; throws CatalogError otherwise.
std::string canonical_id(const std::string& id);
const CatalogEntry& find_entry(const std::string& id);

struct Instantiation {
  std::map<std::string, FunctionBinding> functions;
  std::map<std::string, Expr> constants;

  Bindings bindings() const;
  std::string describe() const;
};

/// The concrete operator. Side constraints are checked first.
NonHomOperator instantiate(const CatalogEntry& entry, const Instantiation& inst, const ZeroTestOptions& options = {});

/// Random constraint-respecting bindings: polynomial functions with small
/// integer coefficients, constrained functions built so that the side
/// constraints hold identically.
Instantiation random_instantiation(const CatalogEntry& entry, std::mt19937_64& rng);

/// check_full over `trials` random instantiations; conditions are merged
/// across trials and any failure carries its instantiation.
CheckReport verify_entry(const std::string& id, int trials, std::uint64_t seed, const ZeroTestOptions& options = {});

/// Closure of omega = (f, g, h) on (12, 13, 23) with entries in (v, w):
/// h d_v f - f d_v h - g d_w h + h d_w g.
Expr closure_relation(const Expr& f, const Expr& g, const Expr& h);

struct ConstraintF {
  /// Whether f could be written in closed form.
  bool closed_form = false;
  Expr f;
};

/// f = h (l + int (g d_w h - h d_w g) / h^2 dv), with any antiderivative (the
/// lower limit is absorbed into l). Closed form when the integrand is
/// polynomial in v.
ConstraintF constraint_f(const Expr& g, const Expr& h, const Expr& l);

/// h g' - g (f + h') for functions of w.
Expr constraint_41(const Expr& f, const Expr& g, const Expr& h);

/// A deliberate single-entry corruption of a template; `entry` carries the
/// corrupted template and keeps the original side constraints.
struct Mutation {
  std::string name;
  std::string description;
  CatalogEntry entry;
};

std::vector<Mutation> mutations(const CatalogEntry& entry);

/// check_full on the mutated template under one random instantiation.
CheckReport check_mutation(const Mutation& m, std::uint64_t seed, const ZeroTestOptions& options = {});

}  // namespace hydroham

#endif  // HYDROHAM_CATALOG_HPP
