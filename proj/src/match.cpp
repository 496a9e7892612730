#include <algorithm>
#include <numeric>
#include <set>

#include "hydroham/transform.hpp"

namespace hydroham {
namespace {

const Expr& probe() {
  static const Expr t = Expr::param("__probe");
  return t;
}

bool vanishes(const Expr& e, const ZeroTestOptions& o) { return zero_test(e, o).verdict == Verdict::Zero; }

// Every (template entry, target entry) pair of the operator, g first.
std::vector<std::pair<Expr, Expr>> entry_pairs(const NonHomOperator& t, const NonHomOperator& c) {
  std::vector<std::pair<Expr, Expr>> out;
  for (int i = 0; i < t.n; ++i) {
    for (int j = 0; j < t.n; ++j) out.emplace_back(t.g[i][j], c.g[i][j]);
  }
  for (int i = 0; i < t.n; ++i) {
    for (int j = 0; j < t.n; ++j) out.emplace_back(t.omega[i][j], c.omega[i][j]);
  }
  for (int i = 0; i < t.n; ++i) {
    for (int j = 0; j < t.n; ++j) {
      for (int k = 0; k < t.n; ++k) out.emplace_back(t.b[i][j][k], c.b[i][j][k]);
    }
  }
  return out;
}

struct Unknowns {
  std::vector<std::string> functions;
  std::vector<std::string> constants;
  bool undifferentiated = true;
};

Unknowns unknowns_in(const Expr& e, const CatalogEntry& entry, const Instantiation& bound) {
  Unknowns u;
  std::set<std::string> fs;
  for (const auto& f : collect(e, Kind::Func)) {
    bool free_function = std::any_of(entry.functions.begin(), entry.functions.end(),
                                     [&](const FunctionParameter& p) { return p.name == f.name(); });
    if (!free_function || bound.functions.count(f.name()) != 0) continue;
    fs.insert(f.name());
    if (!f.derivative_index().empty()) u.undifferentiated = false;
  }
  u.functions.assign(fs.begin(), fs.end());
  for (const auto& p : collect(e, Kind::Param)) {
    if (std::find(entry.constants.begin(), entry.constants.end(), p.name()) != entry.constants.end() &&
        bound.constants.count(p.name()) == 0) {
      u.constants.push_back(p.name());
    }
  }
  return u;
}

// Solves template(x) = target for the single unknown x when the template
// entry is affine in it.
std::optional<Expr> solve_affine(const Expr& templ, const Expr& target, const Bindings& probe_binding,
                                 const ZeroTestOptions& o) {
  Expr with_probe = substitute(templ, probe_binding);
  Expr slope = partial(with_probe, probe());
  if (!vanishes(partial(slope, probe()), o) || vanishes(slope, o)) return std::nullopt;
  Bindings at_zero;
  at_zero.atoms.emplace(probe(), Expr());
  Expr offset = substitute(with_probe, at_zero);
  return normalize((target - offset) / slope);
}

// Solves eq(c) = 0 for a constant c: the cleared numerator splits by the
// monomials in every other atom into equations a c + b = 0 with numeric a, b.
std::optional<Expr> solve_constant(const Expr& eq, const std::string& name, const ZeroTestOptions& o) {
  const Expr c = Expr::param(name);
  Cleared cl = clear_denominators(eq);
  if (!cl.complete) return std::nullopt;
  std::map<Monomial, std::pair<Scalar, Scalar>, MonomialLess> groups;  // rest -> (a, b)
  for (const auto& [m, coeff] : cl.numerator.terms()) {
    Monomial rest;
    Rational power(0);
    for (const auto& f : m) {
      if (f.atom == c) {
        power = f.exp;
      } else {
        rest.push_back(f);
      }
    }
    if (power == Rational(1)) {
      groups[rest].first += coeff;
    } else if (power == Rational(0)) {
      groups[rest].second += coeff;
    } else {
      return std::nullopt;
    }
  }
  for (const auto& [rest, ab] : groups) {
    if (ab.first.is_zero()) continue;
    Expr value(-ab.second * ab.first.inverse());
    Bindings at;
    at.atoms.emplace(c, value);
    if (vanishes(substitute(eq, at), o)) return value;
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::string describe(const PointMap& m) {
  std::string out;
  for (std::size_t i = 0; i < m.forward.size(); ++i) {
    out += (i ? ", " : "") + std::string("ubar") + std::to_string(i + 1) + " = " + to_string(m.forward[i]);
  }
  return out;
}

namespace {

// Binds `name` to x, which solved an equation in which it was the only
// unknown. False if x depends on fields the function may not depend on.
bool bind_solution(const std::string& name, const Expr& x, const CatalogEntry& entry, int n, Instantiation& inst,
                   const ZeroTestOptions& o) {
  auto fp = std::find_if(entry.functions.begin(), entry.functions.end(),
                         [&](const FunctionParameter& p) { return p.name == name; });
  if (fp == entry.functions.end()) {
    inst.constants[name] = x;
    return true;
  }
  for (int i = 1; i <= n; ++i) {
    if (std::find(fp->fields.begin(), fp->fields.end(), i) == fp->fields.end() &&
        !vanishes(partial(x, Expr::var(i)), o)) {
      return false;
    }
  }
  std::map<Expr, Expr, ExprLess> to_slots;
  for (std::size_t k = 0; k < fp->fields.size(); ++k) {
    to_slots.emplace(Expr::var(fp->fields[k]), Expr::slot(static_cast<int>(k) + 1));
  }
  inst.functions[name] = {static_cast<int>(fp->fields.size()), normalize(replace(x, to_slots))};
  return true;
}

enum class Step { Progress, Stuck, Mismatch };

// Entries in which one unknown occurs alone, linearly and undifferentiated.
Step single_unknown_step(const NonHomOperator& t, const NonHomOperator& c, const CatalogEntry& entry,
                         Instantiation& inst, const ZeroTestOptions& o) {
  Bindings partial_bindings = inst.bindings();
  for (const auto& [te, ce] : entry_pairs(t, c)) {
    Expr known = substitute(te, partial_bindings);
    Unknowns u = unknowns_in(known, entry, inst);
    if (u.functions.size() + u.constants.size() != 1 || !u.undifferentiated) continue;
    Bindings pb;
    std::string name;
    if (!u.functions.empty()) {
      name = u.functions.front();
      const auto& fp = *std::find_if(entry.functions.begin(), entry.functions.end(),
                                     [&](const FunctionParameter& p) { return p.name == name; });
      pb.functions[name] = {static_cast<int>(fp.fields.size()), probe()};
    } else {
      name = u.constants.front();
      std::optional<Expr> x = solve_constant(known - ce, name, o);
      if (!x) return Step::Mismatch;
      inst.constants[name] = *x;
      return Step::Progress;
    }
    std::optional<Expr> x = solve_affine(known, ce, pb, o);
    if (!x) continue;
    return bind_solution(name, *x, entry, c.n, inst, o) ? Step::Progress : Step::Mismatch;
  }
  return Step::Stuck;
}

// Entries with several unknowns: unknown functions are replaced by symbols,
// the difference with the target is cleared of denominators and split by
// the powers of the fields none of the unknown functions depends on. Each
// coefficient must vanish on its own, and one with a single unknown solves it.
Step splitting_step(const NonHomOperator& t, const NonHomOperator& c, const CatalogEntry& entry,
                    Instantiation& inst, const ZeroTestOptions& o) {
  Bindings partial_bindings = inst.bindings();
  for (const auto& [te, ce] : entry_pairs(t, c)) {
    Expr known = substitute(te, partial_bindings);
    Unknowns u = unknowns_in(known, entry, inst);
    if (u.functions.size() + u.constants.size() < 2 || !u.undifferentiated) continue;
    Bindings symbols;
    std::set<int> args;
    std::map<Expr, std::string, ExprLess> unknown_atoms;
    for (const auto& name : u.functions) {
      const auto& fp = *std::find_if(entry.functions.begin(), entry.functions.end(),
                                     [&](const FunctionParameter& p) { return p.name == name; });
      Expr sym = Expr::param("__fn_" + name);
      symbols.functions[name] = {static_cast<int>(fp.fields.size()), sym};
      unknown_atoms.emplace(sym, name);
      args.insert(fp.fields.begin(), fp.fields.end());
    }
    for (const auto& name : u.constants) unknown_atoms.emplace(Expr::param(name), name);
    Cleared cl = clear_denominators(substitute(known, symbols) - ce);
    if (!cl.complete) continue;
    std::map<Monomial, Poly, MonomialLess> groups;
    for (const auto& [m, coeff] : cl.numerator.terms()) {
      Monomial key;
      Monomial rest;
      for (const auto& f : m) {
        bool separating = f.atom.is_field_variable() && args.count(f.atom.field()) == 0;
        (separating ? key : rest).push_back(f);
      }
      groups[key].add_term(rest, coeff);
    }
    for (const auto& [key, poly] : groups) {
      Expr eq = poly.to_expr();
      std::vector<Expr> present;
      for (const auto& p : collect(eq, Kind::Param)) {
        if (unknown_atoms.count(p) != 0) present.push_back(p);
      }
      if (present.size() != 1) continue;
      const std::string& name = unknown_atoms.at(present.front());
      if (std::find(u.constants.begin(), u.constants.end(), name) != u.constants.end()) {
        std::optional<Expr> x = solve_constant(eq, name, o);
        if (!x) return Step::Mismatch;
        inst.constants[name] = *x;
        return Step::Progress;
      }
      Bindings pb;
      pb.atoms.emplace(present.front(), probe());
      std::optional<Expr> x = solve_affine(eq, Expr(), pb, o);
      if (!x) continue;
      return bind_solution(unknown_atoms.at(present.front()), *x, entry, c.n, inst, o) ? Step::Progress
                                                                                        : Step::Mismatch;
    }
  }
  return Step::Stuck;
}

}  // namespace

std::optional<Instantiation> unify_with_entry(const NonHomOperator& c, const CatalogEntry& entry,
                                              const ZeroTestOptions& o) {
  NonHomOperator t = entry.templ();
  if (t.n != c.n) return std::nullopt;
  Instantiation inst;
  for (;;) {
    Step s = single_unknown_step(t, c, entry, inst, o);
    if (s == Step::Stuck) s = splitting_step(t, c, entry, inst, o);
    if (s == Step::Mismatch) return std::nullopt;
    if (s == Step::Stuck) break;
  }
  NonHomOperator candidate;
  try {
    candidate = instantiate(entry, inst, o);
  } catch (const CatalogError&) {
    return std::nullopt;  // unbound parameters or violated side constraints
  }
  for (const auto& [te, ce] : entry_pairs(candidate, c)) {
    if (!vanishes(te - ce, o)) return std::nullopt;
  }
  return inst;
}

std::optional<CatalogMatch> match_catalog(const NonHomOperator& c, const std::vector<PointMap>& extra_maps,
                                          const ZeroTestOptions& o) {
  const int n = c.n;
  if (n != 2 && n != 3) return std::nullopt;
  const int rank = generic_rank(c.g, o);
  std::vector<const CatalogEntry*> entries;
  for (const auto& e : catalog()) {
    if (e.n == n && e.rank == rank) entries.push_back(&e);
  }
  if (entries.empty()) return std::nullopt;

  std::vector<PointMap> bases{PointMap::identity(n)};
  bases.insert(bases.end(), extra_maps.begin(), extra_maps.end());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<PointMap> relabels;
  do {
    for (int signs = 0; signs < (1 << n); ++signs) {
      PointMap m = PointMap::permutation(perm);
      for (int i = 0; i < n; ++i) {
        if ((signs >> i) & 1) {
          m.forward[i] = -m.forward[i];
          m.inverse[perm[i] - 1] = -m.inverse[perm[i] - 1];
        }
      }
      relabels.push_back(std::move(m));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  for (const auto& base : bases) {
    for (const auto& relabel : relabels) {
      PointMap m = base.then(relabel);
      NonHomOperator moved;
      // Maps leaving the chart (a singular Jacobian, or a sign flip under a
      // fractional power) are skipped.
      try {
        moved = push_forward(c, m, o);
      } catch (const TransformError&) {
        continue;
      } catch (const ExprError&) {
        continue;
      }
      for (const CatalogEntry* e : entries) {
        std::optional<Instantiation> inst;
        try {
          inst = unify_with_entry(moved, *e, o);
        } catch (const ExprError&) {
          continue;
        }
        if (inst) return CatalogMatch{e->id, m, *inst};
      }
    }
  }
  return std::nullopt;
}

}  // namespace hydroham
