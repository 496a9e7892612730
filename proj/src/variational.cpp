#include "hydroham/variational.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "hydroham/algebra.hpp"

namespace hydroham {
namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void monomials(int n, int degree, int field, Expr current, std::vector<Expr>& out) {
  if (field > n) {
    out.push_back(normalize(current));
    return;
  }
  for (int k = 0; k <= degree; ++k) {
    monomials(n, degree - k, field + 1, current * pow(Expr::var(field), k), out);
  }
}

}  // namespace

Expr euler(const Expr& h, int field, Direction dir) {
  Poly p = to_poly(h);
  int top = max_order(h, field, dir);
  Poly out;
  for (int s = 0; s <= top; ++s) {
    Poly term = partial(p, Expr::jet(field, s, dir));
    for (int k = 0; k < s; ++k) term = total_derivative(term, dir).scaled(Scalar(-1L));
    out += term;
  }
  return out.to_expr();
}

EvolutionSystem flow(const NonHomOperator& c, const Expr& h) {
  int n = c.n;
  EvolutionSystem s;
  s.n = n;
  s.evolution = other(c.dir);
  s.symbols = c.symbols;
  std::vector<Expr> e(static_cast<std::size_t>(n));
  std::vector<Expr> de(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    e[j] = euler(h, j + 1, c.dir);
    de[j] = total_derivative(e[j], c.dir);
  }
  for (int i = 0; i < n; ++i) {
    std::vector<Expr> terms;
    for (int j = 0; j < n; ++j) {
      terms.push_back(c.g[i][j] * de[j]);
      terms.push_back(c.omega[i][j] * e[j]);
      for (int k = 0; k < n; ++k) terms.push_back(c.b[i][j][k] * Expr::jet(k + 1, 1, c.dir) * e[j]);
    }
    s.rhs.push_back(normalize(Expr::add(std::move(terms))));
  }
  return s;
}

Verdict flows_equal(const EvolutionSystem& a, const EvolutionSystem& b, const ZeroTestOptions& options) {
  if (a.n != b.n || a.evolution != b.evolution) return Verdict::NonZero;
  Verdict v = Verdict::Zero;
  for (int i = 0; i < a.n; ++i) {
    ZeroResult r = zero_test(a.rhs[i] - b.rhs[i], options);
    if (r.verdict == Verdict::NonZero) return Verdict::NonZero;
    if (r.verdict == Verdict::Inconclusive) v = Verdict::Inconclusive;
  }
  return v;
}

Expr apply_scalar_operator(const std::vector<Expr>& coeffs, const Expr& f, Direction dir) {
  Poly current = to_poly(f);
  std::vector<Expr> terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) current = total_derivative(current, dir);
    terms.push_back(coeffs[k] * current.to_expr());
  }
  return normalize(Expr::add(std::move(terms)));
}

DensitySearch find_density(const NonHomOperator& c, const EvolutionSystem& target, const std::vector<Expr>& ansatz) {
  DensitySearch out;
  if (target.n != c.n || target.evolution != other(c.dir)) return out;
  // Coefficients are affine in the parameters of C and the target.
  std::set<Expr, ExprLess> params;
  for (const auto& r : target.rhs) {
    for (const auto& p : collect(r, Kind::Param)) params.insert(p);
  }
  for (int i = 0; i < c.n; ++i) {
    for (int j = 0; j < c.n; ++j) {
      for (const auto& p : collect(c.omega[i][j], Kind::Param)) params.insert(p);
      for (const auto& p : collect(c.g[i][j], Kind::Param)) params.insert(p);
      for (int k = 0; k < c.n; ++k) {
        for (const auto& p : collect(c.b[i][j][k], Kind::Param)) params.insert(p);
      }
    }
  }
  std::vector<Expr> scaled;
  for (const auto& m : ansatz) {
    scaled.push_back(m);
    for (const auto& p : params) scaled.push_back(normalize(p * m));
  }
  out.ansatz = scaled;
  std::vector<Expr> unknowns;
  std::vector<std::vector<Expr>> terms(static_cast<std::size_t>(c.n));
  for (std::size_t m = 0; m < scaled.size(); ++m) {
    Expr a = Expr::param("__a" + std::to_string(m));
    unknowns.push_back(a);
    EvolutionSystem f = flow(c, scaled[m]);
    for (int i = 0; i < c.n; ++i) terms[i].push_back(a * f.rhs[i]);
  }
  std::vector<Expr> residuals;
  for (int i = 0; i < c.n; ++i) {
    terms[i].push_back(-target.rhs[i]);
    residuals.push_back(Expr::add(terms[i]));
  }
  IdentitySolution sol = solve_identities(residuals, unknowns);
  out.equations = sol.equations;
  if (!sol.consistent) return out;
  out.found = true;
  std::vector<Expr> h;
  for (std::size_t m = 0; m < scaled.size(); ++m) h.push_back(Expr(sol.particular.at(unknowns[m])) * scaled[m]);
  out.density = normalize(Expr::add(h));
  for (const auto& dir : sol.kernel) {
    std::vector<Expr> k;
    for (std::size_t m = 0; m < scaled.size(); ++m) k.push_back(Expr(dir.at(unknowns[m])) * scaled[m]);
    out.kernel.push_back(normalize(Expr::add(k)));
  }
  return out;
}

LocalStructureSearch search_local_structure(const EvolutionSystem& target, const Expr& h,
                                            const std::vector<Expr>& ansatz, int max_family,
                                            const ZeroTestOptions& options) {
  LocalStructureSearch out;
  const int n = target.n;
  const Direction d = other(target.evolution);
  std::vector<Expr> e(static_cast<std::size_t>(n));
  std::vector<Expr> de(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    e[j] = euler(h, j + 1, d);
    de[j] = total_derivative(e[j], d);
  }
  // Each entry is sum_m a_m ansatz[m] with its own unknowns; symmetric and
  // skew partners share them.
  std::vector<Expr> unknowns;
  auto fresh_entry = [&]() {
    std::vector<Expr> terms;
    for (const auto& m : ansatz) {
      Expr a = Expr::param("__s" + std::to_string(unknowns.size()));
      unknowns.push_back(a);
      terms.push_back(a * m);
    }
    return Expr::add(std::move(terms));
  };
  NonHomOperator c = NonHomOperator::zero(n, d);
  c.symbols = target.symbols;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      c.g[i][j] = c.g[j][i] = fresh_entry();
      if (j > i) {
        c.omega[i][j] = fresh_entry();
        c.omega[j][i] = -c.omega[i][j];
      }
    }
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) c.b[i][j][k] = fresh_entry();
    }
  }
  std::vector<Expr> residuals;
  for (int i = 0; i < n; ++i) {
    std::vector<Expr> terms{-target.rhs[i]};
    for (int j = 0; j < n; ++j) {
      terms.push_back(c.g[i][j] * de[j]);
      terms.push_back(c.omega[i][j] * e[j]);
      for (int k = 0; k < n; ++k) terms.push_back(c.b[i][j][k] * Expr::jet(k + 1, 1, d) * e[j]);
    }
    residuals.push_back(Expr::add(std::move(terms)));
  }
  // The linear Hamiltonian condition d_k g^{ij} = b^{ij}_k + b^{ji}_k.
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        residuals.push_back(partial(c.g[i][j], Expr::var(k + 1)) - c.b[i][j][k] - c.b[j][i][k]);
      }
    }
  }
  IdentitySolution sol = solve_identities(residuals, unknowns);
  out.unknowns = static_cast<int>(unknowns.size());
  out.equations = sol.equations;
  if (!sol.consistent) {
    out.hamiltonian = Status::Fail;
    out.note = "no operator in the span reproduces the flow";
    return out;
  }
  out.found = true;
  out.kernel_dimension = static_cast<int>(sol.kernel.size());
  auto specialize = [&](const Bindings& b) {
    NonHomOperator r = NonHomOperator::zero(n, d);
    r.symbols = target.symbols;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        r.g[i][j] = substitute(c.g[i][j], b);
        r.omega[i][j] = substitute(c.omega[i][j], b);
        for (int k = 0; k < n; ++k) r.b[i][j][k] = substitute(c.b[i][j][k], b);
      }
    }
    return r;
  };
  out.particular = specialize(sol.particular_bindings());
  if (check_full(out.particular, options).passed()) {
    out.hamiltonian = Status::Pass;
    out.hamiltonian_operator = out.particular;
    return out;
  }
  if (out.kernel_dimension > max_family) {
    out.note = "family of dimension " + std::to_string(out.kernel_dimension) + " exceeds the budget " +
               std::to_string(max_family);
    return out;
  }
  // The family particular + sum_k t_k kernel_k in fresh unknowns t_k.
  Bindings family;
  std::vector<Expr> ts;
  for (std::size_t k = 0; k < sol.kernel.size(); ++k) ts.push_back(Expr::param("__t" + std::to_string(k)));
  for (const auto& x : unknowns) {
    std::vector<Expr> v{Expr(sol.particular.at(x))};
    for (std::size_t k = 0; k < sol.kernel.size(); ++k) {
      const Scalar& s = sol.kernel[k].at(x);
      if (!s.is_zero()) v.push_back(Expr(s) * ts[k]);
    }
    family.atoms.emplace(x, normalize(Expr::add(std::move(v))));
  }
  NonHomOperator cf = specialize(family);
  // The conditions without the first-order part are cheaper and often
  // already inconsistent.
  IdentitySolution rel = solve_identities(hamiltonian_residuals(cf, false), ts, true);
  if (rel.consistent) rel = solve_identities(hamiltonian_residuals(cf), ts, true);
  if (!rel.consistent) {
    out.hamiltonian = Status::Fail;
    out.note = "Hamiltonian conditions inconsistent on the linear family";
    return out;
  }
  Bindings pick = rel.particular_bindings();
  NonHomOperator candidate = cf;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      candidate.g[i][j] = substitute(cf.g[i][j], pick);
      candidate.omega[i][j] = substitute(cf.omega[i][j], pick);
      for (int k = 0; k < n; ++k) candidate.b[i][j][k] = substitute(cf.b[i][j][k], pick);
    }
  }
  if (check_full(candidate, options).passed()) {
    out.hamiltonian = Status::Pass;
    out.hamiltonian_operator = candidate;
  } else {
    out.note = "relaxed solution does not satisfy the Hamiltonian conditions";
  }
  return out;
}

std::vector<Expr> polynomial_ansatz(int n, int degree) {
  std::vector<Expr> out;
  monomials(n, degree, 1, Expr(1L), out);
  return out;
}

std::vector<Expr> default_ansatz(int n, int degree, const EvolutionSystem& target) {
  std::vector<Expr> out = polynomial_ansatz(n, degree);
  std::set<Expr, ExprLess> seen(out.begin(), out.end());
  for (const auto& rhs : target.rhs) {
    for (const auto& p : collect(normalize(rhs), Kind::Pow)) {
      const Rational& q = p.exponent();
      if (!p.base().is_field_variable() || (q.get_den() == 1 && sgn(q) >= 0)) continue;
      for (int e = -2; e <= 2; ++e) {
        Expr base = Expr::pow(p.base(), q + e);
        std::vector<Expr> candidates{base};
        for (int f = 1; f <= n; ++f) {
          if (f != p.base().field()) candidates.push_back(base * Expr::var(f));
        }
        for (auto& cand : candidates) {
          Expr m = normalize(cand);
          if (seen.insert(m).second) out.push_back(m);
        }
      }
    }
  }
  return out;
}

CheckReport momentum_check(const NonHomOperator& c, const Expr& p, const ZeroTestOptions& options) {
  CheckReport r;
  r.subject = "momentum";
  r.seed = options.seed;
  r.trials = options.trials;
  EvolutionSystem f = flow(c, p);
  ConditionResult cond;
  cond.id = "momentum.translation";
  cond.group = "momentum";
  cond.statement = "C(delta p) = u_" + std::string(1, direction_char(c.dir));
  for (int i = 0; i < c.n; ++i) {
    ++cond.checked;
    Expr res = f.rhs[i] - Expr::jet(i + 1, 1, c.dir);
    ZeroResult z = zero_test(res, options);
    if (z.verdict == Verdict::Zero) continue;
    ++cond.failed;
    Status s = z.verdict == Verdict::NonZero ? Status::Fail : Status::Inconclusive;
    cond.status = combine(cond.status, s);
    cond.failures.push_back({{i + 1}, s, to_string(normalize(res), &c.symbols), ""});
  }
  r.conditions.push_back(cond);
  return r;
}

EvolutionSystem parse_system(const std::string& text) {
  EvolutionSystem s;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool have_variables = false;
  std::vector<std::pair<int, std::string>> equations;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto eq = line.find('=');
    auto colon = line.find(':');
    if (colon != std::string::npos && (eq == std::string::npos || colon < eq)) {
      std::string key = trim(line.substr(0, colon));
      std::string value = trim(line.substr(colon + 1));
      if (key == "components") {
        try {
          s.n = std::stoi(value);
        } catch (const std::exception&) {
          throw FormatError("bad component count", line_no);
        }
      } else if (key == "evolution") {
        if (value != "x" && value != "t") throw FormatError("evolution must be x or t", line_no);
        s.evolution = value == "x" ? Direction::X : Direction::T;
      } else if (key == "variables") {
        s.symbols.variables.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) s.symbols.variables.push_back(trim(item));
        have_variables = true;
      } else if (key == "parameters") {
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) s.symbols.params.insert(trim(item));
      } else {
        throw FormatError("unknown header '" + key + "'", line_no);
      }
      continue;
    }
    if (eq == std::string::npos) throw FormatError("expected 'u_t = ...'", line_no);
    equations.emplace_back(line_no, line);
  }
  if (!have_variables) s.symbols.variables = SymbolTable{}.variables;
  if (s.n < 1) throw FormatError("missing 'components' header", line_no);
  s.rhs.assign(static_cast<std::size_t>(s.n), Expr());
  std::vector<bool> seen(static_cast<std::size_t>(s.n), false);
  for (const auto& [ln, line] : equations) {
    auto eq = line.find('=');
    Expr lhs;
    Expr rhs;
    try {
      lhs = parse(line.substr(0, eq), s.symbols);
      rhs = parse(line.substr(eq + 1), s.symbols);
    } catch (const ParseError& e) {
      throw FormatError(e.what(), ln);
    }
    if (lhs.kind() != Kind::Jet || lhs.order() != 1 || lhs.direction() != s.evolution || lhs.field() > s.n) {
      throw FormatError("left side must be a first derivative along the evolution variable", ln);
    }
    if (seen[lhs.field() - 1]) throw FormatError("component given twice", ln);
    seen[lhs.field() - 1] = true;
    s.rhs[lhs.field() - 1] = rhs;
  }
  for (int i = 0; i < s.n; ++i) {
    if (!seen[i]) throw FormatError("missing equation for component " + std::to_string(i + 1), line_no);
  }
  return s;
}

std::string format_system(const EvolutionSystem& s) {
  std::ostringstream out;
  out << "components: " << s.n << "\n";
  out << "evolution: " << direction_char(s.evolution) << "\n";
  if (static_cast<int>(s.symbols.variables.size()) >= s.n) {
    out << "variables: ";
    for (int i = 0; i < s.n; ++i) out << (i ? ", " : "") << s.symbols.variables[i];
    out << "\n";
  }
  if (!s.symbols.params.empty()) {
    out << "parameters: ";
    bool first = true;
    for (const auto& p : s.symbols.params) {
      out << (first ? "" : ", ") << p;
      first = false;
    }
    out << "\n";
  }
  for (int i = 0; i < s.n; ++i) {
    out << to_string(Expr::jet(i + 1, 1, s.evolution), &s.symbols) << " = "
        << to_string(normalize(s.rhs[i]), &s.symbols) << "\n";
  }
  return out.str();
}

}  // namespace hydroham
