#include "hydroham/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace hydroham {
namespace {

struct MutationSpec {
  std::string name;
  std::string description;
  std::string from;
  std::string to;
};

struct Definition {
  CatalogEntry entry;
  std::vector<MutationSpec> mutations;
};

std::vector<Definition> build() {
  std::vector<Definition> d;

  d.push_back({{"C2,1", 2, 1,
                R"(components: 2
variables: u, v
g:
  1, 0
  0, 0
omega:
  0, f(v)
  -f(v), 0
)",
                {{"f", {2}}}, {}, {}, {}},
               {{"omega_depends_on_u", "omega^{12} = f(v) + u", "  0, f(v)\n  -f(v), 0", "  0, f(v) + u\n  -f(v) - u, 0"}}});

  d.push_back({{"C2,2", 2, 1,
                R"(components: 2
variables: u, v
g:
  1, 0
  0, 0
b[2]:
  0, -1/u
  1/u, 0
omega:
  0, f(v)/u
  -f(v)/u, 0
)",
                {{"f", {2}}}, {}, {}, {"u != 0"}},
               {{"drop_u_denominator", "omega^{12} = f(v) instead of f(v)/u", "  0, f(v)/u\n  -f(v)/u, 0",
                 "  0, f(v)\n  -f(v), 0"}}});

  d.push_back({{"C3,1", 3, 0,
                R"(components: 3
g:
  0, 0, 0
  0, 0, 0
  0, 0, 0
b[3]:
  0, 1, 0
  -1, 0, 0
  0, 0, 0
omega:
  0, f(u,v,w), 0
  -f(u,v,w), 0, 0
  0, 0, 0
)",
                {{"f", {1, 2, 3}}}, {}, {}, {}},
               {{"extra_omega13", "omega^{13} = 1 added", "  0, f(u,v,w), 0\n  -f(u,v,w), 0, 0\n  0, 0, 0",
                 "  0, f(u,v,w), 1\n  -f(u,v,w), 0, 0\n  -1, 0, 0"}}});

  d.push_back({{"C3,2", 3, 1,
                R"(components: 3
g:
  1, 0, 0
  0, 0, 0
  0, 0, 0
omega:
  0, f(v,w), g(v,w)
  -f(v,w), 0, h(v,w)
  -g(v,w), -h(v,w), 0
)",
                {{"f", {2, 3}}, {"g", {2, 3}}, {"h", {2, 3}}},
                {},
                {"h(v,w)*f_{1,0}(v,w) - f(v,w)*h_{1,0}(v,w) - g(v,w)*h_{0,1}(v,w) + h(v,w)*g_{0,1}(v,w)"},
                {"h(v,w) != 0"}},
               {{"break_closure", "omega^{12} = f(v,w) + v", "  0, f(v,w), g(v,w)\n  -f(v,w), 0, h(v,w)",
                 "  0, f(v,w) + v, g(v,w)\n  -f(v,w) - v, 0, h(v,w)"}}});

  d.push_back({{"C3,3", 3, 1,
                R"(components: 3
g:
  1, 0, 0
  0, 0, 0
  0, 0, 0
b[3]:
  0, 1, 0
  -1, 0, 0
  0, 0, 0
omega:
  0, f(v,w), 0
  -f(v,w), 0, 0
  0, 0, 0
)",
                {{"f", {2, 3}}}, {}, {}, {}},
               {{"omega_depends_on_u", "omega^{12} = f(v,w) + u", "  0, f(v,w), 0\n  -f(v,w), 0, 0",
                 "  0, f(v,w) + u, 0\n  -f(v,w) - u, 0, 0"}}});

  d.push_back({{"C3,4", 3, 1,
                R"(components: 3
g:
  1, 0, 0
  0, 0, 0
  0, 0, 0
b[3]:
  0, 0, -1/u
  0, 0, 0
  1/u, 0, 0
omega:
  0, 0, f(v,w)/u
  0, 0, 0
  -f(v,w)/u, 0, 0
)",
                {{"f", {2, 3}}}, {}, {}, {"u != 0"}},
               {{"drop_u_denominator", "omega^{13} = f(v,w) instead of f(v,w)/u",
                 "  0, 0, f(v,w)/u\n  0, 0, 0\n  -f(v,w)/u, 0, 0", "  0, 0, f(v,w)\n  0, 0, 0\n  -f(v,w), 0, 0"}}});

  d.push_back({{"C3,5", 3, 1,
                R"(components: 3
g:
  1, 0, 0
  0, 0, 0
  0, 0, 0
b[2]:
  0, -1/u, 0
  1/u, 0, 0
  0, 0, 0
b[3]:
  0, 0, -1/u
  0, 0, 0
  1/u, 0, 0
omega:
  0, f(v,w)/u, g(v,w)/u
  -f(v,w)/u, 0, h(v,w)/u
  -g(v,w)/u, -h(v,w)/u, 0
)",
                {{"f", {2, 3}}, {"g", {2, 3}}, {"h", {2, 3}}},
                {},
                {"h(v,w)*f_{1,0}(v,w) - f(v,w)*h_{1,0}(v,w) - g(v,w)*h_{0,1}(v,w) + h(v,w)*g_{0,1}(v,w)"},
                {"u != 0", "h(v,w) != 0"}},
               {{"drop_b2", "b^{12}_2 = b^{21}_2 = 0", "b[2]:\n  0, -1/u, 0\n  1/u, 0, 0",
                 "b[2]:\n  0, 0, 0\n  0, 0, 0"}}});

  d.push_back({{"C3,6", 3, 2,
                R"(components: 3
parameters: c
g:
  1, 0, 0
  0, 1, 0
  0, 0, 0
omega:
  0, f(w), g(w)
  -f(w), 0, c*g(w)
  -g(w), -c*g(w), 0
)",
                {{"f", {3}}, {"g", {3}}}, {"c"}, {}, {}},
               {{"break_c_coupling", "omega^{23} = c g(w) + w", "  -f(w), 0, c*g(w)\n  -g(w), -c*g(w), 0",
                 "  -f(w), 0, c*g(w) + w\n  -g(w), -c*g(w) - w, 0"},
                {"independent_functions", "omega^{23} = c k(w) with k independent of g", "  -f(w), 0, c*g(w)\n  -g(w), -c*g(w), 0",
                 "  -f(w), 0, c*k(w)\n  -g(w), -c*k(w), 0"}}});

  d.push_back({{"C3,7", 3, 2,
                R"(components: 3
parameters: c
g:
  1, 0, 0
  0, 1, 0
  0, 0, 0
b[3]:
  0, 0, 0
  0, 0, -1/v
  0, 1/v, 0
omega:
  0, 0, c*f(w)
  0, 0, (1 - c*u)*f(w)/v
  -c*f(w), -(1 - c*u)*f(w)/v, 0
)",
                {{"f", {3}}}, {"c"}, {}, {"v != 0"}},
               {{"flip_c_sign", "(1 - c u) replaced by (1 + c u)", "(1 - c*u)", "(1 + c*u)"}}});

  d.push_back({{"C3,8", 3, 2,
                R"(components: 3
parameters: c
radical: s = 1 + arg1^2
g:
  1, 0, 0
  0, 1, 0
  0, 0, 0
b[3]:
  0, 0, -w/(u*w - v)
  0, 0, 1/(u*w - v)
  w/(u*w - v), -1/(u*w - v), 0
omega:
  0, f(w), (1 + w^2)*f(w)*(w - c*v*s(w))/(u*w - v)
  -f(w), 0, -(1 + w^2)*f(w)*(1 - c*u*s(w))/(u*w - v)
  -(1 + w^2)*f(w)*(w - c*v*s(w))/(u*w - v), (1 + w^2)*f(w)*(1 - c*u*s(w))/(u*w - v), 0
)",
                {{"f", {3}}}, {"c"}, {}, {"u*w - v != 0"}},
               {{"flip_c_sign", "(w - c v s(w)) replaced by (w + c v s(w))", "(w - c*v*s(w))", "(w + c*v*s(w))"}}});

  d.push_back({{"C3,9", 3, 2,
                R"(components: 3
parameters: c
g:
  0, 1, 0
  1, 0, 0
  0, 0, 0
omega:
  0, f(w), c*g(w)
  -f(w), 0, g(w)
  -c*g(w), -g(w), 0
)",
                {{"f", {3}}, {"g", {3}}}, {"c"}, {}, {}},
               {{"break_c_coupling", "omega^{13} = c g(w) + w", "  0, f(w), c*g(w)\n  -f(w), 0, g(w)\n  -c*g(w), -g(w), 0",
                 "  0, f(w), c*g(w) + w\n  -f(w), 0, g(w)\n  -c*g(w) - w, -g(w), 0"}}});

  d.push_back({{"C3,10", 3, 2,
                R"(components: 3
g:
  0, 1, 0
  1, 0, 0
  0, 0, 0
b[3]:
  0, 0, -1/v
  0, 0, 0
  1/v, 0, 0
omega:
  0, f(w), (h(w) - u*g(w))/v
  -f(w), 0, g(w)
  -(h(w) - u*g(w))/v, -g(w), 0
)",
                {{"f", {3}}, {"g", {3}}, {"h", {3}}},
                {},
                {"h(w)*g'(w) - g(w)*(f(w) + h'(w))"},
                {"v != 0", "g(w) != 0"}},
               {{"flip_u_sign", "(h(w) - u g(w)) replaced by (h(w) + u g(w))", "(h(w) - u*g(w))", "(h(w) + u*g(w))"}}});

  // The printed (3,2) tail entry carries an extra factor w; skew-symmetry
  // fixes it to the negative of the (2,3) entry.
  d.push_back({{"C3,11", 3, 2,
                R"(components: 3
parameters: c
g:
  0, 1, 0
  1, 0, 0
  0, 0, 0
b[3]:
  0, 0, 1/(u*w - v)
  0, 0, -w/(u*w - v)
  -1/(u*w - v), w/(u*w - v), 0
omega:
  0, c*f(w)*w^(-1/2), f(w)*(u*w - 2*c*w^(1/2))/(u*w - v)
  -c*f(w)*w^(-1/2), 0, -f(w)*w*(v - 2*c*w^(1/2))/(u*w - v)
  -f(w)*(u*w - 2*c*w^(1/2))/(u*w - v), f(w)*w*(v - 2*c*w^(1/2))/(u*w - v), 0
)",
                {{"f", {3}}}, {"c"}, {}, {"u*w - v != 0", "w > 0"}},
               {{"flip_sqrt_power", "w^(-1/2) replaced by w^(1/2) in omega^{12}", "c*f(w)*w^(-1/2)", "c*f(w)*w^(1/2)"}}});
  return d;
}

const std::vector<Definition>& definitions() {
  static const std::vector<Definition> defs = build();
  return defs;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  int count = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
    ++count;
  }
  if (count == 0) throw CatalogError("mutation pattern not found: " + from);
  return s;
}

// Replaces the fields of `fields` by slots 1, 2, ... in order.
Expr to_slots(const Expr& e, const std::vector<int>& fields) {
  std::map<Expr, Expr, ExprLess> m;
  for (std::size_t k = 0; k < fields.size(); ++k) m.emplace(Expr::var(fields[k]), Expr::slot(static_cast<int>(k) + 1));
  return normalize(replace(e, m));
}

long nonzero_int(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> d(1, bound);
  std::bernoulli_distribution sign(0.5);
  long v = d(rng);
  return sign(rng) ? v : -v;
}

// Dense polynomial of total degree <= degree in the given fields; never zero.
Expr random_poly(const std::vector<int>& fields, int degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::vector<Expr> terms;
  std::function<void(std::size_t, int, Expr)> rec = [&](std::size_t k, int left, Expr mono) {
    if (k == fields.size()) {
      terms.push_back(Expr(static_cast<long>(coeff(rng))) * mono);
      return;
    }
    for (int e = 0; e <= left; ++e) rec(k + 1, left - e, mono * pow(Expr::var(fields[k]), e));
  };
  rec(0, degree, Expr(1L));
  Expr p = normalize(Expr::add(terms));
  if (is_zero(p)) return Expr(nonzero_int(rng, 3));
  return p;
}

}  // namespace

NonHomOperator CatalogEntry::templ() const { return parse_operator(template_text); }

std::vector<Expr> CatalogEntry::constraints() const {
  std::vector<Expr> out;
  for (const auto& s : side_constraints) {
    SymbolTable t;
    out.push_back(parse(s, t));
  }
  return out;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    for (const auto& d : definitions()) v.push_back(d.entry);
    return v;
  }();
  return entries;
}

std::vector<CatalogEntry> enumerate(int n, std::optional<int> rank) {
  if (n != 2 && n != 3) throw CatalogError("the catalog covers n = 2 and n = 3 only");
  std::vector<CatalogEntry> out;
  for (const auto& e : catalog()) {
    if (e.n == n && (!rank || e.rank == *rank)) out.push_back(e);
  }
  return out;
}

std::string canonical_id(const std::string& id) {
  std::string digits;
  std::string tail;
  bool sep = false;
  std::size_t i = 0;
  while (i < id.size() && (id[i] == 'C' || id[i] == 'c' || id[i] == '_' || id[i] == '{')) ++i;
  for (; i < id.size(); ++i) {
    char ch = id[i];
    if (std::isdigit(static_cast<unsigned char>(ch)) != 0) {
      (sep ? tail : digits) += ch;
    } else if ((ch == ',' || ch == '.') && !sep && !digits.empty()) {
      sep = true;
    } else if (ch == '}' && i + 1 == id.size()) {
      break;
    } else {
      throw CatalogError("unknown catalog id '" + id + "'");
    }
  }
  if (!sep) {
    if (digits.size() < 2) throw CatalogError("unknown catalog id '" + id + "'");
    tail = digits.substr(1);
    digits = digits.substr(0, 1);
  }
  std::string out = "C" + digits + "," + tail;
  for (const auto& e : catalog()) {
    if (e.id == out) return out;
  }
  throw CatalogError("unknown catalog id '" + id + "'");
}

const CatalogEntry& find_entry(const std::string& id) {
  std::string c = canonical_id(id);
  for (const auto& e : catalog()) {
    if (e.id == c) return e;
  }
  throw CatalogError("unknown catalog id '" + id + "'");
}

Bindings Instantiation::bindings() const {
  Bindings b;
  b.functions = functions;
  for (const auto& [name, value] : constants) b.atoms.emplace(Expr::param(name), value);
  return b;
}

std::string Instantiation::describe() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, fb] : functions) {
    out << (first ? "" : "; ") << name << "(";
    for (int k = 1; k <= fb.arity; ++k) out << (k > 1 ? "," : "") << "arg" << k;
    out << ") = " << to_string(fb.body);
    first = false;
  }
  for (const auto& [name, value] : constants) {
    out << (first ? "" : "; ") << name << " = " << to_string(value);
    first = false;
  }
  return out.str();
}

NonHomOperator instantiate(const CatalogEntry& entry, const Instantiation& inst, const ZeroTestOptions& options) {
  for (const auto& fp : entry.functions) {
    auto it = inst.functions.find(fp.name);
    if (it == inst.functions.end()) throw CatalogError("missing binding for function " + fp.name);
    if (it->second.arity != static_cast<int>(fp.fields.size())) throw CatalogError("wrong arity for function " + fp.name);
  }
  for (const auto& c : entry.constants) {
    if (inst.constants.count(c) == 0) throw CatalogError("missing value for constant " + c);
  }
  Bindings b = inst.bindings();
  for (const auto& c : entry.constraints()) {
    Expr r = substitute(c, b);
    ZeroResult z = zero_test(r, options);
    if (z.verdict != Verdict::Zero) {
      throw ConstraintViolation(entry.id + ": side constraint violated (" + verdict_name(z.verdict) + ")",
                                to_string(normalize(r)));
    }
  }
  NonHomOperator t = entry.templ();
  NonHomOperator out = NonHomOperator::zero(t.n, t.dir);
  out.symbols = t.symbols;
  out.symbols.params.clear();
  for (int i = 0; i < t.n; ++i) {
    for (int j = 0; j < t.n; ++j) {
      out.g[i][j] = substitute(t.g[i][j], b);
      out.omega[i][j] = substitute(t.omega[i][j], b);
      for (int k = 0; k < t.n; ++k) out.b[i][j][k] = substitute(t.b[i][j][k], b);
    }
  }
  return out;
}

Instantiation random_instantiation(const CatalogEntry& entry, std::mt19937_64& rng) {
  Instantiation inst;
  auto bind = [&](const std::string& name, const std::vector<int>& fields, const Expr& body) {
    inst.functions[name] = {static_cast<int>(fields.size()), to_slots(body, fields)};
  };
  const bool closure = entry.id == "C3,2" || entry.id == "C3,5";
  if (closure) {
    // Stream function psi: f = h psi_w, g = -h psi_v solves the closure.
    std::vector<int> vw{2, 3};
    Expr h = random_poly(vw, 2, rng);
    Expr psi = random_poly(vw, 3, rng);
    bind("h", vw, h);
    bind("f", vw, h * partial(psi, Expr::var(3)));
    bind("g", vw, -h * partial(psi, Expr::var(2)));
  } else if (entry.id == "C3,10") {
    std::vector<int> w{3};
    Expr g = random_poly(w, 2, rng);
    Expr h = random_poly(w, 2, rng);
    Expr dg = partial(g, Expr::var(3));
    Expr dh = partial(h, Expr::var(3));
    bind("g", w, g);
    bind("h", w, h);
    bind("f", w, (h * dg - g * dh) / g);
  } else {
    for (const auto& fp : entry.functions) bind(fp.name, fp.fields, random_poly(fp.fields, 2, rng));
  }
  for (const auto& c : entry.constants) inst.constants[c] = Expr(nonzero_int(rng, 3));
  return inst;
}

CheckReport verify_entry(const std::string& id, int trials, std::uint64_t seed, const ZeroTestOptions& options) {
  const CatalogEntry& entry = find_entry(id);
  CheckReport out;
  out.subject = entry.id;
  out.seed = seed;
  out.trials = trials;
  std::size_t index = 0;
  while (catalog()[index].id != entry.id) ++index;
  for (int trial = 0; trial < trials; ++trial) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(ss);
    Instantiation inst = random_instantiation(entry, rng);
    ZeroTestOptions o = options;
    o.seed = seed + static_cast<std::uint64_t>(trial);
    CheckReport r = check_full(instantiate(entry, inst, o), o);
    for (const auto& c : r.conditions) {
      ConditionResult* m = nullptr;
      for (auto& existing : out.conditions) {
        if (existing.id == c.id) m = &existing;
      }
      if (m == nullptr) {
        out.conditions.push_back(c);
        out.conditions.back().failures.clear();
        out.conditions.back().checked = 0;
        out.conditions.back().failed = 0;
        out.conditions.back().status = Status::Pass;
        m = &out.conditions.back();
      }
      m->checked += c.checked;
      m->failed += c.failed;
      m->status = combine(m->status, c.status);
      for (auto f : c.failures) {
        if (m->failures.size() >= 6) break;
        f.witness = "trial " + std::to_string(trial) + ": " + inst.describe() + (f.witness.empty() ? "" : "; " + f.witness);
        m->failures.push_back(f);
      }
    }
    if (!r.passed()) out.notes.push_back("trial " + std::to_string(trial) + " failed with " + inst.describe());
  }
  return out;
}

Expr closure_relation(const Expr& f, const Expr& g, const Expr& h) {
  Expr v = Expr::var(2);
  Expr w = Expr::var(3);
  return normalize(h * partial(f, v) - f * partial(h, v) - g * partial(h, w) + h * partial(g, w));
}

ConstraintF constraint_f(const Expr& g, const Expr& h, const Expr& l) {
  Expr v = Expr::var(2);
  Expr w = Expr::var(3);
  ConstraintF out;
  Expr integrand = normalize((g * partial(h, w) - h * partial(g, w)) / (h * h));
  Poly p = to_poly(integrand);
  Poly antiderivative;
  for (const auto& [mono, coeff] : p.terms()) {
    Rational ev(0);
    Poly term(coeff);
    for (const auto& f : mono) {
      if (f.atom == v) {
        ev = f.exp;
      } else if (collect(f.atom, Kind::Jet).count(v) != 0) {
        return out;
      } else {
        term = term * Poly::atom(f.atom, f.exp);
      }
    }
    if (ev.get_den() != 1 || sgn(ev) < 0) return out;
    antiderivative += (term * Poly::atom(v, ev + 1)).scaled(Scalar(Rational(1) / (ev + 1)));
  }
  out.closed_form = true;
  out.f = normalize(h * (l + antiderivative.to_expr()));
  return out;
}

Expr constraint_41(const Expr& f, const Expr& g, const Expr& h) {
  Expr w = Expr::var(3);
  return normalize(h * partial(g, w) - g * (f + partial(h, w)));
}

std::vector<Mutation> mutations(const CatalogEntry& entry) {
  for (const auto& d : definitions()) {
    if (d.entry.id != entry.id) continue;
    std::vector<Mutation> out;
    for (const auto& m : d.mutations) {
      CatalogEntry mutated = d.entry;
      mutated.template_text = replace_all(d.entry.template_text, m.from, m.to);
      out.push_back({m.name, m.description, mutated});
    }
    return out;
  }
  throw CatalogError("unknown catalog id '" + entry.id + "'");
}

CheckReport check_mutation(const Mutation& m, std::uint64_t seed, const ZeroTestOptions& options) {
  std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(ss);
  Instantiation inst = random_instantiation(m.entry, rng);
  ZeroTestOptions o = options;
  o.seed = seed;
  CheckReport r = check_full(instantiate(m.entry, inst, o), o);
  r.subject = m.entry.id + " mutation " + m.name;
  r.notes.push_back("instantiation: " + inst.describe());
  return r;
}

}  // namespace hydroham
