#include <functional>

#include "hydroham/algebra.hpp"

namespace hydroham {
namespace {

using AtomDerivative = std::function<Poly(const Expr&)>;

// Applies the derivation that sends each atom a to d(a).
Poly derive(const Poly& p, const AtomDerivative& d) {
  std::map<Expr, Poly, ExprLess> memo;
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Factor& f = m[i];
      auto it = memo.find(f.atom);
      if (it == memo.end()) it = memo.emplace(f.atom, d(f.atom)).first;
      if (it->second.is_zero()) continue;
      Monomial rest = m;
      Rational e = f.exp - 1;
      if (sgn(e) == 0) {
        rest.erase(rest.begin() + static_cast<long>(i));
      } else {
        rest[i].exp = e;
      }
      Poly head;
      head.add_term(rest, c * Scalar(f.exp));
      out += head * it->second;
    }
  }
  return out;
}

// d/d(arg) s(arg) = P'(arg) / (2 s(arg)) = P'(arg) s(arg) / (2 P(arg)).
Poly radical_derivative(const Expr& fn) {
  const Expr& arg = fn.children().front();
  std::map<Expr, Expr, ExprLess> at{{Expr::slot(1), arg}};
  Expr dp = replace(partial(*fn.radicand(), Expr::slot(1)), at);
  Expr p = replace(*fn.radicand(), at);
  return to_poly(dp * Expr::pow(p, Rational(-1))) * Poly::atom(fn) * Poly(Scalar(Rational(1, 2)));
}

// Chain rule through the arguments of a function atom, given the derivation
// applied to each argument.
Poly function_derivative(const Expr& fn, const std::function<Poly(const Poly&)>& inner) {
  const auto& args = fn.children();
  if (fn.is_radical()) {
    Poly da = inner(to_poly(args.front()));
    if (da.is_zero()) return da;
    return radical_derivative(fn) * da;
  }
  Poly out;
  for (std::size_t k = 0; k < args.size(); ++k) {
    Poly da = inner(to_poly(args[k]));
    if (da.is_zero()) continue;
    std::vector<int> deriv = fn.derivative_index();
    if (deriv.empty()) deriv.assign(args.size(), 0);
    ++deriv[k];
    out += Poly::atom(Expr::func(fn.name(), args, deriv)) * da;
  }
  return out;
}

void walk(const Expr& e, const std::function<void(const Expr&)>& visit) {
  visit(e);
  for (const auto& c : e.children()) walk(c, visit);
}

}  // namespace

Poly partial(const Poly& p, const Expr& var) {
  std::function<Poly(const Poly&)> self = [&](const Poly& q) { return partial(q, var); };
  return derive(p, [&](const Expr& atom) -> Poly {
    if (atom == var) return Poly(Scalar(1L));
    switch (atom.kind()) {
      case Kind::Func:
        return function_derivative(atom, self);
      case Kind::Add:
        return partial(to_poly(atom), var);
      default:
        return Poly();
    }
  });
}

Expr partial(const Expr& e, const Expr& var) {
  if (var.kind() != Kind::Jet && var.kind() != Kind::Param && var.kind() != Kind::Slot) {
    throw ExprError("can only differentiate with respect to jets, params or slots");
  }
  return partial(to_poly(e), var).to_expr();
}

Poly total_derivative(const Poly& p, Direction dir) {
  if (dir == Direction::None) throw ExprError("total derivative needs a direction");
  std::function<Poly(const Poly&)> self = [&](const Poly& q) { return total_derivative(q, dir); };
  return derive(p, [&](const Expr& atom) -> Poly {
    switch (atom.kind()) {
      case Kind::Jet:
        if (atom.order() > 0 && atom.direction() != dir) {
          throw ExprError("mixed derivatives are not representable");
        }
        return Poly::atom(Expr::jet(atom.field(), atom.order() + 1, dir));
      case Kind::Func:
        return function_derivative(atom, self);
      case Kind::Add:
        return total_derivative(to_poly(atom), dir);
      default:
        return Poly();
    }
  });
}

Expr total_derivative(const Expr& e, Direction dir) { return total_derivative(to_poly(e), dir).to_expr(); }

Expr replace(const Expr& e, const std::map<Expr, Expr, ExprLess>& map) {
  switch (e.kind()) {
    case Kind::Number:
      return e;
    case Kind::Jet:
    case Kind::Param:
    case Kind::Slot: {
      auto it = map.find(e);
      return it == map.end() ? e : it->second;
    }
    case Kind::Func: {
      std::vector<Expr> args;
      for (const auto& a : e.children()) args.push_back(replace(a, map));
      std::optional<Expr> rad;
      if (e.radicand() != nullptr) rad = *e.radicand();
      return Expr::func(e.name(), std::move(args), e.derivative_index(), rad);
    }
    case Kind::Add:
    case Kind::Mul: {
      std::vector<Expr> parts;
      for (const auto& c : e.children()) parts.push_back(replace(c, map));
      return e.kind() == Kind::Add ? Expr::add(std::move(parts)) : Expr::mul(std::move(parts));
    }
    case Kind::Pow:
      return Expr::pow(replace(e.base(), map), e.exponent());
  }
  return e;
}

Expr substitute(const Expr& e, const Bindings& b) {
  std::map<std::pair<std::string, std::vector<int>>, Expr> bodies;
  std::function<Expr(const Expr&)> go = [&](const Expr& x) -> Expr {
    switch (x.kind()) {
      case Kind::Number:
        return x;
      case Kind::Jet:
      case Kind::Param:
      case Kind::Slot: {
        auto it = b.atoms.find(x);
        return it == b.atoms.end() ? x : it->second;
      }
      case Kind::Func: {
        std::vector<Expr> args;
        for (const auto& a : x.children()) args.push_back(go(a));
        auto fb = b.functions.find(x.name());
        if (fb == b.functions.end() || x.is_radical()) {
          std::optional<Expr> rad;
          if (x.radicand() != nullptr) rad = *x.radicand();
          return Expr::func(x.name(), std::move(args), x.derivative_index(), rad);
        }
        if (static_cast<int>(args.size()) != fb->second.arity) {
          throw ExprError("arity mismatch binding '" + x.name() + "': expected " +
                          std::to_string(fb->second.arity) + ", got " + std::to_string(args.size()));
        }
        auto key = std::make_pair(x.name(), x.derivative_index());
        auto it = bodies.find(key);
        if (it == bodies.end()) {
          Expr body = fb->second.body;
          const auto& deriv = x.derivative_index();
          for (std::size_t k = 0; k < deriv.size(); ++k) {
            for (int r = 0; r < deriv[k]; ++r) body = partial(body, Expr::slot(static_cast<int>(k) + 1));
          }
          it = bodies.emplace(key, body).first;
        }
        std::map<Expr, Expr, ExprLess> at;
        for (std::size_t k = 0; k < args.size(); ++k) at.emplace(Expr::slot(static_cast<int>(k) + 1), args[k]);
        return replace(it->second, at);
      }
      case Kind::Add:
      case Kind::Mul: {
        std::vector<Expr> parts;
        for (const auto& c : x.children()) parts.push_back(go(c));
        return x.kind() == Kind::Add ? Expr::add(std::move(parts)) : Expr::mul(std::move(parts));
      }
      case Kind::Pow:
        return Expr::pow(go(x.base()), x.exponent());
    }
    return x;
  };
  return normalize(go(e));
}

Expr substitute_fields(const Expr& e, const std::vector<Expr>& images) {
  std::map<Expr, Expr, ExprLess> map;
  for (const auto& jet : collect(e, Kind::Jet)) {
    int i = jet.field();
    if (i > static_cast<int>(images.size())) continue;
    Poly p = to_poly(images[i - 1]);
    for (int k = 0; k < jet.order(); ++k) p = total_derivative(p, jet.direction());
    map.emplace(jet, p.to_expr());
  }
  return normalize(replace(e, map));
}

std::set<Expr, ExprLess> collect(const Expr& e, Kind kind) {
  std::set<Expr, ExprLess> out;
  walk(e, [&](const Expr& x) {
    if (x.kind() == kind) out.insert(x);
  });
  return out;
}

std::set<std::string> function_names(const Expr& e) {
  std::set<std::string> out;
  walk(e, [&](const Expr& x) {
    if (x.kind() == Kind::Func) out.insert(x.name());
  });
  return out;
}

bool has_functions(const Expr& e) {
  bool found = false;
  walk(e, [&](const Expr& x) { found = found || x.kind() == Kind::Func; });
  return found;
}

int max_order(const Expr& e, int field, Direction dir) {
  int best = -1;
  walk(e, [&](const Expr& x) {
    if (x.kind() != Kind::Jet || x.field() != field) return;
    if (x.order() == 0 || x.direction() == dir) best = std::max(best, x.order());
  });
  return best;
}

int max_field(const Expr& e) {
  int best = 0;
  walk(e, [&](const Expr& x) {
    if (x.kind() == Kind::Jet) best = std::max(best, x.field());
  });
  return best;
}

}  // namespace hydroham
