#include <algorithm>
#include <atomic>

#include "hydroham/algebra.hpp"

namespace hydroham {
namespace {

std::atomic<std::size_t> g_term_budget{400000};

void check_budget(std::size_t n) {
  if (n > g_term_budget.load()) {
    throw ResourceLimit("expansion exceeded " + std::to_string(g_term_budget.load()) + " terms");
  }
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

long to_long(const Rational& q) {
  if (!is_integer(q) || !q.get_num().fits_slong_p()) throw ExprError("exponent out of range");
  return q.get_num().get_si();
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    int c = compare(i->atom, j->atom);
    if (c < 0) {
      out.push_back(*i++);
    } else if (c > 0) {
      out.push_back(*j++);
    } else {
      Rational e = i->exp + j->exp;
      if (sgn(e) != 0) out.push_back({i->atom, e});
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), i, a.end());
  out.insert(out.end(), j, b.end());
  return out;
}

// P(arg) for an algebraic function with radicand P(slot1).
Expr radicand_at(const Expr& fn) {
  std::map<Expr, Expr, ExprLess> m{{Expr::slot(1), fn.children().front()}};
  return replace(*fn.radicand(), m);
}

}  // namespace

void set_term_budget(std::size_t terms) { g_term_budget = terms; }

std::size_t term_budget() { return g_term_budget.load(); }

int compare(const Monomial& a, const Monomial& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i].atom, b[i].atom);
    if (c != 0) return c;
    int e = cmp(a[i].exp, b[i].exp);
    if (e != 0) return e > 0 ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

Poly::Poly(const Scalar& constant) {
  if (!constant.is_zero()) terms_.emplace(Monomial{}, constant);
}

Poly Poly::atom(const Expr& atom, const Rational& exp) {
  Poly p;
  p.add_term(Monomial{{atom, exp}}, Scalar(1L));
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Scalar Poly::constant() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Scalar() : it->second;
}

void Poly::add_term(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Factor& f = m[i];
    if (!f.atom.is_radical() || f.exp == 1) continue;
    if (!is_integer(f.exp)) throw ExprError("fractional power of an algebraic function");
    // s^e = s^r * P^((e - r)/2) with r in {0, 1}
    long e = to_long(f.exp);
    long r = ((e % 2) + 2) % 2;
    long half = (e - r) / 2;
    Monomial rest = m;
    if (r == 0) {
      rest.erase(rest.begin() + static_cast<long>(i));
    } else {
      rest[i].exp = 1;
    }
    Poly factor = to_poly(Expr::pow(radicand_at(f.atom), Rational(half)));
    Poly head;
    head.add_term(rest, c);
    *this += head * factor;
    return;
  }
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  check_budget(terms_.size());
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly Poly::operator+(const Poly& o) const {
  Poly out = *this;
  out += o;
  return out;
}

Poly Poly::operator-(const Poly& o) const {
  Poly out = *this;
  out -= o;
  return out;
}

Poly Poly::operator*(const Poly& o) const {
  Poly out;
  if (is_zero() || o.is_zero()) return out;
  check_budget(terms_.size() * o.terms_.size() / 64);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) out.add_term(multiply(ma, mb), ca * cb);
  }
  return out;
}

Poly Poly::scaled(const Scalar& c) const {
  Poly out;
  if (c.is_zero()) return out;
  out.terms_ = terms_;
  for (auto& [m, v] : out.terms_) v *= c;
  return out;
}

Poly Poly::pow(unsigned long k) const {
  Poly result(Scalar(1L));
  Poly base = *this;
  while (k > 0) {
    if (k & 1UL) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Expr Poly::to_expr() const {
  std::vector<Expr> terms;
  terms.reserve(terms_.size());
  for (const auto& [m, c] : terms_) {
    std::vector<Expr> factors;
    factors.reserve(m.size() + 1);
    factors.emplace_back(c);
    for (const auto& f : m) factors.push_back(f.exp == 1 ? f.atom : Expr::pow(f.atom, f.exp));
    terms.push_back(Expr::mul(std::move(factors)));
  }
  return Expr::add(std::move(terms));
}

Poly to_poly(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
      return Poly(e.number());
    case Kind::Jet:
    case Kind::Param:
    case Kind::Slot:
      return Poly::atom(e);
    case Kind::Func: {
      std::vector<Expr> args;
      args.reserve(e.children().size());
      for (const auto& a : e.children()) args.push_back(normalize(a));
      std::optional<Expr> rad;
      if (e.radicand() != nullptr) rad = *e.radicand();
      return Poly::atom(Expr::func(e.name(), std::move(args), e.derivative_index(), rad));
    }
    case Kind::Add: {
      Poly out;
      for (const auto& t : e.children()) out += to_poly(t);
      return out;
    }
    case Kind::Mul: {
      Poly out(Scalar(1L));
      for (const auto& f : e.children()) {
        out = out * to_poly(f);
        if (out.is_zero()) break;
      }
      return out;
    }
    case Kind::Pow:
      break;
  }
  const Rational& q = e.exponent();
  Poly base = to_poly(e.base());
  if (is_integer(q) && sgn(q) > 0) return base.pow(static_cast<unsigned long>(to_long(q)));
  if (base.is_zero()) {
    if (sgn(q) < 0) throw ArithmeticError("division by zero");
    return base;
  }
  if (base.size() == 1) {
    const auto& [m, c] = *base.terms().begin();
    auto cq = c.pow(q);
    if (!cq) throw ExprError("power " + rational_str(q) + " of " + c.str() + " is not a surd");
    Monomial out;
    out.reserve(m.size());
    for (const auto& f : m) {
      Rational ex = f.exp * q;
      if (!is_integer(ex) && !f.atom.is_field_variable()) {
        throw ExprError("rational powers are only permitted on field variables");
      }
      out.push_back({f.atom, ex});
    }
    Poly p;
    p.add_term(out, *cq);
    return p;
  }
  if (!is_integer(q)) throw ExprError("rational powers are only permitted on field variables");
  Scalar lead = base.terms().begin()->second;
  Expr primitive = base.scaled(lead.inverse()).to_expr();
  Poly p;
  p.add_term(Monomial{{primitive, q}}, lead.pow(to_long(q)));
  return p;
}

Expr normalize(const Expr& e) { return to_poly(e).to_expr(); }

Cleared clear_denominators(const Expr& e) {
  Poly p = to_poly(e);
  std::map<Expr, Poly, ExprLess> expansions;
  for (int round = 0; round < 12; ++round) {
    std::map<Expr, long, ExprLess> lowest;
    for (const auto& [m, c] : p.terms()) {
      for (const auto& f : m) {
        if (f.atom.kind() != Kind::Add) continue;
        long ex = to_long(f.exp);
        auto it = lowest.find(f.atom);
        if (it == lowest.end()) {
          lowest.emplace(f.atom, std::min(ex, 0L));
        } else {
          it->second = std::min(it->second, ex);
        }
      }
    }
    if (lowest.empty()) {
      bool complete = true;
      for (const auto& [m, c] : p.terms()) {
        for (const auto& f : m) {
          if (f.atom.kind() == Kind::Func && !collect(f.atom, Kind::Add).empty()) complete = false;
        }
      }
      return {p, complete};
    }
    Poly out;
    for (const auto& [m, c] : p.terms()) {
      Monomial rest;
      std::map<Expr, long, ExprLess> shift;
      for (const auto& [atom, low] : lowest) shift[atom] = -low;
      for (const auto& f : m) {
        if (f.atom.kind() == Kind::Add) {
          shift[f.atom] += to_long(f.exp);
        } else {
          rest.push_back(f);
        }
      }
      Poly term;
      term.add_term(rest, c);
      for (const auto& [atom, k] : shift) {
        if (k == 0) continue;
        auto it = expansions.find(atom);
        if (it == expansions.end()) it = expansions.emplace(atom, to_poly(atom)).first;
        term = term * it->second.pow(static_cast<unsigned long>(k));
      }
      out += term;
    }
    p = std::move(out);
  }
  return {p, false};
}

}  // namespace hydroham
