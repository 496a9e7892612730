#include "hydroham/expr.hpp"

#include <algorithm>
#include <functional>

namespace hydroham {

struct Node {
  Kind kind = Kind::Number;
  Scalar number;
  int field = 0;
  int order = 0;
  Direction dir = Direction::None;
  std::string name;
  int slot = 0;
  std::vector<Expr> children;
  std::vector<int> deriv;
  std::vector<Expr> radicand;  // empty or one element
  Rational exponent;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

void finish_hash(Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1000003ULL;
  switch (n.kind) {
    case Kind::Number:
      h = mix(h, n.number.hash());
      break;
    case Kind::Jet:
      h = mix(h, static_cast<std::size_t>(n.field));
      h = mix(h, static_cast<std::size_t>(n.order));
      h = mix(h, static_cast<std::size_t>(n.dir));
      break;
    case Kind::Param:
      h = mix(h, std::hash<std::string>{}(n.name));
      break;
    case Kind::Slot:
      h = mix(h, static_cast<std::size_t>(n.slot));
      break;
    case Kind::Func:
      h = mix(h, std::hash<std::string>{}(n.name));
      for (int d : n.deriv) h = mix(h, static_cast<std::size_t>(d));
      for (const auto& r : n.radicand) h = mix(h, r.hash());
      break;
    case Kind::Pow:
      h = mix(h, std::hash<std::string>{}(rational_str(n.exponent)));
      break;
    default:
      break;
  }
  for (const auto& c : n.children) h = mix(h, c.hash());
  n.hash = h;
}

const std::vector<Expr> kNoChildren;
const std::vector<int> kNoDeriv;

}  // namespace

Direction other(Direction d) {
  if (d == Direction::X) return Direction::T;
  if (d == Direction::T) return Direction::X;
  throw ExprError("no opposite of an unset direction");
}

char direction_char(Direction d) { return d == Direction::None ? '-' : static_cast<char>(d); }

Expr::Expr() : Expr(Scalar()) {}

Expr::Expr(long value) : Expr(Scalar(value)) {}

Expr::Expr(const Rational& value) : Expr(Scalar(value)) {}

Expr::Expr(const Scalar& value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->number = value;
  finish_hash(*n);
  node_ = std::move(n);
}

Expr Expr::jet(int field, int order, Direction dir) {
  if (field < 1) throw ExprError("field index must be positive");
  if (order < 0) throw ExprError("jet order must be non-negative");
  if (order == 0) dir = Direction::None;
  if (order > 0 && dir == Direction::None) throw ExprError("jet of positive order needs a direction");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Jet;
  n->field = field;
  n->order = order;
  n->dir = dir;
  finish_hash(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::param(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Param;
  n->name = name;
  finish_hash(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::slot(int k) {
  if (k < 1) throw ExprError("slot index must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Slot;
  n->slot = k;
  finish_hash(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::func(const std::string& name, std::vector<Expr> args, std::vector<int> deriv,
                std::optional<Expr> radicand) {
  if (args.empty()) throw ExprError("function '" + name + "' needs at least one argument");
  if (!deriv.empty() && deriv.size() != args.size()) {
    throw ExprError("derivative index of '" + name + "' does not match its arity");
  }
  if (std::any_of(deriv.begin(), deriv.end(), [](int d) { return d < 0; })) {
    throw ExprError("negative derivative index");
  }
  if (std::all_of(deriv.begin(), deriv.end(), [](int d) { return d == 0; })) deriv.clear();
  if (radicand && args.size() != 1) throw ExprError("algebraic functions take one argument");
  if (radicand && !deriv.empty()) {
    throw ExprError("derivatives of algebraic functions are expressed through the function itself");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Func;
  n->name = name;
  n->children = std::move(args);
  n->deriv = std::move(deriv);
  if (radicand) n->radicand.push_back(*radicand);
  finish_hash(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::add(std::vector<Expr> terms) {
  Scalar constant;
  std::vector<Expr> kept;
  kept.reserve(terms.size());
  for (auto& t : terms) {
    if (t.kind() == Kind::Number) {
      constant += t.number();
    } else {
      kept.push_back(std::move(t));
    }
  }
  if (!constant.is_zero()) kept.insert(kept.begin(), Expr(constant));
  if (kept.empty()) return Expr();
  if (kept.size() == 1) return kept.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->children = std::move(kept);
  finish_hash(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::mul(std::vector<Expr> factors) {
  Scalar coeff(1L);
  std::vector<Expr> kept;
  kept.reserve(factors.size());
  for (auto& f : factors) {
    if (f.kind() == Kind::Number) {
      coeff *= f.number();
    } else {
      kept.push_back(std::move(f));
    }
  }
  if (coeff.is_zero()) return Expr();
  if (!coeff.is_one()) kept.insert(kept.begin(), Expr(coeff));
  if (kept.empty()) return Expr(coeff);
  if (kept.size() == 1) return kept.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mul;
  n->children = std::move(kept);
  finish_hash(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::pow(const Expr& base, const Rational& exponent) {
  Rational e = exponent;
  e.canonicalize();
  if (sgn(e) == 0) return Expr(1L);
  if (e == 1) return base;
  if (base.kind() == Kind::Number) {
    if (base.number().is_zero()) {
      if (sgn(e) < 0) throw ArithmeticError("division by zero");
      return Expr();
    }
    if (auto v = base.number().pow(e)) return Expr(*v);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->children.push_back(base);
  n->exponent = e;
  finish_hash(*n);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Kind Expr::kind() const { return node_->kind; }

bool Expr::is_literal_zero() const { return kind() == Kind::Number && node_->number.is_zero(); }

bool Expr::is_literal_one() const { return kind() == Kind::Number && node_->number.is_one(); }

const Scalar& Expr::number() const {
  if (kind() != Kind::Number) throw ExprError("not a number");
  return node_->number;
}

int Expr::field() const {
  if (kind() != Kind::Jet) throw ExprError("not a jet variable");
  return node_->field;
}

int Expr::order() const {
  if (kind() != Kind::Jet) throw ExprError("not a jet variable");
  return node_->order;
}

Direction Expr::direction() const {
  if (kind() != Kind::Jet) throw ExprError("not a jet variable");
  return node_->dir;
}

const std::string& Expr::name() const {
  if (kind() != Kind::Param && kind() != Kind::Func) throw ExprError("expression has no name");
  return node_->name;
}

int Expr::slot_index() const {
  if (kind() != Kind::Slot) throw ExprError("not a slot");
  return node_->slot;
}

const std::vector<Expr>& Expr::children() const { return node_->children; }

const std::vector<int>& Expr::derivative_index() const {
  return kind() == Kind::Func ? node_->deriv : kNoDeriv;
}

const Expr* Expr::radicand() const {
  if (kind() != Kind::Func || node_->radicand.empty()) return nullptr;
  return &node_->radicand.front();
}

const Rational& Expr::exponent() const {
  if (kind() != Kind::Pow) throw ExprError("not a power");
  return node_->exponent;
}

std::size_t Expr::hash() const { return node_->hash; }

int compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  const Node& x = *a.node();
  const Node& y = *b.node();
  if (x.kind != y.kind) return x.kind < y.kind ? -1 : 1;
  switch (x.kind) {
    case Kind::Number:
      return x.number.compare(y.number);
    case Kind::Jet:
      if (x.field != y.field) return x.field < y.field ? -1 : 1;
      if (x.dir != y.dir) return x.dir < y.dir ? -1 : 1;
      if (x.order != y.order) return x.order < y.order ? -1 : 1;
      return 0;
    case Kind::Param: {
      int c = x.name.compare(y.name);
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Slot:
      return x.slot == y.slot ? 0 : (x.slot < y.slot ? -1 : 1);
    case Kind::Func: {
      int c = x.name.compare(y.name);
      if (c != 0) return c < 0 ? -1 : 1;
      if (x.deriv != y.deriv) return x.deriv < y.deriv ? -1 : 1;
      if (x.radicand.size() != y.radicand.size()) return x.radicand.size() < y.radicand.size() ? -1 : 1;
      if (!x.radicand.empty()) {
        int r = compare(x.radicand.front(), y.radicand.front());
        if (r != 0) return r;
      }
      break;
    }
    case Kind::Pow: {
      int c = cmp(x.exponent, y.exponent);
      if (c != 0) return c < 0 ? -1 : 1;
      break;
    }
    default:
      break;
  }
  std::size_t n = std::min(x.children.size(), y.children.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(x.children[i], y.children[i]);
    if (c != 0) return c;
  }
  if (x.children.size() != y.children.size()) return x.children.size() < y.children.size() ? -1 : 1;
  return 0;
}

Expr Expr::operator-() const {
  if (kind() == Kind::Number) return Expr(-number());
  return mul({Expr(-1L), *this});
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::add({a, b}); }

Expr operator-(const Expr& a, const Expr& b) { return Expr::add({a, -b}); }

Expr operator*(const Expr& a, const Expr& b) { return Expr::mul({a, b}); }

Expr operator/(const Expr& a, const Expr& b) {
  if (b.kind() == Kind::Number) return Expr::mul({a, Expr(b.number().inverse())});
  return Expr::mul({a, Expr::pow(b, Rational(-1))});
}

Expr pow(const Expr& base, long exponent) { return Expr::pow(base, Rational(exponent)); }

}  // namespace hydroham
