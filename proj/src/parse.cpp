#include "hydroham/parse.hpp"

#include <cctype>

#include "hydroham/algebra.hpp"

namespace hydroham {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

int SymbolTable::field_of(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] == name) return static_cast<int>(i) + 1;
  }
  if (name.size() >= 2 && name[0] == 'u' && name[1] != '0') {
    int k = 0;
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (std::isdigit(static_cast<unsigned char>(name[i])) == 0) return 0;
      k = k * 10 + (name[i] - '0');
      if (k > 99) return 0;
    }
    return k;
  }
  return 0;
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, SymbolTable& symbols) : s_(text), symbols_(symbols) {}

  Expr run() {
    Expr e = expression();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (peek() == '/') {
        std::size_t at = pos_;
        ++pos_;
        Expr d = unary();
        if (d.is_literal_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    std::size_t at = pos_;
    Expr ex = exponent_operand();
    Expr value = normalize(ex);
    if (!value.is_number() || !value.number().is_rational()) {
      pos_ = at;
      fail("exponent must be a rational constant");
    }
    Rational q = value.number().rational();
    if (q.get_den() != 1 && !base.is_field_variable() && !base.is_number()) {
      pos_ = at;
      fail("rational powers are only permitted on field variables");
    }
    try {
      return Expr::pow(base, q);
    } catch (const ArithmeticError& err) {
      pos_ = at;
      fail(err.what());
    }
  }

  // Exponents bind tighter than unary minus on the left but accept a sign.
  Expr exponent_operand() {
    if (accept('-')) return -exponent_operand();
    return power();
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) return integer();
    if (std::isalpha(static_cast<unsigned char>(c)) != 0) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr integer() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
    return Expr(Rational(mpz_class(s_.substr(start, pos_ - start))));
  }

  std::string name() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Expr identifier() {
    std::size_t start = pos_;
    std::string id = name();
    if (id == "sqrt") return surd(start);
    if (id.size() > 3 && id.compare(0, 3, "arg") == 0 &&
        id.find_first_not_of("0123456789", 3) == std::string::npos) {
      return Expr::slot(std::stoi(id.substr(3)));
    }
    if (int field = symbols_.field_of(id); field > 0) return jet(field);
    if (symbols_.params.count(id) != 0) return Expr::param(id);
    if (auto r = symbols_.radicals.find(id); r != symbols_.radicals.end()) {
      expect('(');
      Expr arg = expression();
      expect(')');
      return Expr::func(id, {arg}, {}, r->second);
    }
    return function(id, start);
  }

  Expr surd(std::size_t start) {
    expect('(');
    Expr arg = normalize(expression());
    expect(')');
    if (!arg.is_number() || !arg.number().is_rational() || sgn(arg.number().rational()) < 0) {
      pos_ = start;
      fail("sqrt takes a non-negative rational constant");
    }
    return Expr::sqrt(arg.number().rational());
  }

  Expr jet(int field) {
    if (pos_ >= s_.size() || s_[pos_] != '_') return Expr::var(field);
    ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '{') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
      if (start == pos_) fail("expected jet order");
      int order = std::stoi(s_.substr(start, pos_ - start));
      Direction dir = direction();
      if (pos_ >= s_.size() || s_[pos_] != '}') fail("expected '}'");
      ++pos_;
      return Expr::jet(field, order, order == 0 ? Direction::None : dir);
    }
    std::size_t start = pos_;
    Direction dir = direction();
    int order = 1;
    while (pos_ < s_.size() && s_[pos_] == static_cast<char>(dir)) {
      ++pos_;
      ++order;
    }
    if (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])) != 0) {
      pos_ = start;
      fail("bad jet suffix");
    }
    return Expr::jet(field, order, dir);
  }

  Direction direction() {
    if (pos_ < s_.size() && s_[pos_] == 'x') {
      ++pos_;
      return Direction::X;
    }
    if (pos_ < s_.size() && s_[pos_] == 't') {
      ++pos_;
      return Direction::T;
    }
    fail("expected jet direction 'x' or 't'");
  }

  Expr function(const std::string& id, std::size_t start) {
    std::vector<int> deriv;
    int primes = 0;
    if (pos_ < s_.size() && s_[pos_] == '_') {
      ++pos_;
      if (pos_ >= s_.size() || s_[pos_] != '{') fail("expected '{' after '_'");
      ++pos_;
      for (;;) {
        skip();
        std::size_t d = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])) != 0) ++pos_;
        if (d == pos_) fail("expected derivative count");
        deriv.push_back(std::stoi(s_.substr(d, pos_ - d)));
        if (accept('}')) break;
        expect(',');
      }
    }
    while (pos_ < s_.size() && s_[pos_] == '\'') {
      ++pos_;
      ++primes;
    }
    if (peek() != '(') {
      pos_ = start;
      fail("unknown symbol '" + id + "'");
    }
    ++pos_;
    std::vector<Expr> args;
    args.push_back(expression());
    while (accept(',')) args.push_back(expression());
    expect(')');
    int arity = static_cast<int>(args.size());
    if (primes > 0) {
      if (!deriv.empty()) fail("mixed derivative notations");
      if (arity != 1) fail("primes are only allowed on one-argument functions");
      deriv.push_back(primes);
    }
    if (!deriv.empty() && static_cast<int>(deriv.size()) != arity) {
      fail("derivative index of '" + id + "' does not match its arity");
    }
    auto known = symbols_.functions.find(id);
    if (known == symbols_.functions.end()) {
      if (!symbols_.auto_declare) {
        pos_ = start;
        fail("unknown function '" + id + "'");
      }
      symbols_.functions.emplace(id, arity);
    } else if (known->second != arity) {
      pos_ = start;
      fail("arity mismatch for '" + id + "': expected " + std::to_string(known->second) + ", got " +
           std::to_string(arity));
    }
    return Expr::func(id, std::move(args), std::move(deriv));
  }

  const std::string& s_;
  SymbolTable& symbols_;
  std::size_t pos_ = 0;
};

enum Prec { kSum = 1, kProduct = 2, kUnary = 3, kPower = 4, kAtom = 5 };

class Printer {
 public:
  explicit Printer(const SymbolTable* symbols) : symbols_(symbols) {}

  std::string print(const Expr& e) { return print(e, 0); }

 private:
  static int precedence(const Expr& e) {
    switch (e.kind()) {
      case Kind::Number: {
        const Scalar& n = e.number();
        if (n.is_compound()) return kSum;
        if (n.is_negative_leading()) return kUnary;
        if (n.is_rational() && n.rational().get_den() != 1) return kProduct;
        if (!n.is_rational() && n.terms().begin()->second != 1) return kProduct;
        return kAtom;
      }
      case Kind::Add:
        return kSum;
      case Kind::Mul: {
        const Expr& first = e.children().front();
        if (first.is_number() && first.number().is_negative_leading()) return kUnary;
        return kProduct;
      }
      case Kind::Pow:
        return kPower;
      default:
        return kAtom;
    }
  }

  std::string wrap(const Expr& e, int min_prec) {
    std::string s = print(e, 0);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
  }

  std::string field_name(int field) const {
    if (symbols_ != nullptr && field <= static_cast<int>(symbols_->variables.size())) {
      return symbols_->variables[field - 1];
    }
    return "u" + std::to_string(field);
  }

  std::string print(const Expr& e, int /*unused*/) {
    switch (e.kind()) {
      case Kind::Number:
        return e.number().str();
      case Kind::Jet: {
        std::string s = field_name(e.field());
        if (e.order() == 0) return s;
        char d = direction_char(e.direction());
        if (e.order() <= 3) return s + "_" + std::string(static_cast<std::size_t>(e.order()), d);
        return s + "_{" + std::to_string(e.order()) + d + "}";
      }
      case Kind::Param:
        return e.name();
      case Kind::Slot:
        return "arg" + std::to_string(e.slot_index());
      case Kind::Func:
        return function(e);
      case Kind::Add:
        return sum(e);
      case Kind::Mul:
        return product(e);
      case Kind::Pow:
        return power(e);
    }
    return "?";
  }

  std::string function(const Expr& e) {
    std::string s = e.name();
    const auto& d = e.derivative_index();
    if (!d.empty()) {
      if (d.size() == 1 && d[0] <= 3) {
        s += std::string(static_cast<std::size_t>(d[0]), '\'');
      } else {
        s += "_{";
        for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
        s += "}";
      }
    }
    s += "(";
    for (std::size_t i = 0; i < e.children().size(); ++i) {
      if (i) s += ",";
      s += print(e.children()[i]);
    }
    return s + ")";
  }

  std::string sum(const Expr& e) {
    std::string s;
    bool first = true;
    for (const auto& t : e.children()) {
      std::string p = t.kind() == Kind::Add ? "(" + print(t) + ")" : print(t);
      if (first) {
        s = p;
      } else if (!p.empty() && p[0] == '-') {
        s += " - " + p.substr(1);
      } else {
        s += " + " + p;
      }
      first = false;
    }
    return s;
  }

  std::string product(const Expr& e) {
    std::vector<std::string> num;
    std::vector<std::string> den;
    std::string sign;
    std::size_t start = 0;
    const auto& fs = e.children();
    if (fs.front().is_number()) {
      Scalar c = fs.front().number();
      start = 1;
      if (c.is_negative_leading() && !c.is_compound()) {
        sign = "-";
        c = -c;
      }
      if (!c.is_one()) num.push_back(c.is_compound() ? "(" + c.str() + ")" : c.str());
    }
    for (std::size_t i = start; i < fs.size(); ++i) {
      const Expr& f = fs[i];
      if (f.kind() == Kind::Pow && sgn(f.exponent()) < 0) {
        Expr flipped = Expr::pow(f.base(), -f.exponent());
        den.push_back(wrap(flipped, kPower));
      } else {
        num.push_back(wrap(f, kProduct + 1));
      }
    }
    std::string s = sign;
    if (num.empty()) s += "1";
    for (std::size_t i = 0; i < num.size(); ++i) s += (i ? "*" : "") + num[i];
    if (!den.empty()) {
      s += "/";
      if (den.size() == 1) {
        s += den.front();
      } else {
        s += "(";
        for (std::size_t i = 0; i < den.size(); ++i) s += (i ? "*" : "") + den[i];
        s += ")";
      }
    }
    return s;
  }

  std::string power(const Expr& e) {
    const Rational& q = e.exponent();
    if (sgn(q) < 0) return "1/" + wrap(Expr::pow(e.base(), -q), kPower);
    std::string base = wrap(e.base(), kAtom);
    if (q.get_den() == 1) return base + "^" + rational_str(q);
    return base + "^(" + rational_str(q) + ")";
  }

  const SymbolTable* symbols_;
};

}  // namespace

Expr parse(const std::string& text, SymbolTable& symbols) { return Parser(text, symbols).run(); }

Expr parse(const std::string& text) {
  SymbolTable symbols;
  return parse(text, symbols);
}

std::string to_string(const Expr& e, const SymbolTable* symbols) { return Printer(symbols).print(e); }

}  // namespace hydroham
