#include <gtest/gtest.h>

#include "hydroham/algebra.hpp"
#include "hydroham/parse.hpp"
#include "hydroham/zero_test.hpp"

using namespace hydroham;

namespace {

Expr P(const std::string& s) {
  SymbolTable table;
  table.params = {"a", "c"};
  table.radicals.emplace("s", normalize(Expr(1L) + pow(Expr::slot(1), 2)));
  return parse(s, table);
}

bool same(const Expr& a, const Expr& b) { return is_zero(a - b); }

}  // namespace

TEST(Scalar, SurdArithmetic) {
  Scalar r2 = Scalar::sqrt_of(2);
  EXPECT_EQ(r2 * r2, Scalar(2L));
  EXPECT_EQ(Scalar::sqrt_of(8), Scalar(2L) * r2);
  EXPECT_EQ(Scalar::sqrt_of(2) * Scalar::sqrt_of(6), Scalar(2L) * Scalar::sqrt_of(3));
  Scalar x = Scalar(1L) + r2 + Scalar::sqrt_of(3);
  EXPECT_EQ(x * x.inverse(), Scalar(1L));
  EXPECT_EQ(Scalar::sqrt_of(Rational(1, 2)).str(), "1/2*sqrt(2)");
  EXPECT_THROW(Scalar::sqrt_of(-1), ArithmeticError);
}

TEST(Parse, JetsAndFunctions) {
  Expr e = P("u1_x");
  EXPECT_EQ(e.kind(), Kind::Jet);
  EXPECT_EQ(e.field(), 1);
  EXPECT_EQ(e.order(), 1);
  EXPECT_EQ(P("u_{4x}"), Expr::jet(1, 4, Direction::X));
  EXPECT_EQ(P("w_tt"), Expr::jet(3, 2, Direction::T));
  Expr hd = P("-(15/8)*u1^(-7/2)*u1_x^3");
  EXPECT_TRUE(same(hd, Expr(Rational(-15, 8)) * Expr::pow(Expr::var(1), Rational(-7, 2)) *
                           pow(Expr::jet(1, 1, Direction::X), 3)));
  Expr fh = P("f(v,w)*h(v,w)");
  EXPECT_EQ(fh.kind(), Kind::Mul);
  EXPECT_EQ(fh.children().size(), 2U);
  EXPECT_EQ(P("f_{0,1}(v,w)").derivative_index(), (std::vector<int>{0, 1}));
  EXPECT_EQ(P("f''(w)").derivative_index(), (std::vector<int>{2}));
}

TEST(Parse, Errors) {
  SymbolTable t;
  EXPECT_THROW(parse("u + ", t), ParseError);
  EXPECT_THROW(parse("q", t), ParseError);
  parse("f(u)", t);
  try {
    parse("u + f(u,v)", t);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4U);
  }
  EXPECT_THROW(parse("u^v", t), ParseError);
  EXPECT_THROW(parse("(u+v)^(1/2)", t), ParseError);
}

TEST(Parse, RoundTrip) {
  for (const char* text : {"-(15/8)*u1^(-7/2)*u1_x^3", "f(v,w)*h(v,w) - 3/2*u*v/w", "(u*w - v)^(-1)*w + sqrt(2)*v",
                           "c*f'(w)*w^(-1/2) - s(w)*(1 + w^2)", "1/(u + v)^2 - a*u_xx"}) {
    Expr e = normalize(P(text));
    Expr back = normalize(P(to_string(e)));
    EXPECT_EQ(back, e) << text << " -> " << to_string(e);
  }
}

TEST(Normalize, CanonicalZero) {
  EXPECT_TRUE(normalize(P("(u+v)^2 - u^2 - 2*u*v - v^2")).is_literal_zero());
  EXPECT_TRUE(normalize(P("u^(1/2)*u^(1/2) - u")).is_literal_zero());
  EXPECT_TRUE(normalize(P("s(w)^2 - 1 - w^2")).is_literal_zero());
  EXPECT_TRUE(normalize(P("f(v,w) - f(v,w)")).is_literal_zero());
  EXPECT_TRUE(is_zero(P("1/(u*w-v) - w/(u*w^2-v*w)")));
  EXPECT_FALSE(is_zero(P("u + v - w")));
}

TEST(Calculus, Partials) {
  EXPECT_EQ(partial(P("u*v"), Expr::var(1)), normalize(P("v")));
  EXPECT_TRUE(same(partial(P("f(v,w)*l(w)"), Expr::var(3)), P("f_{0,1}(v,w)*l(w) + f(v,w)*l'(w)")));
  EXPECT_EQ(partial(P("w*w_x"), Expr::var(3)), normalize(P("w_x")));
  EXPECT_TRUE(same(partial(P("s(w)"), Expr::var(3)), P("w/s(w)")));
  EXPECT_TRUE(same(partial(P("1/(u*w-v)"), Expr::var(2)), P("1/(u*w-v)^2")));
}

TEST(Calculus, TotalDerivative) {
  Direction x = Direction::X;
  EXPECT_EQ(total_derivative(P("u"), x), normalize(P("u_x")));
  EXPECT_EQ(total_derivative(P("u^2"), x), normalize(P("2*u*u_x")));
  EXPECT_TRUE(same(total_derivative(P("u^(-1/2)"), x), P("-1/2*u^(-3/2)*u_x")));
  EXPECT_TRUE(same(total_derivative(P("f(u,v)"), x), P("f_{1,0}(u,v)*u_x + f_{0,1}(u,v)*v_x")));
}

TEST(Calculus, Substitute) {
  Bindings b;
  b.functions["f"] = {2, Expr(6L) * Expr::slot(2)};
  EXPECT_EQ(substitute(P("f(v,w)"), b), normalize(P("6*w")));
  Bindings c;
  c.functions["f"] = {1, pow(Expr::slot(1), 2)};
  EXPECT_EQ(substitute(P("f'(v)"), c), normalize(P("2*v")));
  Bindings d;
  d.atoms.emplace(Expr::var(1), P("(u1 - u3)/sqrt(2)"));
  EXPECT_EQ(substitute(P("u"), d), normalize(P("(u1 - u3)/sqrt(2)")));
}

TEST(ZeroTest, Specialization) {
  EXPECT_TRUE(is_zero(P("h(v,w)*(f_{1,0}(v,w)/h(v,w) - f(v,w)*h_{1,0}(v,w)/h(v,w)^2)*h(v,w) - "
                        "(h(v,w)*f_{1,0}(v,w) - f(v,w)*h_{1,0}(v,w))")));
  ZeroResult r = zero_test(P("f(v)*g(w) - g(v)*f(w)"));
  EXPECT_EQ(r.verdict, Verdict::NonZero);
  EXPECT_EQ(r.method, "specialization");
}
