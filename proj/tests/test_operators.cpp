#include <gtest/gtest.h>

#include "hydroham/algebra.hpp"
#include "hydroham/operators.hpp"

using namespace hydroham;

namespace {

const char* kThreeWave = R"(components: 3
direction: x
g:
  1, 0, 0
  0, -1, 0
  0, 0, -1
omega:
  0, -2*u3, 2*u2
  2*u3, 0, 2*u1
  -2*u2, -2*u1, 0
)";

Matrix mat(const std::vector<std::vector<std::string>>& rows) {
  Matrix m;
  for (const auto& r : rows) {
    std::vector<Expr> row;
    SymbolTable t;
    for (const auto& s : r) row.push_back(parse(s, t));
    m.push_back(row);
  }
  return m;
}

}  // namespace

TEST(Ultralocal, ConstantSkewPasses) {
  EXPECT_TRUE(check_ultralocal(mat({{"0", "3", "-1"}, {"-3", "0", "2"}, {"1", "-2", "0"}})).passed());
}

TEST(Ultralocal, ThreeWaveTailPasses) {
  NonHomOperator c = parse_operator(kThreeWave);
  EXPECT_TRUE(check_ultralocal(c.omega).passed());
}

TEST(Ultralocal, JacobiFailureNamesTriple) {
  Matrix w = mat({{"0", "v", "u"}, {"-v", "0", "w"}, {"-u", "-w", "0"}});
  CheckReport r = check_ultralocal(w);
  EXPECT_EQ(r.status(), Status::Fail);
  const ConditionResult* j = r.find("ultralocal.jacobi");
  ASSERT_NE(j, nullptr);
  ASSERT_FALSE(j->failures.empty());
  EXPECT_EQ(j->failures.front().indices, (std::vector<int>{1, 2, 3}));
  // The cyclic sum is +-(u + v - w) depending on orientation.
  Expr res = parse(j->failures.front().residual);
  EXPECT_TRUE(is_zero(res - parse("u + v - w")) || is_zero(res + parse("u + v - w")));
}

TEST(Ultralocal, TwoComponentJacobiIsTrivial) {
  SymbolTable t;
  Matrix w = {{Expr(), parse("f(u,v)", t)}, {-parse("f(u,v)", t), Expr()}};
  EXPECT_TRUE(check_ultralocal(w).passed());
}

TEST(FirstOrder, Examples) {
  NonHomOperator a = NonHomOperator::zero(2);
  a.g[0][0] = Expr(1L);
  EXPECT_TRUE(check_first_order(a.g, a.b).passed());
  NonHomOperator id = NonHomOperator::zero(3);
  for (int i = 0; i < 3; ++i) id.g[i][i] = Expr(1L);
  EXPECT_TRUE(check_first_order(id.g, id.b).passed());
  a.b[0][1][0] = Expr(1L);
  CheckReport r = check_first_order(a.g, a.b);
  EXPECT_EQ(r.find("first_order.metric_derivative")->status, Status::Fail);
}

TEST(Phi, LeadingRowIsGradient) {
  SymbolTable t;
  NonHomOperator c = NonHomOperator::zero(3);
  c.g[0][0] = Expr(1L);
  c.omega = mat({{"0", "f(u,v,w)", "g(u,v,w)"}, {"-f(u,v,w)", "0", "h(u,v,w)"}, {"-g(u,v,w)", "-h(u,v,w)", "0"}});
  Tensor3 phi = compute_phi(c);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      EXPECT_TRUE(is_zero(phi[0][j][k] - partial(c.omega[j][k], Expr::var(1))));
      EXPECT_TRUE(phi[1][j][k].is_literal_zero());
      EXPECT_TRUE(phi[2][j][k].is_literal_zero());
    }
  }
}

TEST(Compatibility, C21) {
  NonHomOperator c = NonHomOperator::zero(2);
  SymbolTable t;
  c.g[0][0] = Expr(1L);
  c.omega[0][1] = parse("f(v)", t);
  c.omega[1][0] = -parse("f(v)", t);
  EXPECT_TRUE(check_compatibility(c).passed());
  c.omega[0][1] = parse("f(u)", t);
  c.omega[1][0] = -parse("f(u)", t);
  CheckReport r = check_compatibility(c);
  EXPECT_EQ(r.find("compatibility.phi_cyclic")->status, Status::Fail);
}

TEST(Full, ThreeWave) {
  NonHomOperator c = parse_operator(kThreeWave);
  CheckReport r = check_full(c);
  EXPECT_TRUE(r.passed()) << r.summary();
  std::string text = kThreeWave;
  text.replace(text.find("2*u3, 0"), 1, "-2");
  CheckReport bad = check_full(parse_operator(text));
  EXPECT_EQ(bad.status(), Status::Fail);
}

TEST(Rank, Examples) {
  EXPECT_EQ(generic_rank(mat({{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "0"}})), 2);
  EXPECT_EQ(generic_rank(mat({{"0", "0"}, {"0", "0"}})), 0);
  EXPECT_EQ(generic_rank(mat({{"1/2", "0", "1/2"}, {"0", "0", "0"}, {"1/2", "0", "1/2"}})), 1);
}

TEST(Format, RoundTripAndErrors) {
  NonHomOperator c = parse_operator(kThreeWave);
  NonHomOperator back = parse_operator(format_operator(c));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(is_zero(back.omega[i][j] - c.omega[i][j]));
  }
  EXPECT_THROW(parse_operator("components: 2\ng:\n 1, 0\n"), FormatError);
  EXPECT_THROW(parse_operator("components: 2\ng:\n 1, 0\n 0, (\n"), FormatError);
  EXPECT_THROW(parse_operator("g:\n 1\n"), FormatError);
  NonHomOperator b = parse_operator("components: 2\nb[2]:\n 0, -1/u\n 1/u, 0\n");
  EXPECT_TRUE(is_zero(b.b[0][1][1] + parse("1/u")));
}
