#include <gtest/gtest.h>

#include <random>

#include "hydroham/algebra.hpp"
#include "hydroham/transform.hpp"
#include "hydroham/variational.hpp"
#include "jacobi_oracle.hpp"

using namespace hydroham;

namespace {

const char* kThreeWave = R"(components: 3
direction: x
g:
  1, 0, 0
  0, -1, 0
  0, 0, -1
omega:
  0, -2*w, 2*v
  2*w, 0, 2*u
  -2*v, -2*u, 0
)";

const char* kTwoWave = R"(components: 2
direction: x
g:
  0, 0
  0, 1
omega:
  0, u
  -u, 0
)";

// Constant-coefficient operator with a degenerate leading term; Hamiltonian
// because a constant skew omega is Poisson and g is constant.
const char* kDegenerateConstant = R"(components: 3
direction: x
g:
  1, 1, 0
  1, 1, 0
  0, 0, 0
omega:
  0, 2, -1
  -2, 0, 3
  1, -3, 0
)";

Expr px(const std::string& s) {
  SymbolTable t;
  return parse(s, t);
}

PointMap map3(const std::vector<std::string>& fwd, const std::vector<std::string>& inv) {
  PointMap m;
  for (const auto& s : fwd) m.forward.push_back(px(s));
  for (const auto& s : inv) m.inverse.push_back(px(s));
  return m;
}

bool same_operator(const NonHomOperator& a, const NonHomOperator& b) {
  for (int i = 0; i < a.n; ++i) {
    for (int j = 0; j < a.n; ++j) {
      if (!is_zero(a.g[i][j] - b.g[i][j]) || !is_zero(a.omega[i][j] - b.omega[i][j])) return false;
      for (int k = 0; k < a.n; ++k) {
        if (!is_zero(a.b[i][j][k] - b.b[i][j][k])) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST(Invert, Kdv) {
  EvolutionSystem s = invert_equation(scalar_equation("u_t = 6*u*u_x + u_xxx"));
  ASSERT_EQ(s.n, 3);
  EXPECT_EQ(s.evolution, Direction::X);
  EXPECT_TRUE(is_zero(s.rhs[0] - Expr::var(2)));
  EXPECT_TRUE(is_zero(s.rhs[1] - Expr::var(3)));
  EXPECT_TRUE(is_zero(s.rhs[2] - (Expr::jet(1, 1, Direction::T) - Expr(6L) * Expr::var(1) * Expr::var(2))));
}

TEST(Invert, FirstOrder) {
  EvolutionSystem s = invert_equation(scalar_equation("u_t = u_x"));
  ASSERT_EQ(s.n, 1);
  EXPECT_TRUE(is_zero(s.rhs[0] - Expr::jet(1, 1, Direction::T)));
}

TEST(Invert, GeneralisedKdvImplicitForm) {
  EvolutionSystem s = invert_equation(scalar_equation("u_t + 9*u^2*u_x + u_xxx = 0"));
  Expr expected = -Expr::jet(1, 1, Direction::T) - Expr(9L) * pow(Expr::var(1), 2) * Expr::var(2);
  EXPECT_TRUE(is_zero(s.rhs[2] - expected));
}

TEST(Invert, OutputIsFirstOrderQuasilinear) {
  for (const char* eq : {"u_t = u^(-3/2)*u_xxx - 15/8*u^(-7/2)*u_x^3", "u_t = u*u_xx + u_x^2", "u_t = u_x/(1 + u^2)"}) {
    EvolutionSystem s = invert_equation(scalar_equation(eq));
    for (const auto& r : s.rhs) {
      for (const auto& jet : collect(r, Kind::Jet)) {
        EXPECT_TRUE(jet.order() == 0 || (jet.order() == 1 && jet.direction() == Direction::T)) << eq;
      }
    }
  }
}

TEST(Invert, Errors) {
  EXPECT_THROW(scalar_equation("u_t = u_xx^2"), TransformError);
  EXPECT_THROW(scalar_equation("u_t = u"), TransformError);
  try {
    scalar_equation("u_t = u_xx^2");
  } catch (const TransformError& e) {
    EXPECT_NE(std::string(e.what()).find("not invertible"), std::string::npos);
  }
}

TEST(PushForward, IdentityAndInverse) {
  NonHomOperator c = parse_operator(kThreeWave);
  EXPECT_TRUE(same_operator(push_forward(c, PointMap::identity(3)), c));
  PointMap m = map3({"u + v^2", "v", "w - u"}, {"u - v^2", "v", "w + u - v^2"});
  ASSERT_TRUE(m.consistent());
  NonHomOperator there = push_forward(c, m);
  EXPECT_TRUE(same_operator(push_forward(there, m.inverted()), c));
}

TEST(PushForward, SwapOnTwoWave) {
  NonHomOperator c = parse_operator(kTwoWave);
  NonHomOperator s = push_forward(c, PointMap::permutation({2, 1}));
  EXPECT_TRUE(is_zero(s.g[0][0] - Expr(1L)));
  EXPECT_TRUE(is_zero(s.g[1][1]));
  // The sign-corrected tail omega^{12} = u becomes omega^{12} = -v: C21 with f = -v.
  EXPECT_TRUE(is_zero(s.omega[0][1] + px("v")));
}

TEST(PushForward, SingularJacobianRejected) {
  NonHomOperator c = parse_operator(kThreeWave);
  PointMap m = map3({"u + v", "u + v", "w"}, {"u", "v", "w"});
  EXPECT_THROW(push_forward(c, m), TransformError);
}

TEST(PushForward, FlowEquivalence) {
  NonHomOperator c = parse_operator(kThreeWave);
  PointMap m = map3({"u + v^2", "v", "w - u"}, {"u - v^2", "v", "w + u - v^2"});
  Expr h = px("u^2*v + w^3 - u*w");
  EvolutionSystem lhs = flow(push_forward(c, m), push_forward_density(h, m));
  EvolutionSystem rhs = push_forward_system(flow(c, h), m);
  EXPECT_EQ(flows_equal(lhs, rhs), Verdict::Zero);
}

// Constant Hamiltonian operators pushed through nonlinear maps give operators
// with non-constant g, b and omega that must satisfy every condition. This
// pins down the index placement of the longer first-order and compatibility
// conditions.
TEST(PushForward, TranscriptionOfConditions) {
  std::vector<PointMap> maps = {
      map3({"u + v^2", "v", "w - u"}, {"u - v^2", "v", "w + u - v^2"}),
      map3({"u", "v + u^3", "w + u*v"}, {"u", "v - u^3", "w - u*v + u^4"}),
      map3({"u + w^2", "v + u*w", "w"}, {"u - w^2", "v - u*w + w^3", "w"}),
  };
  for (const char* text : {kThreeWave, kDegenerateConstant}) {
    NonHomOperator c = parse_operator(text);
    ASSERT_TRUE(check_full(c).passed());
    for (const auto& m : maps) {
      ASSERT_TRUE(m.consistent());
      NonHomOperator t = push_forward(c, m);
      CheckReport r = check_full(t);
      EXPECT_TRUE(r.passed()) << r.summary();
    }
  }
}

// The transported operators satisfy the functional Jacobi identity directly,
// independently of the tensor conditions.
TEST(PushForward, TransportedOperatorsSatisfyJacobi) {
  PointMap m = map3({"u", "v + u^3", "w + u*v"}, {"u", "v - u^3", "w - u*v + u^4"});
  Expr f = px("u^2*v + w^3");
  Expr g = px("v^2*w - u^3");
  Expr h = px("u*v*w + w^2");
  for (const char* text : {kThreeWave, kDegenerateConstant}) {
    NonHomOperator t = push_forward(parse_operator(text), m);
    EXPECT_TRUE(oracle::jacobi_holds(t, f, g, h));
    NonHomOperator broken = t;
    broken.b[1][2][1] = broken.b[1][2][1] + Expr::var(1);
    broken.b[2][1][1] = broken.b[2][1][1] - Expr::var(1);
    EXPECT_FALSE(oracle::jacobi_holds(broken, f, g, h));
    EXPECT_FALSE(check_full(broken).passed());
  }
}

TEST(PushForward, AffineMapsPreserveVerdicts) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-3, 3);
  NonHomOperator good = parse_operator(kThreeWave);
  NonHomOperator bad = good;
  bad.omega[0][1] = -bad.omega[0][1];
  bad.omega[1][0] = -bad.omega[1][0];
  int done = 0;
  while (done < 20) {
    std::vector<std::vector<Scalar>> a(3, std::vector<Scalar>(3));
    std::vector<Scalar> shift(3);
    for (auto& row : a) {
      for (auto& x : row) x = Scalar(static_cast<long>(d(rng)));
    }
    for (auto& x : shift) x = Scalar(static_cast<long>(d(rng)));
    PointMap m;
    try {
      m = PointMap::affine(a, shift);
    } catch (const TransformError&) {
      continue;
    }
    ++done;
    EXPECT_TRUE(check_full(push_forward(good, m)).passed());
    EXPECT_FALSE(check_full(push_forward(bad, m)).passed());
  }
}

TEST(Match, DirectC21) {
  NonHomOperator c = parse_operator("components: 2\ng:\n  1, 0\n  0, 0\nomega:\n  0, v^3\n  -v^3, 0\n");
  auto m = match_catalog(c);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->entry_id, "C2,1");
  EXPECT_TRUE(is_zero(m->instantiation.functions.at("f").body - Expr::pow(Expr::slot(1), Rational(3))));
  EXPECT_EQ(describe(m->map), "ubar1 = u1, ubar2 = u2");
}

TEST(Match, TwoWaveViaSwap) {
  NonHomOperator c = parse_operator("components: 2\nparameters: a\ng:\n  0, 0\n  0, 1\nomega:\n  0, u\n  -u, 0\n");
  auto m = match_catalog(c);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->entry_id, "C2,1");
  EXPECT_EQ(describe(m->map), "ubar1 = u2, ubar2 = u1");
  EXPECT_TRUE(is_zero(m->instantiation.functions.at("f").body + Expr::slot(1)));
}

TEST(Match, KdvOperatorIsC32) {
  NonHomOperator c = parse_operator(
      "components: 3\ndirection: t\ng:\n  0, 0, 0\n  0, 0, 0\n  0, 0, 1\nomega:\n  0, 1, 0\n  -1, 0, 6*u\n  0, -6*u, 0\n");
  auto m = match_catalog(c);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->entry_id, "C3,2");
  EXPECT_TRUE(same_operator(push_forward(c, m->map), instantiate(find_entry("C3,2"), m->instantiation)));

  // The exchange u1 <-> u3 gives g = 0, h = -1, f = h l with l = 6w.
  auto inst = unify_with_entry(push_forward(c, PointMap::permutation({3, 2, 1})), find_entry("C3,2"));
  ASSERT_TRUE(inst.has_value());
  const auto& f = inst->functions;
  EXPECT_TRUE(is_zero(f.at("g").body));
  EXPECT_TRUE(is_zero(f.at("h").body + Expr(1L)));
  EXPECT_TRUE(is_zero(f.at("f").body + Expr(6L) * Expr::slot(2)));
}

TEST(Match, RelabeledCatalogOperatorsAreFound) {
  std::mt19937_64 rng(17);
  PointMap relabel = PointMap::permutation({2, 3, 1});
  relabel.forward[0] = -relabel.forward[0];
  relabel.inverse[1] = -relabel.inverse[1];
  ASSERT_TRUE(relabel.consistent());
  for (const auto& e : enumerate(3)) {
    NonHomOperator c = push_forward(instantiate(e, random_instantiation(e, rng)), relabel);
    auto m = match_catalog(c);
    ASSERT_TRUE(m.has_value()) << e.id;
    EXPECT_TRUE(same_operator(push_forward(c, m->map), instantiate(find_entry(m->entry_id), m->instantiation)))
        << e.id << " matched " << m->entry_id;
  }
}

TEST(Match, NoneOutsideCatalogShapes) {
  NonHomOperator full_rank = parse_operator("components: 2\ng:\n  1, 0\n  0, 1\n");
  EXPECT_FALSE(match_catalog(full_rank).has_value());
  // Rank one but omega depends on the g-direction: not Hamiltonian, no match.
  NonHomOperator bad = parse_operator("components: 2\ng:\n  1, 0\n  0, 0\nomega:\n  0, u\n  -u, 0\n");
  EXPECT_FALSE(match_catalog(bad).has_value());
}
