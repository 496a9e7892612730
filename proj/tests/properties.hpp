// Seeded randomized properties shared by the property test binary and the
// acceptance runner.
#ifndef HYDROHAM_TESTS_PROPERTIES_HPP
#define HYDROHAM_TESTS_PROPERTIES_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hydroham/algebra.hpp"
#include "hydroham/catalog.hpp"
#include "hydroham/transform.hpp"
#include "hydroham/variational.hpp"

namespace hydroham::props {

struct PropertyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool passed() const { return cases > 0 && failures == 0; }
  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

/// Random expressions in fields 1..fields with x-jets up to max_order.
class ExprGen {
 public:
  ExprGen(std::uint64_t seed, int fields, int max_order) : rng_(seed), fields_(fields), max_order_(max_order) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Expr atom() {
    int field = uniform(1, fields_);
    int order = uniform(0, max_order_);
    return order == 0 ? Expr::var(field) : Expr::jet(field, order, Direction::X);
  }

  Expr coefficient() {
    int c = uniform(-4, 4);
    return Expr(static_cast<long>(c == 0 ? 1 : c));
  }

  Expr monomial() {
    Expr m = coefficient();
    int k = uniform(1, 3);
    for (int i = 0; i < k; ++i) m = m * atom();
    return m;
  }

  Expr polynomial(int max_terms) {
    std::vector<Expr> terms;
    int k = uniform(1, max_terms);
    for (int i = 0; i < k; ++i) terms.push_back(monomial());
    return Expr::add(terms);
  }

  /// Polynomials, a nonvanishing inverse 1/(1 + p^2), and an arbitrary
  /// function of the fields.
  Expr expression(int depth) {
    if (depth <= 0) return polynomial(3);
    switch (uniform(0, 4)) {
      case 0:
        return expression(depth - 1) + expression(depth - 1);
      case 1:
        return expression(depth - 1) * expression(depth - 1);
      case 2: {
        Expr p = polynomial(2);
        return expression(depth - 1) / (Expr(1L) + p * p);
      }
      case 3: {
        std::vector<Expr> args;
        for (int i = 1; i <= fields_; ++i) args.push_back(Expr::var(i));
        return Expr::func("f", args) * polynomial(2);
      }
      default:
        return Expr::pow(expression(depth - 1), Rational(2));
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  int fields_;
  int max_order_;
};

inline PropertyResult euler_kills_total_derivatives(int cases, std::uint64_t seed) {
  PropertyResult r{"euler kills total derivatives"};
  // Densities of jet order <= 2, so the total derivative reaches order 3.
  ExprGen gen(seed, 2, 2);
  for (int i = 0; i < cases; ++i) {
    Expr e = gen.expression(2);
    Expr d = total_derivative(e, Direction::X);
    ++r.cases;
    for (int field = 1; field <= 2; ++field) {
      if (!is_zero(euler(d, field, Direction::X))) {
        r.fail("E_" + std::to_string(field) + "(D(" + to_string(e) + ")) != 0");
        break;
      }
    }
  }
  return r;
}

inline PropertyResult normalization_idempotent(int cases, std::uint64_t seed) {
  PropertyResult r{"normalization idempotence"};
  ExprGen gen(seed, 3, 2);
  for (int i = 0; i < cases; ++i) {
    Expr e = gen.expression(3);
    Expr once = normalize(e);
    ++r.cases;
    if (normalize(once) != once) r.fail(to_string(e));
  }
  return r;
}

inline PropertyResult leibniz(int cases, std::uint64_t seed) {
  PropertyResult r{"Leibniz rule"};
  ExprGen gen(seed, 2, 2);
  for (int i = 0; i < cases; ++i) {
    Expr a = gen.expression(1);
    Expr b = gen.expression(1);
    ++r.cases;
    auto D = [](const Expr& e) { return total_derivative(e, Direction::X); };
    Expr u = Expr::var(1);
    bool ok = is_zero(D(a * b) - D(a) * b - a * D(b)) &&
              is_zero(partial(a * b, u) - partial(a, u) * b - a * partial(b, u));
    if (!ok) r.fail(to_string(a) + " ; " + to_string(b));
  }
  return r;
}

inline PropertyResult is_zero_sound(int cases, std::uint64_t seed) {
  PropertyResult r{"is_zero soundness"};
  ExprGen gen(seed, 2, 1);
  for (int i = 0; i < cases; ++i) {
    Expr e = gen.expression(2);
    Expr p = gen.polynomial(2);
    Expr q = Expr(1L) + p * p;
    // The same value written differently, and a shifted one.
    Expr same = (e * q) / q + p - p;
    ++r.cases;
    if (!is_zero(e - same)) r.fail("identity missed: " + to_string(e));
    if (is_zero(e - same + Expr(Rational(1, 7)) * q)) r.fail("nonzero accepted: " + to_string(e));
  }
  return r;
}

/// Invertible affine map: a permutation with nonzero scalings, one shear
/// u_i += c u_j and a shift. Dense matrices are avoided because they blow up
/// the rational entries of C3,8 without testing anything new.
inline PointMap random_affine(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> small(-2, 2);
  std::uniform_int_distribution<int> index(0, n - 1);
  std::vector<int> perm(n);
  for (int k = 0; k < n; ++k) perm[k] = k;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<Scalar>> a(n, std::vector<Scalar>(n, Scalar(0L)));
  for (int k = 0; k < n; ++k) {
    int scale = small(rng);
    a[k][perm[k]] = Scalar(static_cast<long>(scale == 0 ? 1 : scale));
  }
  int i = index(rng), j = index(rng);
  if (i != j) {
    for (int k = 0; k < n; ++k) a[i][k] += Scalar(static_cast<long>(small(rng))) * a[j][k];
  }
  std::vector<Scalar> shift(n);
  for (auto& x : shift) x = Scalar(static_cast<long>(small(rng)));
  return PointMap::affine(a, shift);
}

/// check_full verdicts on catalog instantiations and on their mutations are
/// unchanged by random affine changes of variables.
inline PropertyResult pushforward_invariance(int maps_per_entry, std::uint64_t seed) {
  PropertyResult r{"pushforward invariance of check_full verdicts"};
  std::mt19937_64 rng(seed);
  for (const auto& e : catalog()) {
    for (int i = 0; i < maps_per_entry; ++i) {
      NonHomOperator c = instantiate(e, random_instantiation(e, rng));
      Mutation mu = mutations(e).front();
      NonHomOperator bad = instantiate(mu.entry, random_instantiation(mu.entry, rng));
      PointMap m = random_affine(e.n, rng);
      NonHomOperator c2, bad2;
      try {
        c2 = push_forward(c, m);
        bad2 = push_forward(bad, m);
      } catch (const ExprError&) {
        // Fractional powers of sums are outside the kernel; relabel instead.
        std::vector<int> perm(e.n);
        for (int k = 0; k < e.n; ++k) perm[k] = k + 1;
        std::shuffle(perm.begin(), perm.end(), rng);
        m = PointMap::permutation(perm);
        c2 = push_forward(c, m);
        bad2 = push_forward(bad, m);
      }
      r.cases += 2;
      if (check_full(c).passed() != check_full(c2).passed()) r.fail(e.id + " under " + describe(m));
      if (check_full(bad).passed() != check_full(bad2).passed()) r.fail(e.id + "/" + mu.name + " under " + describe(m));
    }
  }
  return r;
}

inline PropertyResult n2_jacobi_trivial(int cases, std::uint64_t seed) {
  PropertyResult r{"n = 2 Jacobi triviality"};
  ExprGen gen(seed, 2, 0);
  for (int i = 0; i < cases; ++i) {
    Expr w = gen.expression(2);
    Matrix omega{{Expr(), w}, {-w, Expr()}};
    ++r.cases;
    const ConditionResult* j = check_ultralocal(omega).find("ultralocal.jacobi");
    if (!j || j->status != Status::Pass) r.fail(to_string(w));
  }
  return r;
}

/// For verified catalog operators and random densities a, b, the bilinear
/// form E(a) C(E(b)) + E(b) C(E(a)) is a total derivative.
inline PropertyResult flow_skew_symmetry(int per_entry, std::uint64_t seed) {
  PropertyResult r{"skew-symmetry at the flow level"};
  std::mt19937_64 rng(seed);
  for (const auto& e : catalog()) {
    ExprGen gen(rng(), e.n, 0);
    for (int i = 0; i < per_entry; ++i) {
      NonHomOperator c = instantiate(e, random_instantiation(e, rng));
      Expr a = gen.polynomial(3);
      Expr b = gen.polynomial(3);
      EvolutionSystem fa = flow(c, a);
      EvolutionSystem fb = flow(c, b);
      Expr bilinear;
      for (int k = 0; k < c.n; ++k) {
        bilinear += euler(a, k + 1, c.dir) * fb.rhs[k] + euler(b, k + 1, c.dir) * fa.rhs[k];
      }
      ++r.cases;
      for (int k = 1; k <= c.n; ++k) {
        if (!is_zero(euler(bilinear, k, c.dir))) {
          r.fail(e.id + " with a = " + to_string(a) + ", b = " + to_string(b));
          break;
        }
      }
    }
  }
  return r;
}

}  // namespace hydroham::props

#endif  // HYDROHAM_TESTS_PROPERTIES_HPP
