#include "hydroham/zero_test.hpp"

#include <functional>
#include <numeric>

#include "hydroham/algebra.hpp"
#include "hydroham/parse.hpp"

namespace hydroham {
namespace {

Rational random_rational(std::mt19937_64& rng, bool positive) {
  std::uniform_int_distribution<int> num(positive ? 1 : -9, 9);
  std::uniform_int_distribution<int> den(1, 7);
  int p = 0;
  while (p == 0) p = num(rng);
  Rational q(p, den(rng));
  q.canonicalize();
  return q;
}

bool has_free_functions(const Expr& e) {
  if (e.kind() == Kind::Func && !e.is_radical()) return true;
  for (const auto& c : e.children()) {
    if (has_free_functions(c)) return true;
  }
  return false;
}

struct Census {
  std::map<Expr, long, ExprLess> root_degree;  // lcm of exponent denominators per field variable
  std::set<Expr, ExprLess> pythagorean;        // field variables fed to sqrt(1 + z^2)
  std::set<Expr, ExprLess> atoms;
  std::map<std::string, int> functions;
};

void survey(const Expr& e, Census& c, const Expr& unit_circle) {
  switch (e.kind()) {
    case Kind::Jet:
    case Kind::Param:
    case Kind::Slot:
      c.atoms.insert(e);
      break;
    case Kind::Func:
      if (e.is_radical()) {
        const Expr& arg = e.children().front();
        if (arg.is_field_variable() && normalize(*e.radicand()) == unit_circle) c.pythagorean.insert(arg);
      } else {
        c.functions.emplace(e.name(), static_cast<int>(e.children().size()));
      }
      break;
    case Kind::Pow:
      if (e.base().is_field_variable() && e.exponent().get_den() != 1) {
        long d = e.exponent().get_den().get_si();
        auto [it, fresh] = c.root_degree.emplace(e.base(), d);
        if (!fresh) it->second = std::lcm(it->second, d);
      }
      break;
    default:
      break;
  }
  for (const auto& ch : e.children()) survey(ch, c, unit_circle);
}

std::optional<Scalar> eval(const Expr& e, const Specialization& s, const Scalar* slot1) {
  switch (e.kind()) {
    case Kind::Number:
      return e.number();
    case Kind::Jet:
    case Kind::Param:
    case Kind::Slot: {
      if (slot1 != nullptr && e.kind() == Kind::Slot && e.slot_index() == 1) return *slot1;
      auto it = s.atoms.find(e);
      if (it == s.atoms.end()) throw ExprError("no value for " + to_string(e));
      return it->second;
    }
    case Kind::Func: {
      std::vector<Scalar> args;
      for (const auto& a : e.children()) {
        auto v = eval(a, s, slot1);
        if (!v) return std::nullopt;
        args.push_back(*v);
      }
      if (e.is_radical()) {
        auto p = eval(*e.radicand(), s, &args.front());
        if (!p || !p->is_rational() || sgn(p->rational()) < 0) return std::nullopt;
        if (auto r = exact_root(p->rational(), 2)) return Scalar(*r);
        try {
          return Scalar::sqrt_of(p->rational());
        } catch (const ArithmeticError&) {
          return std::nullopt;
        }
      }
      auto f = s.functions.find(e.name());
      if (f == s.functions.end()) throw ExprError("no specialization for function " + e.name());
      return f->second.eval(args, e.derivative_index());
    }
    case Kind::Add: {
      Scalar sum;
      for (const auto& t : e.children()) {
        auto v = eval(t, s, slot1);
        if (!v) return std::nullopt;
        sum += *v;
      }
      return sum;
    }
    case Kind::Mul: {
      Scalar prod(1L);
      for (const auto& t : e.children()) {
        auto v = eval(t, s, slot1);
        if (!v) return std::nullopt;
        prod *= *v;
        if (prod.is_zero()) break;
      }
      return prod;
    }
    case Kind::Pow: {
      auto b = eval(e.base(), s, slot1);
      if (!b) return std::nullopt;
      const Rational& q = e.exponent();
      if (b->is_zero()) {
        if (sgn(q) < 0) return std::nullopt;
        return Scalar();
      }
      if (q.get_den() != 1 && b->is_rational() && sgn(b->rational()) > 0 && q.get_den().fits_ulong_p()) {
        if (auto r = exact_root(b->rational(), q.get_den().get_ui())) {
          return Scalar(*r).pow(q.get_num().get_si());
        }
      }
      return b->pow(q);
    }
  }
  return std::nullopt;
}

std::string describe(const Specialization& s, const Scalar& value, int trial) {
  std::string out = "value " + value.str() + " at trial " + std::to_string(trial) + " with ";
  bool first = true;
  for (const auto& [atom, v] : s.atoms) {
    out += (first ? "" : ", ") + to_string(atom) + "=" + v.str();
    first = false;
  }
  if (first) out += "no free atoms";
  return out;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Zero:
      return "zero";
    case Verdict::NonZero:
      return "nonzero";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

Scalar MultiPoly::eval(const std::vector<Scalar>& x, const std::vector<int>& deriv) const {
  Scalar sum;
  for (const auto& [exps, c] : coeffs) {
    Scalar term = c;
    bool vanish = false;
    for (std::size_t i = 0; i < exps.size() && !vanish; ++i) {
      int d = deriv.empty() ? 0 : deriv[i];
      if (exps[i] < d) {
        vanish = true;
        break;
      }
      long falling = 1;
      for (int k = 0; k < d; ++k) falling *= exps[i] - k;
      term *= Scalar(falling) * x[i].pow(static_cast<long>(exps[i] - d));
    }
    if (!vanish) sum += term;
  }
  return sum;
}

MultiPoly random_multipoly(int arity, int degree, std::mt19937_64& rng) {
  MultiPoly p;
  p.arity = arity;
  std::uniform_int_distribution<int> coeff(-9, 8);
  std::vector<int> exps(static_cast<std::size_t>(arity), 0);
  std::function<void(int, int)> fill = [&](int slot, int left) {
    if (slot == arity) {
      int c = coeff(rng);
      p.coeffs[exps] = Scalar(static_cast<long>(c >= 0 ? c + 1 : c));
      return;
    }
    for (int k = 0; k <= left; ++k) {
      exps[static_cast<std::size_t>(slot)] = k;
      fill(slot + 1, left - k);
    }
    exps[static_cast<std::size_t>(slot)] = 0;
  };
  fill(0, degree);
  return p;
}

Specialization random_specialization(const Expr& e, std::mt19937_64& rng, int degree) {
  static const Expr unit_circle = normalize(Expr(1L) + pow(Expr::slot(1), 2));
  Census census;
  survey(e, census, unit_circle);
  Specialization s;
  for (const auto& atom : census.atoms) {
    if (census.pythagorean.count(atom) != 0) {
      // w = (t^2 - 1)/(2t) makes 1 + w^2 a rational square.
      Rational t = random_rational(rng, true);
      if (t == 1) t = 2;
      Rational w = (t * t - 1) / (2 * t);
      w.canonicalize();
      s.atoms.emplace(atom, Scalar(w));
      continue;
    }
    auto root = census.root_degree.find(atom);
    if (root != census.root_degree.end()) {
      Rational t = random_rational(rng, true);
      Rational v = 1;
      for (long k = 0; k < root->second; ++k) v *= t;
      s.atoms.emplace(atom, Scalar(v));
      continue;
    }
    s.atoms.emplace(atom, Scalar(random_rational(rng, false)));
  }
  for (const auto& [name, arity] : census.functions) s.functions.emplace(name, random_multipoly(arity, degree, rng));
  return s;
}

std::optional<Scalar> evaluate(const Expr& e, const Specialization& s) {
  try {
    return eval(e, s, nullptr);
  } catch (const ArithmeticError&) {
    return std::nullopt;
  }
}

ZeroResult zero_test(const Expr& e, const ZeroTestOptions& options) {
  ZeroResult result;
  Expr subject = e;
  bool canonical = true;
  try {
    Cleared c = clear_denominators(e);
    if (c.numerator.is_zero()) {
      result.verdict = Verdict::Zero;
      result.method = "canonical";
      return result;
    }
    Expr numerator = c.numerator.to_expr();
    if (c.complete && !has_free_functions(numerator)) {
      result.verdict = Verdict::NonZero;
      result.method = "canonical";
      result.witness = "canonical numerator " + to_string(numerator);
      if (result.witness.size() > 400) result.witness = result.witness.substr(0, 400) + " ...";
      return result;
    }
    subject = normalize(e);
  } catch (const ResourceLimit&) {
    canonical = false;
  }
  result.method = "specialization";
  for (int t = 0; t < options.trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    bool sampled = false;
    for (int a = 0; a < options.resamples; ++a) {
      Specialization s = random_specialization(subject, rng, options.degree);
      auto v = evaluate(subject, s);
      if (!v) continue;
      sampled = true;
      if (!v->is_zero()) {
        result.verdict = Verdict::NonZero;
        result.trials = t + 1;
        result.witness = describe(s, *v, t);
        return result;
      }
      break;
    }
    if (!sampled) {
      result.verdict = Verdict::Inconclusive;
      result.trials = t + 1;
      result.witness = "no admissible sample point found";
      return result;
    }
  }
  result.trials = options.trials;
  result.verdict = canonical ? Verdict::Zero : Verdict::Inconclusive;
  if (!canonical) result.witness = "normalization exceeded the term budget";
  return result;
}

bool is_zero(const Expr& e, const ZeroTestOptions& options) {
  ZeroResult r = zero_test(e, options);
  if (r.verdict == Verdict::Inconclusive) throw Inconclusive("zero test inconclusive: " + r.witness);
  return r.verdict == Verdict::Zero;
}

}  // namespace hydroham
