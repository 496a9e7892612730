#include "hydroham/linsolve.hpp"

#include <set>

namespace hydroham {
namespace {

// eq -= factor * row
void axpy(LinearEquation& eq, const Scalar& factor, const LinearEquation& row) {
  for (const auto& [k, c] : row.coeffs) {
    auto [it, fresh] = eq.coeffs.emplace(k, Scalar());
    it->second -= factor * c;
    if (it->second.is_zero()) eq.coeffs.erase(it);
  }
  eq.constant -= factor * row.constant;
}

}  // namespace

// Rows are kept in echelon form: each row's pivot is its smallest column, so
// eliminating in increasing column order never reintroduces a visited pivot.
void RowReducer::eliminate(LinearEquation& eq) const {
  auto it = eq.coeffs.begin();
  while (it != eq.coeffs.end()) {
    int col = it->first;
    auto p = pivots_.find(col);
    if (p == pivots_.end()) {
      ++it;
      continue;
    }
    Scalar f = it->second;
    axpy(eq, f, p->second);
    it = eq.coeffs.upper_bound(col);
  }
}

bool RowReducer::add(LinearEquation eq) {
  if (!consistent_) return false;
  eliminate(eq);
  if (eq.coeffs.empty()) {
    if (!eq.constant.is_zero()) consistent_ = false;
    return consistent_;
  }
  int pivot = eq.coeffs.begin()->first;
  Scalar inv = eq.coeffs.begin()->second.inverse();
  for (auto& [k, c] : eq.coeffs) c *= inv;
  eq.constant *= inv;
  pivots_.emplace(pivot, std::move(eq));
  return true;
}

std::map<int, LinearEquation> RowReducer::reduced() const {
  std::map<int, LinearEquation> out;
  for (auto p = pivots_.rbegin(); p != pivots_.rend(); ++p) {
    LinearEquation row = p->second;
    auto it = row.coeffs.upper_bound(p->first);
    while (it != row.coeffs.end()) {
      int col = it->first;
      auto q = out.find(col);
      if (q == out.end()) {
        ++it;
        continue;
      }
      Scalar f = it->second;
      axpy(row, f, q->second);
      it = row.coeffs.upper_bound(col);
    }
    out.emplace(p->first, std::move(row));
  }
  return out;
}

std::vector<Scalar> RowReducer::particular() const {
  std::vector<Scalar> x(static_cast<std::size_t>(unknowns_));
  for (const auto& [p, row] : reduced()) x[static_cast<std::size_t>(p)] = -row.constant;
  return x;
}

std::vector<std::vector<Scalar>> RowReducer::kernel() const {
  std::map<int, LinearEquation> rows = reduced();
  std::vector<std::vector<Scalar>> out;
  for (int f = 0; f < unknowns_; ++f) {
    if (rows.count(f) != 0) continue;
    std::vector<Scalar> v(static_cast<std::size_t>(unknowns_));
    v[static_cast<std::size_t>(f)] = Scalar(1L);
    for (const auto& [p, row] : rows) {
      auto it = row.coeffs.find(f);
      if (it != row.coeffs.end()) v[static_cast<std::size_t>(p)] = -it->second;
    }
    out.push_back(std::move(v));
  }
  return out;
}

Bindings IdentitySolution::particular_bindings() const {
  Bindings b;
  for (const auto& u : unknowns) {
    auto it = particular.find(u);
    b.atoms.emplace(u, it == particular.end() ? Expr() : Expr(it->second));
  }
  return b;
}

IdentitySolution solve_identities(const std::vector<Expr>& residuals, const std::vector<Expr>& unknowns,
                                  bool stop_when_inconsistent) {
  std::set<Expr, ExprLess> unknown_set(unknowns.begin(), unknowns.end());
  std::map<Monomial, int, MonomialLess> columns;
  for (std::size_t i = 0; i < unknowns.size(); ++i) columns.emplace(Monomial{{unknowns[i], Rational(1)}}, static_cast<int>(i));

  IdentitySolution sol;
  sol.unknowns = unknowns;
  RowReducer reducer(static_cast<int>(unknowns.size()));
  for (const auto& r : residuals) {
    // Each key (monomial in the non-unknown atoms) collects one equation.
    Cleared c = clear_denominators(r);
    std::map<Monomial, LinearEquation, MonomialLess> local;
    for (const auto& [m, coeff] : c.numerator.terms()) {
      Monomial unk;
      Monomial rest;
      for (const auto& f : m) {
        if (unknown_set.count(f.atom) != 0) {
          unk.push_back(f);
        } else {
          if (!collect(f.atom, Kind::Param).empty()) {
            for (const auto& p : collect(f.atom, Kind::Param)) {
              if (unknown_set.count(p) != 0) throw ExprError("unknown appears inside a non-polynomial atom");
            }
          }
          rest.push_back(f);
        }
      }
      LinearEquation& eq = local[rest];
      if (unk.empty()) {
        eq.constant += coeff;
        continue;
      }
      auto col = columns.find(unk);
      if (col == columns.end()) col = columns.emplace(unk, static_cast<int>(columns.size())).first;
      auto [it, fresh] = eq.coeffs.emplace(col->second, Scalar());
      it->second += coeff;
      if (it->second.is_zero()) eq.coeffs.erase(it);
    }
    for (auto& [key, eq] : local) {
      ++sol.equations;
      reducer.add(std::move(eq));
    }
    if (stop_when_inconsistent && !reducer.consistent()) break;
  }
  reducer.set_unknowns(static_cast<int>(columns.size()));
  sol.consistent = reducer.consistent();
  for (const auto& [m, col] : columns) {
    if (col >= static_cast<int>(unknowns.size())) sol.linearized.push_back(m);
  }
  if (!sol.consistent) return sol;
  std::vector<Scalar> x = reducer.particular();
  for (std::size_t i = 0; i < unknowns.size(); ++i) sol.particular.emplace(unknowns[i], x[i]);
  for (const auto& v : reducer.kernel()) {
    std::map<Expr, Scalar, ExprLess> dir;
    bool any = false;
    for (std::size_t i = 0; i < unknowns.size(); ++i) {
      if (!v[i].is_zero()) any = true;
      dir.emplace(unknowns[i], v[i]);
    }
    if (any) sol.kernel.push_back(std::move(dir));
  }
  return sol;
}

}  // namespace hydroham
