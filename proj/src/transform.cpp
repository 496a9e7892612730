#include "hydroham/transform.hpp"

#include <sstream>

#include "hydroham/algebra.hpp"

namespace hydroham {
namespace {

const char* kNotInvertible = "not invertible: equation not linear in top derivative";

}  // namespace

ScalarEvolutionEquation scalar_equation(const Expr& rhs) {
  for (const auto& jet : collect(rhs, Kind::Jet)) {
    if (jet.field() != 1) throw TransformError("scalar equations use the single field u");
    if (jet.order() > 0 && jet.direction() != Direction::X) throw TransformError(kNotInvertible);
  }
  ScalarEvolutionEquation eq;
  eq.order = max_order(rhs, 1, Direction::X);
  if (eq.order < 1) throw TransformError(kNotInvertible);
  Expr top = Expr::jet(1, eq.order, Direction::X);
  eq.f2 = partial(rhs, top);
  if (is_zero(eq.f2) || !is_zero(partial(eq.f2, top))) throw TransformError(kNotInvertible);
  eq.f1 = normalize(rhs - eq.f2 * top);
  return eq;
}

ScalarEvolutionEquation scalar_equation(const std::string& text) {
  SymbolTable symbols;
  auto eq = text.find('=');
  Expr e;
  if (eq == std::string::npos) {
    e = Expr::jet(1, 1, Direction::T) - parse(text, symbols);
  } else {
    e = parse(text.substr(0, eq), symbols) - parse(text.substr(eq + 1), symbols);
  }
  Expr ut = Expr::jet(1, 1, Direction::T);
  Expr a = partial(e, ut);
  if (is_zero(a) || !is_zero(partial(a, ut))) throw TransformError("equation is not linear in u_t");
  Expr rest = normalize(e - a * ut);
  for (const auto& jet : collect(a, Kind::Jet)) {
    if (jet.order() > 0) throw TransformError("coefficient of u_t must not depend on derivatives");
  }
  return scalar_equation(normalize(-rest / a));
}

EvolutionSystem invert_equation(const ScalarEvolutionEquation& eq) {
  int k = eq.order;
  if (k < 1 || is_zero(eq.f2)) throw TransformError(kNotInvertible);
  std::map<Expr, Expr, ExprLess> coords;
  for (int s = 0; s < k; ++s) coords.emplace(Expr::jet(1, s, Direction::X), Expr::var(s + 1));
  for (const auto& e : {eq.f1, eq.f2}) {
    for (const auto& jet : collect(e, Kind::Jet)) {
      if (jet.order() >= k) throw TransformError(kNotInvertible);
    }
  }
  Expr f1 = replace(eq.f1, coords);
  Expr f2 = replace(eq.f2, coords);
  EvolutionSystem s;
  s.n = k;
  s.evolution = Direction::X;
  s.symbols.variables.clear();
  for (int i = 1; i <= k; ++i) s.symbols.variables.push_back("u" + std::to_string(i));
  for (int i = 1; i < k; ++i) s.rhs.push_back(Expr::var(i + 1));
  s.rhs.push_back(normalize((Expr::jet(1, 1, Direction::T) - f1) / f2));
  return s;
}

PointMap PointMap::identity(int n) {
  PointMap m;
  for (int i = 1; i <= n; ++i) {
    m.forward.push_back(Expr::var(i));
    m.inverse.push_back(Expr::var(i));
  }
  return m;
}

PointMap PointMap::permutation(const std::vector<int>& image) {
  PointMap m;
  int n = static_cast<int>(image.size());
  m.forward.resize(image.size());
  m.inverse.resize(image.size());
  for (int i = 0; i < n; ++i) {
    m.forward[i] = Expr::var(image[i]);
    m.inverse[image[i] - 1] = Expr::var(i + 1);
  }
  return m;
}

PointMap PointMap::affine(const std::vector<std::vector<Scalar>>& a, const std::vector<Scalar>& shift) {
  int n = static_cast<int>(a.size());
  // Gauss-Jordan on [A | I].
  std::vector<std::vector<Scalar>> m(static_cast<std::size_t>(n), std::vector<Scalar>(2 * static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n + i] = Scalar(1L);
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r) {
      if (!m[r][col].is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) throw TransformError("affine map is singular");
    std::swap(m[piv], m[col]);
    Scalar inv = m[col][col].inverse();
    for (auto& v : m[col]) v *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      Scalar f = m[r][col];
      for (int j = 0; j < 2 * n; ++j) m[r][j] -= f * m[col][j];
    }
  }
  PointMap out;
  for (int i = 0; i < n; ++i) {
    std::vector<Expr> fwd{Expr(shift[i])};
    std::vector<Expr> inv;
    for (int j = 0; j < n; ++j) {
      fwd.push_back(Expr(a[i][j]) * Expr::var(j + 1));
      // u = A^{-1}(ubar - c)
      inv.push_back(Expr(m[i][n + j]) * (Expr::var(j + 1) - Expr(shift[j])));
    }
    out.forward.push_back(normalize(Expr::add(fwd)));
    out.inverse.push_back(normalize(Expr::add(inv)));
  }
  return out;
}

PointMap PointMap::then(const PointMap& next) const {
  PointMap out;
  for (const auto& f : next.forward) out.forward.push_back(substitute_fields(f, forward));
  for (const auto& g : inverse) out.inverse.push_back(substitute_fields(g, next.inverse));
  return out;
}

bool PointMap::consistent(const ZeroTestOptions& options) const {
  for (std::size_t i = 0; i < forward.size(); ++i) {
    Expr id = Expr::var(static_cast<int>(i) + 1);
    if (!is_zero(substitute_fields(forward[i], inverse) - id, options)) return false;
    if (!is_zero(substitute_fields(inverse[i], forward) - id, options)) return false;
  }
  return true;
}

Matrix jacobian(const std::vector<Expr>& map) {
  int n = static_cast<int>(map.size());
  Matrix j = zero_matrix(n);
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < n; ++p) j[i][p] = partial(map[i], Expr::var(p + 1));
  }
  return j;
}

NonHomOperator push_forward(const NonHomOperator& c, const PointMap& m, const ZeroTestOptions& options) {
  int n = c.n;
  if (static_cast<int>(m.forward.size()) != n || static_cast<int>(m.inverse.size()) != n) {
    throw TransformError("map has the wrong number of components");
  }
  Matrix j = jacobian(m.forward);
  if (is_zero(determinant(j), options)) throw TransformError("non-invertible Jacobian");
  Matrix k = jacobian(m.inverse);
  std::vector<Matrix> hess(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) hess[a] = jacobian(j[a]);  // hess[a][q][s] = d_s d_q ubar^a
  auto back = [&](const Expr& e) { return substitute_fields(e, m.inverse); };

  NonHomOperator out = NonHomOperator::zero(n, c.dir);
  out.symbols = c.symbols;
  for (int a = 0; a < n; ++a) {
    for (int bb = 0; bb < n; ++bb) {
      std::vector<Expr> gs;
      std::vector<Expr> ws;
      for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
          gs.push_back(j[a][p] * c.g[p][q] * j[bb][q]);
          ws.push_back(j[a][p] * c.omega[p][q] * j[bb][q]);
        }
      }
      out.g[a][bb] = back(Expr::add(gs));
      out.omega[a][bb] = back(Expr::add(ws));
      std::vector<Expr> lower(static_cast<std::size_t>(n));
      for (int s = 0; s < n; ++s) {
        std::vector<Expr> t;
        for (int p = 0; p < n; ++p) {
          for (int q = 0; q < n; ++q) {
            t.push_back(j[a][p] * j[bb][q] * c.b[p][q][s]);
            t.push_back(j[a][p] * c.g[p][q] * hess[bb][q][s]);
          }
        }
        lower[s] = back(Expr::add(t));
      }
      for (int kk = 0; kk < n; ++kk) {
        std::vector<Expr> t;
        for (int s = 0; s < n; ++s) t.push_back(lower[s] * k[s][kk]);
        out.b[a][bb][kk] = normalize(Expr::add(t));
      }
    }
  }
  return out;
}

Expr push_forward_density(const Expr& h, const PointMap& m) { return substitute_fields(h, m.inverse); }

EvolutionSystem push_forward_system(const EvolutionSystem& s, const PointMap& m) {
  Matrix j = jacobian(m.forward);
  EvolutionSystem out = s;
  for (int i = 0; i < s.n; ++i) {
    std::vector<Expr> t;
    for (int p = 0; p < s.n; ++p) t.push_back(j[i][p] * s.rhs[p]);
    out.rhs[i] = substitute_fields(Expr::add(t), m.inverse);
  }
  return out;
}

PointMap parse_point_map(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  int n = 0;
  SymbolTable symbols;
  symbols.variables.clear();
  std::vector<Expr>* section = nullptr;
  PointMap m;
  auto trim = [](std::string s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
  };
  auto split = [&](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon != std::string::npos) {
      std::string key = trim(line.substr(0, colon));
      std::string value = trim(line.substr(colon + 1));
      if (key == "components") {
        try {
          n = std::stoi(value);
        } catch (const std::exception&) {
          throw FormatError("bad component count", line_no);
        }
      } else if (key == "variables") {
        symbols.variables = split(value);
      } else if (key == "parameters") {
        for (const auto& p : split(value)) symbols.params.insert(p);
      } else if (key == "forward") {
        section = &m.forward;
      } else if (key == "inverse") {
        section = &m.inverse;
      } else {
        throw FormatError("unknown key '" + key + "'", line_no);
      }
      continue;
    }
    if (!section) throw FormatError("expression outside forward/inverse", line_no);
    // An optional "name =" in front of the expression is only a label.
    auto eq = line.find('=');
    if (eq != std::string::npos) line = trim(line.substr(eq + 1));
    try {
      section->push_back(parse(line, symbols));
    } catch (const ParseError& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  if (n < 1) throw FormatError("missing components", line_no);
  if (static_cast<int>(m.forward.size()) != n || static_cast<int>(m.inverse.size()) != n) {
    throw FormatError("forward and inverse need " + std::to_string(n) + " expressions each", line_no);
  }
  for (const auto& side : {m.forward, m.inverse}) {
    for (const auto& e : side) {
      if (max_field(e) > n) throw FormatError("expression uses a field beyond the component count", line_no);
    }
  }
  return m;
}

}  // namespace hydroham
