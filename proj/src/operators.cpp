#include "hydroham/operators.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "hydroham/algebra.hpp"

namespace hydroham {
namespace {

constexpr std::size_t kMaxFailures = 6;
constexpr std::size_t kResidualChars = 300;

using Tensor4 = std::vector<Tensor3>;

std::string clip(std::string s) {
  if (s.size() > kResidualChars) s = s.substr(0, kResidualChars) + " ...";
  return s;
}

Status status_of(Verdict v) {
  switch (v) {
    case Verdict::Zero:
      return Status::Pass;
    case Verdict::NonZero:
      return Status::Fail;
    case Verdict::Inconclusive:
      return Status::Inconclusive;
  }
  return Status::Inconclusive;
}

void record(ConditionResult& c, std::vector<int> zero_based, const Expr& residual, const ZeroTestOptions& o) {
  ++c.checked;
  if (residual.is_literal_zero()) return;
  ZeroResult z = zero_test(residual, o);
  Status s = status_of(z.verdict);
  if (s == Status::Pass) return;
  ++c.failed;
  c.status = combine(c.status, s);
  if (c.failures.size() >= kMaxFailures) return;
  for (int& i : zero_based) ++i;
  Failure f;
  f.indices = std::move(zero_based);
  f.status = s;
  f.residual = clip(to_string(normalize(residual)));
  f.witness = z.method == "specialization" ? z.witness : "";
  c.failures.push_back(std::move(f));
}

ConditionResult condition(const std::string& id, const std::string& group, const std::string& statement) {
  ConditionResult c;
  c.id = id;
  c.group = group;
  c.statement = statement;
  return c;
}

Expr sum(int n, const std::function<Expr(int)>& term) {
  std::vector<Expr> parts;
  parts.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) parts.push_back(term(s));
  return Expr::add(std::move(parts));
}

Expr d(const Expr& e, int s) { return partial(e, Expr::var(s + 1)); }

// dm[i][j][s] = d_s m^{ij}
Tensor3 gradient(const Matrix& m) {
  int n = static_cast<int>(m.size());
  Tensor3 out(static_cast<std::size_t>(n), zero_matrix(n));
  for (int i = 0; i < n; ++i) {
    out[i].assign(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
    for (int j = 0; j < n; ++j) {
      for (int s = 0; s < n; ++s) out[i][j][s] = d(m[i][j], s);
    }
  }
  return out;
}

// db[i][j][k][s] = d_s b^{ij}_k
Tensor4 gradient(const Tensor3& b) {
  Tensor4 out;
  for (const auto& slice : b) out.push_back(gradient(slice));
  // gradient(slice) indexes [j][k][s] for fixed i.
  return out;
}


}  // namespace

FormatError::FormatError(const std::string& message, int line)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

Matrix zero_matrix(int n) {
  return Matrix(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
}

Tensor3 zero_tensor(int n) { return Tensor3(static_cast<std::size_t>(n), zero_matrix(n)); }

NonHomOperator NonHomOperator::zero(int n, Direction dir) {
  NonHomOperator c;
  c.n = n;
  c.dir = dir;
  c.g = zero_matrix(n);
  c.b = zero_tensor(n);
  c.omega = zero_matrix(n);
  return c;
}

NonHomOperator NonHomOperator::normalized() const {
  NonHomOperator c = *this;
  for (auto& row : c.g) {
    for (auto& e : row) e = normalize(e);
  }
  for (auto& slice : c.b) {
    for (auto& row : slice) {
      for (auto& e : row) e = normalize(e);
    }
  }
  for (auto& row : c.omega) {
    for (auto& e : row) e = normalize(e);
  }
  return c;
}

void NonHomOperator::validate() const {
  auto check_matrix = [&](const Matrix& m, const std::string& what) {
    if (static_cast<int>(m.size()) != n) throw ExprError(what + " has the wrong number of rows");
    for (const auto& row : m) {
      if (static_cast<int>(row.size()) != n) throw ExprError(what + " has a row of the wrong length");
      for (const auto& e : row) {
        for (const auto& jet : collect(e, Kind::Jet)) {
          if (jet.order() > 0) throw ExprError(what + " depends on the jet " + to_string(jet));
          if (jet.field() > n) throw ExprError(what + " refers to field " + std::to_string(jet.field()));
        }
      }
    }
  };
  if (n < 1) throw ExprError("operator needs at least one component");
  check_matrix(g, "g");
  check_matrix(omega, "omega");
  if (static_cast<int>(b.size()) != n) throw ExprError("b has the wrong shape");
  for (int i = 0; i < n; ++i) check_matrix(b[i], "b");
}

namespace {

// Receives every residual of a condition family with its (0-based) indices.
using Sink = std::function<void(ConditionResult&, std::vector<int>, const Expr&)>;

std::vector<ConditionResult> ultralocal_conditions(const Matrix& omega, const Sink& record) {
  int n = static_cast<int>(omega.size());
  ConditionResult skew = condition("ultralocal.skew", "ultralocal", "omega^{ij} + omega^{ji} = 0");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) record(skew, {i, j}, omega[i][j] + omega[j][i]);
  }
  Tensor3 dw = gradient(omega);
  ConditionResult jacobi = condition(
      "ultralocal.jacobi", "ultralocal",
      "omega^{is} d_s omega^{jk} + omega^{js} d_s omega^{ki} + omega^{ks} d_s omega^{ij} = 0");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Expr res = sum(n, [&](int s) {
          return omega[i][s] * dw[j][k][s] + omega[j][s] * dw[k][i][s] + omega[k][s] * dw[i][j][s];
        });
        record(jacobi, {i, j, k}, res);
      }
    }
  }
  return {std::move(skew), std::move(jacobi)};
}

std::vector<ConditionResult> first_order_conditions(const Matrix& g, const Tensor3& b, const Sink& record) {
  int n = static_cast<int>(g.size());
  Tensor3 dg = gradient(g);
  Tensor4 db = gradient(b);  // db[i][j][k][s] = d_s b^{ij}_k
  const std::string grp = "first-order";

  ConditionResult c1 = condition("first_order.symmetry", grp, "g^{ij} = g^{ji}");
  ConditionResult c2 = condition("first_order.metric_derivative", grp, "d_k g^{ij} = b^{ij}_k + b^{ji}_k");
  ConditionResult c3 = condition("first_order.exchange", grp, "g^{is} b^{jk}_s - g^{js} b^{ik}_s = 0");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      record(c1, {i, j}, g[i][j] - g[j][i]);
      for (int k = 0; k < n; ++k) {
        record(c2, {i, j, k}, dg[i][j][k] - b[i][j][k] - b[j][i][k]);
        record(c3, {i, j, k}, sum(n, [&](int s) { return g[i][s] * b[j][k][s] - g[j][s] * b[i][k][s]; }));
      }
    }
  }

  // T^{ijr}_k = g^{is}(d_k b^{jr}_s - d_s b^{jr}_k) + b^{ij}_s b^{sr}_k - b^{ir}_s b^{sj}_k
  ConditionResult c4 = condition("first_order.curvature", grp,
                                 "g^{is}(d_k b^{jr}_s - d_s b^{jr}_k) + b^{ij}_s b^{sr}_k - b^{ir}_s b^{sj}_k = 0");
  Tensor4 t(static_cast<std::size_t>(n), zero_tensor(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int rr = 0; rr < n; ++rr) {
        for (int k = 0; k < n; ++k) {
          Expr e = sum(n, [&](int s) {
            return g[i][s] * (db[j][rr][s][k] - db[j][rr][k][s]) + b[i][j][s] * b[s][rr][k] - b[i][rr][s] * b[s][j][k];
          });
          t[i][j][rr][k] = normalize(e);
          record(c4, {i, j, rr, k}, t[i][j][rr][k]);
        }
      }
    }
  }

  // L(i,j,r,q) = g^{is} d_s b^{jr}_q - b^{ij}_s b^{sr}_q - b^{ir}_s b^{js}_q, symmetric in (i,j)
  ConditionResult c5 = condition(
      "first_order.mixed", grp,
      "g^{is} d_s b^{jr}_q - b^{ij}_s b^{sr}_q - b^{ir}_s b^{js}_q = g^{js} d_s b^{ir}_q - b^{ji}_s b^{sr}_q - "
      "b^{is}_q b^{jr}_s");
  auto lhs5 = [&](int i, int j, int rr, int q) {
    return sum(n, [&](int s) {
      return g[i][s] * db[j][rr][q][s] - b[i][j][s] * b[s][rr][q] - b[i][rr][s] * b[j][s][q];
    });
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int rr = 0; rr < n; ++rr) {
        for (int q = 0; q < n; ++q) record(c5, {i, j, rr, q}, lhs5(i, j, rr, q) - lhs5(j, i, rr, q));
      }
    }
  }

  // E(i,j,r,q,k) = d_q T^{ijr}_k + sum over cyclic (a,b,c) of the upper
  // indices (i,j,r) of b^{sa}_q (d_k b^{bc}_s - d_s b^{bc}_k), symmetrized in
  // (q,k). Cycling (i,j,k) instead rejects operators obtained from constant
  // ones by a change of variables.
  ConditionResult c6 = condition("first_order.cyclic", grp,
                                 "sum over (q,k) of { d_q T^{ijr}_k + sum over cyclic (i,j,r) of "
                                 "b^{si}_q (d_k b^{jr}_s - d_s b^{jr}_k) } = 0");
  std::vector<Tensor4> dt(static_cast<std::size_t>(n), Tensor4(static_cast<std::size_t>(n), zero_tensor(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int rr = 0; rr < n; ++rr) {
        for (int k = 0; k < n; ++k) {
          for (int q = 0; q < n; ++q) dt[i][j][rr][k][q] = d(t[i][j][rr][k], q);
        }
      }
    }
  }
  auto e6 = [&](int i, int j, int rr, int q, int k) {
    int cyc[3][3] = {{i, j, rr}, {j, rr, i}, {rr, i, j}};
    std::vector<Expr> parts{dt[i][j][rr][k][q]};
    for (auto& abc : cyc) {
      int a = abc[0], bb = abc[1], c = abc[2];
      parts.push_back(sum(n, [&](int s) { return b[s][a][q] * (db[bb][c][s][k] - db[bb][c][k][s]); }));
    }
    return Expr::add(std::move(parts));
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int rr = 0; rr < n; ++rr) {
        for (int q = 0; q < n; ++q) {
          for (int k = 0; k < n; ++k) record(c6, {i, j, rr, q, k}, e6(i, j, rr, q, k) + e6(i, j, rr, k, q));
        }
      }
    }
  }
  return {std::move(c1), std::move(c2), std::move(c3), std::move(c4), std::move(c5), std::move(c6)};
}

}  // namespace

Tensor3 compute_phi(const NonHomOperator& c) {
  int n = c.n;
  Tensor3 dw = gradient(c.omega);
  Tensor3 phi = zero_tensor(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        phi[i][j][k] = normalize(sum(n, [&](int s) {
          return c.g[i][s] * dw[j][k][s] - c.b[i][j][s] * c.omega[s][k] - c.b[i][k][s] * c.omega[j][s];
        }));
      }
    }
  }
  return phi;
}

namespace {

std::vector<ConditionResult> compatibility_conditions(const NonHomOperator& c, const Sink& record) {
  int n = c.n;
  Tensor3 phi = compute_phi(c);
  Tensor3 dw = gradient(c.omega);
  Tensor4 db = gradient(c.b);
  const auto& b = c.b;
  const auto& w = c.omega;

  ConditionResult cyc = condition("compatibility.phi_cyclic", "compatibility", "Phi^{ijk} = Phi^{kij}");
  ConditionResult der = condition(
      "compatibility.phi_derivative", "compatibility",
      "d_r Phi^{ijk} = sum over cyclic (i,j,k) of b^{si}_r d_s omega^{jk} + (d_s b^{ij}_r - d_r b^{ij}_s) omega^{sk}");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        record(cyc, {i, j, k}, phi[i][j][k] - phi[k][i][j]);
        for (int rr = 0; rr < n; ++rr) {
          int perms[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
          std::vector<Expr> parts{d(phi[i][j][k], rr)};
          for (auto& p : perms) {
            int a = p[0], bb = p[1], cc = p[2];
            parts.push_back(-sum(n, [&](int s) {
              return b[s][a][rr] * dw[bb][cc][s] + (db[a][bb][rr][s] - db[a][bb][s][rr]) * w[s][cc];
            }));
          }
          record(der, {i, j, k, rr}, Expr::add(std::move(parts)));
        }
      }
    }
  }
  return {std::move(cyc), std::move(der)};
}

Sink recorder(const ZeroTestOptions& o) {
  return [&o](ConditionResult& c, std::vector<int> idx, const Expr& residual) { record(c, std::move(idx), residual, o); };
}

CheckReport report(const std::string& subject, std::vector<ConditionResult> conditions, const ZeroTestOptions& o) {
  CheckReport r;
  r.subject = subject;
  r.seed = o.seed;
  r.trials = o.trials;
  r.conditions = std::move(conditions);
  return r;
}

}  // namespace

CheckReport check_ultralocal(const Matrix& omega, const ZeroTestOptions& o) {
  return report("ultralocal part", ultralocal_conditions(omega, recorder(o)), o);
}

CheckReport check_first_order(const Matrix& g, const Tensor3& b, const ZeroTestOptions& o) {
  return report("first-order part", first_order_conditions(g, b, recorder(o)), o);
}

CheckReport check_compatibility(const NonHomOperator& c, const ZeroTestOptions& o) {
  return report("compatibility", compatibility_conditions(c, recorder(o)), o);
}

std::vector<Expr> hamiltonian_residuals(const NonHomOperator& c, bool include_first_order) {
  c.validate();
  std::vector<Expr> out;
  Sink keep = [&out](ConditionResult&, std::vector<int>, const Expr& residual) {
    if (!residual.is_literal_zero()) out.push_back(residual);
  };
  ultralocal_conditions(c.omega, keep);
  compatibility_conditions(c, keep);
  if (include_first_order) first_order_conditions(c.g, c.b, keep);
  return out;
}

CheckReport check_full(const NonHomOperator& c, const ZeroTestOptions& o) {
  c.validate();
  NonHomOperator cn = c.normalized();
  CheckReport r = check_first_order(cn.g, cn.b, o);
  r.append(check_ultralocal(cn.omega, o));
  r.append(check_compatibility(cn, o));
  r.subject = "operator";
  r.seed = o.seed;
  r.trials = o.trials;
  return r;
}

Expr determinant(const Matrix& m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return Expr(1L);
  if (n == 1) return m[0][0];
  std::vector<Expr> terms;
  for (int col = 0; col < n; ++col) {
    if (m[0][col].is_literal_zero()) continue;
    Matrix minor;
    for (int i = 1; i < n; ++i) {
      std::vector<Expr> row;
      for (int j = 0; j < n; ++j) {
        if (j != col) row.push_back(m[i][j]);
      }
      minor.push_back(std::move(row));
    }
    Expr t = m[0][col] * determinant(minor);
    terms.push_back(col % 2 == 0 ? t : -t);
  }
  return Expr::add(std::move(terms));
}

int generic_rank(const Matrix& g, const ZeroTestOptions& o) {
  int n = static_cast<int>(g.size());
  for (int k = n; k >= 1; --k) {
    std::vector<int> mask(static_cast<std::size_t>(n), 0);
    std::fill(mask.begin(), mask.begin() + k, 1);
    std::vector<std::vector<int>> subsets;
    do {
      std::vector<int> s;
      for (int i = 0; i < n; ++i) {
        if (mask[i]) s.push_back(i);
      }
      subsets.push_back(s);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    for (const auto& rows : subsets) {
      for (const auto& cols : subsets) {
        Matrix minor;
        for (int i : rows) {
          std::vector<Expr> row;
          for (int j : cols) row.push_back(g[i][j]);
          minor.push_back(std::move(row));
        }
        if (!is_zero(determinant(minor), o)) return k;
      }
    }
  }
  return 0;
}

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_top_level(const std::string& line) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : line) {
    if (ch == '(' || ch == '{') ++depth;
    if (ch == ')' || ch == '}') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto& part : split_top_level(s)) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

}  // namespace

NonHomOperator parse_operator(const std::string& text) {
  NonHomOperator c;
  bool have_variables = false;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  // Current section: 'g', 'o' (omega), 'b' or 0 for none.
  char section = 0;
  int b_index = 0;
  int row = 0;
  int section_line = 0;
  auto close_section = [&]() {
    if (section != 0 && row != c.n) {
      throw FormatError("matrix needs " + std::to_string(c.n) + " rows, found " + std::to_string(row), section_line);
    }
    section = 0;
  };
  auto entry = [&](const std::string& cell, int line) {
    try {
      return parse(cell, c.symbols);
    } catch (const ParseError& e) {
      throw FormatError(e.what(), line);
    } catch (const ExprError& e) {
      throw FormatError(e.what(), line);
    }
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto colon = line.find(':');
    bool header = colon != std::string::npos && line.find_first_of("(,") > colon;
    if (!header) {
      if (section == 0) throw FormatError("matrix row outside a section", line_no);
      if (row >= c.n) throw FormatError("too many rows", line_no);
      auto cells = split_top_level(line);
      if (static_cast<int>(cells.size()) != c.n) {
        throw FormatError("expected " + std::to_string(c.n) + " entries", line_no);
      }
      for (int j = 0; j < c.n; ++j) {
        Expr e = entry(cells[j], line_no);
        if (section == 'g') {
          c.g[row][j] = e;
        } else if (section == 'o') {
          c.omega[row][j] = e;
        } else {
          c.b[row][j][b_index] = e;
        }
      }
      ++row;
      continue;
    }
    close_section();
    std::string key = trim(line.substr(0, colon));
    std::string value = trim(line.substr(colon + 1));
    if (key == "components") {
      try {
        c.n = std::stoi(value);
      } catch (const std::exception&) {
        throw FormatError("bad component count '" + value + "'", line_no);
      }
      if (c.n < 1 || c.n > 9) throw FormatError("component count must be between 1 and 9", line_no);
      c.g = zero_matrix(c.n);
      c.b = zero_tensor(c.n);
      c.omega = zero_matrix(c.n);
    } else if (key == "direction") {
      if (value == "x") {
        c.dir = Direction::X;
      } else if (value == "t") {
        c.dir = Direction::T;
      } else {
        throw FormatError("direction must be x or t", line_no);
      }
    } else if (key == "variables") {
      c.symbols.variables = split_list(value);
      have_variables = true;
    } else if (key == "parameters") {
      for (auto& p : split_list(value)) c.symbols.params.insert(p);
    } else if (key == "radical") {
      auto eq = value.find('=');
      if (eq == std::string::npos) throw FormatError("radical needs 'name = radicand'", line_no);
      c.symbols.radicals[trim(value.substr(0, eq))] = normalize(entry(value.substr(eq + 1), line_no));
    } else {
      if (!value.empty()) throw FormatError("unknown header '" + key + "'", line_no);
      if (c.n < 1) throw FormatError("'components' must come before any matrix", line_no);
      if (key == "g") {
        section = 'g';
      } else if (key == "omega") {
        section = 'o';
      } else if (key.size() > 3 && key.compare(0, 2, "b[") == 0 && key.back() == ']') {
        try {
          b_index = std::stoi(key.substr(2, key.size() - 3)) - 1;
        } catch (const std::exception&) {
          throw FormatError("bad section '" + key + "'", line_no);
        }
        if (b_index < 0 || b_index >= c.n) throw FormatError("b index out of range", line_no);
        section = 'b';
      } else {
        throw FormatError("unknown section '" + key + "'", line_no);
      }
      row = 0;
      section_line = line_no;
    }
  }
  close_section();
  if (c.n < 1) throw FormatError("missing 'components' header", line_no);
  if (!have_variables) c.symbols.variables = SymbolTable{}.variables;
  try {
    c.validate();
  } catch (const ExprError& e) {
    throw FormatError(e.what(), line_no);
  }
  return c;
}

std::string format_operator(const NonHomOperator& c) {
  std::ostringstream out;
  const SymbolTable* names = &c.symbols;
  out << "components: " << c.n << "\n";
  out << "direction: " << direction_char(c.dir) << "\n";
  if (static_cast<int>(c.symbols.variables.size()) >= c.n) {
    out << "variables: ";
    for (int i = 0; i < c.n; ++i) out << (i ? ", " : "") << c.symbols.variables[i];
    out << "\n";
  }
  if (!c.symbols.params.empty()) {
    out << "parameters: ";
    bool first = true;
    for (const auto& p : c.symbols.params) {
      out << (first ? "" : ", ") << p;
      first = false;
    }
    out << "\n";
  }
  for (const auto& [name, rad] : c.symbols.radicals) out << "radical: " << name << " = " << to_string(rad) << "\n";
  auto emit = [&](const std::string& title, const std::function<Expr(int, int)>& at) {
    out << title << ":\n";
    for (int i = 0; i < c.n; ++i) {
      out << "  ";
      for (int j = 0; j < c.n; ++j) out << (j ? ", " : "") << to_string(normalize(at(i, j)), names);
      out << "\n";
    }
  };
  emit("g", [&](int i, int j) { return c.g[i][j]; });
  for (int k = 0; k < c.n; ++k) {
    bool any = false;
    for (int i = 0; i < c.n; ++i) {
      for (int j = 0; j < c.n; ++j) any = any || !normalize(c.b[i][j][k]).is_literal_zero();
    }
    if (any) emit("b[" + std::to_string(k + 1) + "]", [&](int i, int j) { return c.b[i][j][k]; });
  }
  emit("omega", [&](int i, int j) { return c.omega[i][j]; });
  return out.str();
}

}  // namespace hydroham
