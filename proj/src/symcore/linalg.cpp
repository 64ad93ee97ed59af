#include "cartalg/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>

#include "cartalg/errors.hpp"

namespace cartalg {

ExprMat zeros(std::size_t rows, std::size_t cols) { return ExprMat(rows, ExprVec(cols, Expr(0))); }

ExprMat identity(std::size_t n) {
  ExprMat m = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Expr(1);
  return m;
}

ExprMat matmul(const ExprMat& a, const ExprMat& b) {
  if (a.empty()) return {};
  if (a[0].size() != b.size()) throw ShapeError("matmul: inner dimensions differ");
  const std::size_t cols = b.empty() ? 0 : b[0].size();
  ExprMat out = zeros(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      Expr s;
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (a[i][k].is_zero_literal() || b[k][j].is_zero_literal()) continue;
        s += a[i][k] * b[k][j];
      }
      out[i][j] = s;
    }
  }
  return out;
}

ExprMat transpose(const ExprMat& a) {
  if (a.empty()) return {};
  ExprMat out = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) out[j][i] = a[i][j];
  }
  return out;
}

namespace {

void require_square(const ExprMat& m) {
  for (const auto& row : m) {
    if (row.size() != m.size()) throw ShapeError("matrix is not square");
  }
}

/// Laplace expansion along rows, memoized on the set of remaining columns.
Expr det_rows(const ExprMat& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  const std::size_t n = rows.size();
  if (n == 0) return Expr(1);
  std::map<std::uint64_t, Expr> memo;
  std::function<Expr(std::size_t, std::uint64_t)> rec = [&](std::size_t r, std::uint64_t used) -> Expr {
    if (r == n) return Expr(1);
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    Expr s;
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
      if ((used >> c) & 1U) continue;
      const Expr& a = m[rows[r]][cols[c]];
      if (!a.is_zero_literal()) {
        Expr term = a * rec(r + 1, used | (1ULL << c));
        s = sign > 0 ? s + term : s - term;
      }
      sign = -sign;
    }
    memo.emplace(used, s);
    return s;
  };
  return rec(0, 0);
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

Expr det(const ExprMat& m) {
  require_square(m);
  if (m.size() > 16) throw ShapeError("determinant too large");
  return det_rows(m, iota(m.size()), iota(m.size()));
}

ExprMat inverse(const ExprMat& m) {
  require_square(m);
  const std::size_t n = m.size();
  const Expr d = det(m);
  if (d.is_zero_literal()) throw PreconditionError("matrix is singular");
  const Expr inv_d = pow(d, -1);
  ExprMat out = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // (m^-1)_{ij} = (-1)^{i+j} M_{ji} / det
      std::vector<std::size_t> rows;
      std::vector<std::size_t> cols;
      for (std::size_t r = 0; r < n; ++r) {
        if (r != j) rows.push_back(r);
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (c != i) cols.push_back(c);
      }
      Expr minor = det_rows(m, rows, cols);
      if (minor.is_zero_literal()) continue;
      out[i][j] = ((i + j) % 2 == 0 ? minor : -minor) * inv_d;
    }
  }
  return out;
}

std::vector<std::vector<double>> eval(const ExprMat& m, std::span<const double> p) {
  std::vector<std::vector<double>> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (const auto& e : m[i]) out[i].push_back(eval(e, p));
  }
  return out;
}

int numeric_rank(const std::vector<std::vector<double>>& m, double threshold) {
  if (m.empty() || m[0].empty()) return 0;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m[0].size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
    }
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  int rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    if (svd.singularValues()(k) > threshold) ++rank;
  }
  return rank;
}

SpanSolution solve_in_span(const std::vector<ExprVec>& columns, const ExprVec& rhs, const ZeroTester& tester) {
  const std::size_t k = columns.size();
  const std::size_t m = rhs.size();
  for (const auto& c : columns) {
    if (c.size() != m) throw ShapeError("solve_in_span: column length differs from rhs");
  }
  SpanSolution sol;
  if (k == 0) {
    sol.coefficients = {};
    for (std::size_t r = 0; r < m; ++r) {
      ZeroResult z = tester.test(rhs[r]);
      if (!z.zero) {
        sol.failing_row = static_cast<int>(r);
        sol.residual = z;
        return sol;
      }
    }
    sol.ok = true;
    return sol;
  }
  // Pick a well-conditioned set of rows at the first usable sample point.
  Eigen::MatrixXd at(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
  bool have_point = false;
  for (const auto& p : tester.points()) {
    std::vector<std::vector<double>> num(m, std::vector<double>(k));
    try {
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < k; ++c) num[r][c] = eval(columns[c][r], p);
      }
    } catch (const DomainError&) {
      continue;
    }
    if (numeric_rank(num) < static_cast<int>(k)) {
      std::string where;
      for (double x : p) where += (where.empty() ? "" : ", ") + std::to_string(x);
      throw PreconditionError("frame degenerate at point (" + where + ")");
    }
    if (!have_point) {
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
          at(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = num[r][c];
        }
      }
      have_point = true;
    }
  }
  if (!have_point) throw UndecidableError("solve_in_span: no sample point where the frame evaluates");
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at);
  std::vector<std::size_t> rows;
  for (std::size_t c = 0; c < k; ++c) {
    rows.push_back(static_cast<std::size_t>(qr.colsPermutation().indices()(static_cast<Eigen::Index>(c))));
  }
  ExprMat a = zeros(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = columns[j][rows[i]];
  }
  const Expr d = det(a);
  const Expr inv_d = pow(d, -1);
  sol.coefficients.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    ExprMat aj = a;
    for (std::size_t i = 0; i < k; ++i) aj[i][j] = rhs[rows[i]];
    sol.coefficients[j] = det(aj) * inv_d;
  }
  BatchEvaluator cache = tester.evaluator();
  for (std::size_t r = 0; r < m; ++r) {
    Expr res = -rhs[r];
    for (std::size_t j = 0; j < k; ++j) {
      if (!columns[j][r].is_zero_literal()) res += columns[j][r] * sol.coefficients[j];
    }
    ZeroResult z = tester.test(res, cache);
    if (!z.zero) {
      sol.failing_row = static_cast<int>(r);
      sol.residual = z;
      return sol;
    }
  }
  sol.ok = true;
  return sol;
}

}  // namespace cartalg
