#pragma once

#include <optional>
#include <vector>

#include "cartalg/expr.hpp"
#include "cartalg/zero_test.hpp"

namespace cartalg {

using ExprVec = std::vector<Expr>;
/// Row-major square or rectangular matrix of expressions.
using ExprMat = std::vector<ExprVec>;

[[nodiscard]] ExprMat zeros(std::size_t rows, std::size_t cols);
[[nodiscard]] ExprMat identity(std::size_t n);
[[nodiscard]] ExprMat matmul(const ExprMat& a, const ExprMat& b);
[[nodiscard]] ExprMat transpose(const ExprMat& a);

[[nodiscard]] Expr det(const ExprMat& m);
/// Adjugate over determinant; the caller checks invertibility on the box.
[[nodiscard]] ExprMat inverse(const ExprMat& m);

/// Numeric matrix value at a point.
[[nodiscard]] std::vector<std::vector<double>> eval(const ExprMat& m, std::span<const double> p);

/// Numeric rank of a matrix of doubles (singular values above `threshold`).
[[nodiscard]] int numeric_rank(const std::vector<std::vector<double>>& m, double threshold = 1e-9);

struct SpanSolution {
  bool ok = false;
  ExprVec coefficients;
  /// On failure: the residual row and its zero-test result.
  int failing_row = -1;
  ZeroResult residual;
};

/// Expresses `rhs` as a combination of `columns` with function coefficients.
/// Throws PreconditionError if the columns are degenerate at a sample point.
[[nodiscard]] SpanSolution solve_in_span(const std::vector<ExprVec>& columns, const ExprVec& rhs,
                                         const ZeroTester& tester);

}  // namespace cartalg
