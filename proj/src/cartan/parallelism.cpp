#include "cartalg/cartan.hpp"
#include "cartalg/errors.hpp"
#include "nondegenerate.hpp"

namespace cartalg {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

}  // namespace

ParallelismReport parallelism_report(const Parallelism& p, const ZeroTester& tester) {
  const Chart& chart = p.chart;
  require_same_chart(chart, tester.chart());
  const int n = chart.dim();
  if (p.model.dim() != n) throw ShapeError("model algebra dimension must equal the chart dimension");
  if (static_cast<int>(p.omega.size()) != n) throw ShapeError("omega must be N x N");
  for (const auto& row : p.omega) {
    if (static_cast<int>(row.size()) != n) throw ShapeError("omega must be N x N");
  }
  detail::require_nondegenerate(p.omega, tester, "omega");
  const ExprMat inv = inverse(p.omega);

  ParallelismReport out;
  out.curvature = TensorField(chart, {tm_lower(chart), tm_lower(chart), {Variance::Upper, SlotTag::Bundle, n}});
  TensorField tilde(chart, {tm_lower(chart), tm_lower(chart), tm_upper(chart)});
  std::vector<Component> tor;
  Coeffs gamma = zero_coeffs(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Expr s;
        for (int a = 0; a < n; ++a) {
          const Expr d = differentiate(p.omega[u(a)][u(j)], i);
          if (!d.is_zero_literal() && !inv[u(k)][u(a)].is_zero_literal()) s += inv[u(k)][u(a)] * d;
        }
        gamma[u(i)][u(j)][u(k)] = s;
      }
    }
  }
  out.d = TMConnection(chart, std::move(gamma), SlotTag::TM);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < n; ++a) {
        const Expr dw = differentiate(p.omega[u(a)][u(j)], i) - differentiate(p.omega[u(a)][u(i)], j);
        Expr s = dw;
        for (int b = 0; b < n; ++b) {
          for (int c = 0; c < n; ++c) {
            const Rational f = p.model.f(b, c, a);
            if (!f.is_zero()) s += Expr(f) * p.omega[u(b)][u(i)] * p.omega[u(c)][u(j)];
          }
        }
        out.curvature.at({i, j, a}) = s;
        if (i < j) {
          Expr t;
          for (int k = 0; k < n; ++k) t += p.omega[u(a)][u(k)] * (out.d.gamma(i, j, k) - out.d.gamma(j, i, k));
          tor.push_back({{i, j, a}, t - dw});
        }
      }
    }
  }
  out.curvature.declare({0, 1, true});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Expr s;
        for (int a = 0; a < n; ++a) {
          if (!inv[u(k)][u(a)].is_zero_literal()) s += inv[u(k)][u(a)] * out.curvature.at({i, j, a});
        }
        tilde.at({i, j, k}) = s;
      }
    }
  }
  Verdict d_flat = is_flat(out.d, tester);
  d_flat.name = "d_flat";
  const Verdict omega_zero = out.curvature.check_zero("omega_zero", tester);
  out.maurer_cartan = omega_zero.passed();
  out.verdict = Verdict::all_of("parallelism", {std::move(d_flat), check_zero("torsion_identity", tester, tor),
                                                tensor_cov_deriv(out.d, tilde).check_zero("theorem_c", tester)});
  if (out.maurer_cartan) out.verdict.detail = "curvature vanishes: the Maurer-Cartan equation holds";
  return out;
}

}  // namespace cartalg
