#include "cartalg/cartan.hpp"
#include "cartalg/errors.hpp"

namespace cartalg {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

}  // namespace

PoissonReport poisson_report(const TensorField& pi, const TMConnection& nabla, const ZeroTester& tester) {
  const Chart& chart = pi.chart();
  require_same_chart(chart, nabla.chart());
  if (nabla.target() != SlotTag::TM) throw PreconditionError("poisson_report: connection must act on TM");
  const int n = chart.dim();
  PoissonReport out;
  out.g = build_poisson_algebroid(pi, tester);
  Coeffs dual = zero_coeffs(n, n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) dual[u(i)][u(a)][u(b)] = -nabla.gamma(i, b, a);
    }
  }
  out.on_cotangent = TMConnection(chart, std::move(dual), SlotTag::Algebroid);
  const TMConnection& co = out.on_cotangent;
  std::vector<Verdict> subs;

  // Symmetric Christoffels, and independently d(dx^a)(d_i,d_j) = <nabla_i dx^a, d_j> - <nabla_j dx^a, d_i>.
  std::vector<Component> sym;
  std::vector<Component> p1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        sym.push_back({{i, j, k}, nabla.gamma(i, j, k) - nabla.gamma(j, i, k)});
        p1.push_back({{k, i, j}, co.gamma(i, k, j) - co.gamma(j, k, i)});
      }
    }
  }
  Verdict tf = Verdict::all_of("torsion_free", {check_zero("symmetric", tester, sym), check_zero("p1", tester, p1)});
  const bool torsion_free = tf.passed();
  subs.push_back(std::move(tf));

  const TensorField dpi = tensor_cov_deriv(nabla, pi);
  const TensorField ddpi = tensor_cov_deriv(nabla, dpi);
  const TensorField rc = curvature_tm(co);

  // curv(d_i, #dx^a) dx^b - curv(d_i, #dx^b) dx^a - (nabla_i nabla Pi)(dx^a, dx^b).
  std::vector<Component> sx;
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          Expr v = -ddpi.at({a, b, c, i});
          for (int j = 0; j < n; ++j) {
            if (!out.g.rho(j, a).is_zero_literal()) v += out.g.rho(j, a) * rc.at({i, j, b, c});
            if (!out.g.rho(j, b).is_zero_literal()) v -= out.g.rho(j, b) * rc.at({i, j, a, c});
          }
          sx.push_back({{i, a, b, c}, v});
        }
      }
    }
  }
  Verdict lemma = check_zero("lemma_sx", tester, sx);
  if (torsion_free && lemma.status != Status::Undecidable) {
    const Verdict cartan = check_cartan(out.g, co, tester);
    if (cartan.status != Status::Undecidable && cartan.passed() != lemma.passed()) {
      throw InternalConsistencyError("lemma sx and the compatibility check disagree");
    }
  }
  subs.push_back(std::move(lemma));
  subs.push_back(is_flat(nabla, tester));
  subs.back().name = "flat";
  subs.push_back(ddpi.check_zero("nabla_pi_parallel", tester));

  // [dx^a, dx^b] = nabla_{#dx^a} dx^b - nabla_{#dx^b} dx^a - nabla Pi(dx^a, dx^b), valid when torsion free.
  if (torsion_free) {
    std::vector<Component> p2;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        const Section lhs = bracket(out.g, out.g.e(a), out.g.e(b));
        for (int c = 0; c < n; ++c) {
          Expr v = lhs[c] + dpi.at({a, b, c});
          for (int k = 0; k < n; ++k) {
            if (!out.g.rho(k, a).is_zero_literal()) v -= out.g.rho(k, a) * co.gamma(k, b, c);
            if (!out.g.rho(k, b).is_zero_literal()) v += out.g.rho(k, b) * co.gamma(k, a, c);
          }
          p2.push_back({{a, b, c}, v});
        }
      }
    }
    subs.push_back(check_zero("p2_identity", tester, p2));
  } else {
    subs.push_back(Verdict::fail("p2_identity", "requires a torsion-free connection"));
  }
  out.verdict = Verdict::all_of("poisson", std::move(subs));
  return out;
}

}  // namespace cartalg
