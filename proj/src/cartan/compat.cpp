#include <algorithm>

#include "cartalg/cartan.hpp"
#include "cartalg/errors.hpp"

namespace cartalg {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

void require_on_g(const Algebroid& g, const TMConnection& nabla) {
  require_same_chart(g.chart(), nabla.chart());
  if (nabla.rank() != g.rank() || nabla.target() != SlotTag::Algebroid) {
    throw PreconditionError("connection target must be the algebroid");
  }
}

Section tangent_basis(const Chart& c, int i) { return Section::basis(c, Frame::Tangent, c.dim(), i); }

std::vector<Component> compat_components(const Algebroid& g, const TMConnection& nabla) {
  const GConnection bar = induced_rep_on_tm(g, nabla);
  std::vector<Component> out;
  for (int i = 0; i < g.dim(); ++i) {
    const Section v = tangent_basis(g.chart(), i);
    for (int a = 0; a < g.rank(); ++a) {
      for (int b = a + 1; b < g.rank(); ++b) {
        const Section x = g.e(a);
        const Section y = g.e(b);
        const Section c = cov_deriv_tm(nabla, v, bracket(g, x, y)) - bracket(g, cov_deriv_tm(nabla, v, x), y) -
                          bracket(g, x, cov_deriv_tm(nabla, v, y)) - cov_deriv_tm(nabla, cov_deriv_g(bar, y, v), x) +
                          cov_deriv_tm(nabla, cov_deriv_g(bar, x, v), y);
        for (int k = 0; k < g.rank(); ++k) out.push_back({{i, a, b, k}, c[k]});
      }
    }
  }
  return out;
}

std::vector<Component> splitting_components(const Algebroid& g, const TMConnection& nabla) {
  std::vector<Component> out;
  for (int a = 0; a < g.rank(); ++a) {
    for (int b = a + 1; b < g.rank(); ++b) {
      const ExprMat k = splitting_curvature(g, nabla, g.e(a), g.e(b));
      for (int i = 0; i < g.dim(); ++i) {
        for (int c = 0; c < g.rank(); ++c) out.push_back({{i, a, b, c}, k[u(i)][u(c)]});
      }
    }
  }
  // Components are produced in a different loop order; sort to match compat_components.
  std::sort(out.begin(), out.end(), [](const Component& l, const Component& r) { return l.indices < r.indices; });
  return out;
}

}  // namespace

Section compat_defect(const Algebroid& g, const TMConnection& nabla, const Section& v, const Section& x,
                      const Section& y) {
  require_on_g(g, nabla);
  const GConnection bar = induced_rep_on_tm(g, nabla);
  return cov_deriv_tm(nabla, v, bracket(g, x, y)) - bracket(g, cov_deriv_tm(nabla, v, x), y) -
         bracket(g, x, cov_deriv_tm(nabla, v, y)) - cov_deriv_tm(nabla, cov_deriv_g(bar, y, v), x) +
         cov_deriv_tm(nabla, cov_deriv_g(bar, x, v), y);
}

Verdict check_cartan(const Algebroid& g, const TMConnection& nabla, const ZeroTester& tester) {
  require_on_g(g, nabla);
  Verdict compat = check_zero("compat", tester, compat_components(g, nabla));
  Verdict split = check_zero("splitting", tester, splitting_components(g, nabla));
  if (compat.status != Status::Undecidable && split.status != Status::Undecidable && compat.status != split.status) {
    throw InternalConsistencyError(std::string("compat defect and splitting curvature disagree: compat ") +
                                   to_string(compat.status) + ", splitting " + to_string(split.status));
  }
  return Verdict::all_of("cartan", {std::move(compat), std::move(split)});
}

Verdict oracle_agreement(const Algebroid& g, const TMConnection& nabla, const ZeroTester& tester) {
  require_on_g(g, nabla);
  const std::vector<Component> a = compat_components(g, nabla);
  const std::vector<Component> b = splitting_components(g, nabla);
  std::vector<Component> diff;
  for (std::size_t k = 0; k < a.size(); ++k) diff.push_back({a[k].indices, a[k].value - b[k].value});
  return check_zero("oracle_agreement", tester, diff);
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::LocallySymmetric: return "locally_symmetric";
    case Classification::Curved: return "curved";
    case Classification::NotCartan: return "not_cartan";
  }
  return "?";
}

TheoremA theorem_a(const Algebroid& g, const TMConnection& nabla, const ZeroTester& tester) {
  TheoremA out;
  std::vector<Verdict> subs;
  subs.push_back(check_cartan(g, nabla, tester));
  if (!subs.back().passed()) {
    out.classification = Classification::NotCartan;
    out.verdict = Verdict::all_of("theorem_a", std::move(subs));
    return out;
  }
  subs.push_back(is_flat(nabla, tester));
  out.classification = subs.back().passed() ? Classification::LocallySymmetric : Classification::Curved;
  if (out.classification == Classification::LocallySymmetric && g.origin() == Origin::Action) {
    std::vector<Component> comps;
    for (int i = 0; i < g.dim(); ++i) {
      for (int a = 0; a < g.rank(); ++a) {
        const Section d = cov_deriv_tm(nabla, tangent_basis(g.chart(), i), g.e(a));
        for (int b = 0; b < g.rank(); ++b) comps.push_back({{i, a, b}, d[b]});
      }
    }
    subs.push_back(check_zero("constant_sections_parallel", tester, comps));
  }
  out.verdict = Verdict::all_of("theorem_a", std::move(subs));
  out.verdict.detail = to_string(out.classification);
  return out;
}

Verdict transitive_symmetry_check(const Algebroid& g, const TMConnection& nabla, const ZeroTester& tester) {
  require_on_g(g, nabla);
  const OrbitInfo info = orbit_info(g, tester);
  if (!info.transitive) throw PreconditionError("transitive_symmetry_check: algebroid is not transitive on the box");
  const GConnection bar = induced_rep_on_g(g, nabla);
  const TensorField dt = gtensor_cov_deriv(g, &bar, nullptr, torsion_g(bar));
  return dt.check_zero("torsion_parallel", tester);
}

namespace {

TensorField bar_torsion_derivative(const Algebroid& g, const TMConnection& nabla) {
  const GConnection bar = induced_rep_on_g(g, nabla);
  return gtensor_cov_deriv(g, &bar, nullptr, torsion_g(bar));
}

}  // namespace

Verdict abba_identity(const Algebroid& g, const TMConnection& nabla, const ZeroTester& tester) {
  require_on_g(g, nabla);
  const TensorField r = curvature_tm(nabla);
  const TensorField dt = bar_torsion_derivative(g, nabla);
  const int n = g.dim();
  const int m = g.rank();
  std::vector<Component> comps;
  for (int x = 0; x < m; ++x) {
    for (int y = x + 1; y < m; ++y) {
      for (int z = 0; z < m; ++z) {
        for (int b = 0; b < m; ++b) {
          Expr lhs;
          for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
              if (g.rho(i, x).is_zero_literal() || g.rho(j, y).is_zero_literal()) continue;
              lhs += g.rho(i, x) * g.rho(j, y) * r.at({i, j, z, b});
            }
          }
          comps.push_back({{x, y, z, b}, lhs - dt.at({x, y, b, z})});
        }
      }
    }
  }
  return check_zero("abba", tester, comps);
}

Verdict hodge_identity(const Algebroid& g, const TMConnection& nabla, const ExprMat& t, const ZeroTester& tester) {
  require_on_g(g, nabla);
  const int n = g.dim();
  const int m = g.rank();
  if (static_cast<int>(t.size()) != m || static_cast<int>(t[0].size()) != n) throw ShapeError("splitting must be rank x dim");
  const TensorField r = curvature_tm(nabla);
  const TensorField dt = bar_torsion_derivative(g, nabla);
  std::vector<Component> comps;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int z = 0; z < m; ++z) {
        for (int b = 0; b < m; ++b) {
          Expr rhs;
          for (int x = 0; x < m; ++x) {
            for (int y = 0; y < m; ++y) {
              if (t[u(x)][u(i)].is_zero_literal() || t[u(y)][u(j)].is_zero_literal()) continue;
              rhs += t[u(x)][u(i)] * t[u(y)][u(j)] * dt.at({x, y, b, z});
            }
          }
          comps.push_back({{i, j, z, b}, r.at({i, j, z, b}) - rhs});
        }
      }
    }
  }
  return check_zero("hodge", tester, comps);
}

TMConnection connection_from_rep(const Algebroid& g, const ExprMat& t, const GConnection& rep) {
  if (rep.target() != SlotTag::Algebroid) throw PreconditionError("connection_from_rep: representation must act on g");
  const int n = g.dim();
  const int m = g.rank();
  if (static_cast<int>(t.size()) != m || static_cast<int>(t[0].size()) != n) throw ShapeError("splitting must be rank x dim");
  // D_{e_a}(t^c_i e_c) + [t^c_i e_c, e_a]: the derivatives of t cancel.
  Coeffs gamma = zero_coeffs(n, m);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        Expr s;
        for (int c = 0; c < m; ++c) {
          if (t[u(c)][u(i)].is_zero_literal()) continue;
          s += t[u(c)][u(i)] * (rep.A(a, c, b) + g.c(c, a, b));
        }
        gamma[u(i)][u(a)][u(b)] = s;
      }
    }
  }
  return {g.chart(), std::move(gamma), SlotTag::Algebroid};
}

ReductiveResult reductive_connection(const Algebroid& g, const ExprMat& t, const GConnection& on_tm,
                                     const ZeroTester& tester) {
  const int n = g.dim();
  const int m = g.rank();
  if (static_cast<int>(t.size()) != m || static_cast<int>(t[0].size()) != n) throw ShapeError("splitting must be rank x dim");
  if (on_tm.target() != SlotTag::TM) throw PreconditionError("reductive_connection: representation must act on TM");
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      Expr s;
      for (int b = 0; b < m; ++b) {
        if (!g.rho(k, b).is_zero_literal() && !t[u(b)][u(i)].is_zero_literal()) s += g.rho(k, b) * t[u(b)][u(i)];
      }
      const ZeroResult z = tester.test(s - Expr(k == i ? 1 : 0));
      if (!z.zero) throw WitnessError("splitting does not satisfy # t = id", {k, i}, z.witness, z.value);
    }
  }
  const Verdict flat = is_flat(on_tm, tester);
  if (!flat.passed()) {
    if (flat.witness) {
      throw WitnessError("representation on TM is not flat", flat.witness->indices, flat.witness->point,
                         flat.witness->value);
    }
    throw PreconditionError("representation on TM is not flat: " + flat.detail);
  }
  Coeffs gamma = zero_coeffs(n, m);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < m; ++a) {
      const Section va = g.anchor_column(a);
      for (int b = 0; b < m; ++b) {
        Expr s = -directional(va, t[u(b)][u(i)]);
        for (int k = 0; k < n; ++k) {
          if (!on_tm.A(a, i, k).is_zero_literal() && !t[u(b)][u(k)].is_zero_literal()) s += on_tm.A(a, i, k) * t[u(b)][u(k)];
        }
        for (int c = 0; c < m; ++c) {
          if (!t[u(c)][u(i)].is_zero_literal() && !g.c(c, a, b).is_zero_literal()) s += t[u(c)][u(i)] * g.c(c, a, b);
        }
        gamma[u(i)][u(a)][u(b)] = s;
      }
    }
  }
  ReductiveResult out{TMConnection(g.chart(), std::move(gamma), SlotTag::Algebroid), {}};
  std::vector<Component> rep;
  const GConnection recovered = induced_rep_on_tm(g, out.nabla);
  for (int a = 0; a < m; ++a) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) rep.push_back({{a, j, k}, recovered.A(a, j, k) - on_tm.A(a, j, k)});
    }
  }
  out.post = Verdict::all_of("reductive", {check_cartan(g, out.nabla, tester), check_zero("rep_recovered", tester, rep)});
  return out;
}

}  // namespace cartalg
