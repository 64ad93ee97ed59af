#include "cartalg/algebroid.hpp"

#include <algorithm>

#include "cartalg/errors.hpp"

namespace cartalg {

namespace {

using Table = std::vector<std::vector<std::vector<Rational>>>;

Table zero_table(int n) {
  const auto un = static_cast<std::size_t>(n);
  return Table(un, std::vector<std::vector<Rational>>(un, std::vector<Rational>(un, Rational(0))));
}

std::size_t u(int i) { return static_cast<std::size_t>(i); }

}  // namespace

LieAlgebra::LieAlgebra(Table f) : f_(std::move(f)) {
  const int n = dim();
  for (const auto& row : f_) {
    if (static_cast<int>(row.size()) != n) throw ShapeError("structure constants must be dim x dim x dim");
    for (const auto& col : row) {
      if (static_cast<int>(col.size()) != n) throw ShapeError("structure constants must be dim x dim x dim");
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (this->f(a, b, c) + this->f(b, a, c) != Rational(0)) {
          throw PreconditionError("structure constants not antisymmetric in (" + std::to_string(a) + "," +
                                  std::to_string(b) + ")");
        }
      }
    }
  }
  // Jacobi: f^e_{ad} f^d_{bc} + f^e_{bd} f^d_{ca} + f^e_{cd} f^d_{ab} = 0.
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        for (int e = 0; e < n; ++e) {
          Rational s(0);
          for (int d = 0; d < n; ++d) {
            s += this->f(a, d, e) * this->f(b, c, d) + this->f(b, d, e) * this->f(c, a, d) +
                 this->f(c, d, e) * this->f(a, b, d);
          }
          if (!s.is_zero()) {
            throw PreconditionError("structure constants violate Jacobi for (" + std::to_string(a) + "," +
                                    std::to_string(b) + "," + std::to_string(c) + ")");
          }
        }
      }
    }
  }
}

LieAlgebra LieAlgebra::abelian(int dim) { return LieAlgebra(zero_table(dim)); }

LieAlgebra LieAlgebra::so3() {
  Table f = zero_table(3);
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    f[u(a)][u(b)][u(c)] = 1;
    f[u(b)][u(a)][u(c)] = -1;
  }
  return LieAlgebra(std::move(f));
}

LieAlgebra LieAlgebra::affine_line() {
  Table f = zero_table(2);
  f[0][1][1] = 1;
  f[1][0][1] = -1;
  return LieAlgebra(std::move(f));
}

const char* to_string(Origin o) {
  switch (o) {
    case Origin::Direct: return "direct";
    case Origin::Tangent: return "tangent";
    case Origin::Action: return "action";
    case Origin::Poisson: return "poisson";
    case Origin::Foliation: return "foliation";
  }
  return "?";
}

Algebroid::Algebroid(Chart chart, ExprMat anchor, std::vector<std::vector<ExprVec>> structure, Origin origin)
    : chart_(std::move(chart)), anchor_(std::move(anchor)), structure_(std::move(structure)), origin_(origin) {
  if (static_cast<int>(anchor_.size()) != chart_.dim()) throw ShapeError("anchor must have one row per coordinate");
  rank_ = static_cast<int>(structure_.size());
  for (auto& row : anchor_) {
    if (static_cast<int>(row.size()) != rank_) throw ShapeError("anchor row length differs from the rank");
    for (auto& e : row) e = canon(e);
  }
  for (auto& m : structure_) {
    if (static_cast<int>(m.size()) != rank_) throw ShapeError("structure functions must be rank^3");
    for (auto& v : m) {
      if (static_cast<int>(v.size()) != rank_) throw ShapeError("structure functions must be rank^3");
      for (auto& e : v) e = canon(e);
    }
  }
}

Algebroid Algebroid::tangent(const Chart& chart) {
  const auto n = u(chart.dim());
  std::vector<std::vector<ExprVec>> c(n, std::vector<ExprVec>(n, ExprVec(n, Expr(0))));
  return {chart, identity(n), std::move(c), Origin::Tangent};
}

Section Algebroid::anchor_column(int a) const {
  Section s = Section::zero(chart_, Frame::Tangent, chart_.dim());
  for (int i = 0; i < chart_.dim(); ++i) s.comps[u(i)] = rho(i, a);
  return s;
}

Algebroid Algebroid::with_origin(Origin o) const {
  Algebroid g = *this;
  g.origin_ = o;
  return g;
}

namespace {

void require_section(const Algebroid& g, const Section& x) {
  require_same_chart(g.chart(), x.chart);
  if (x.rank() != g.rank()) throw ShapeError("section rank differs from algebroid rank");
}

}  // namespace

Expr anchor_derivative(const Algebroid& g, const Section& x, const Expr& f) {
  require_section(g, x);
  return directional(anchor_apply(g, x), f);
}

Section anchor_apply(const Algebroid& g, const Section& x) {
  require_section(g, x);
  Section v = Section::zero(g.chart(), Frame::Tangent, g.dim());
  for (int i = 0; i < g.dim(); ++i) {
    Expr s;
    for (int a = 0; a < g.rank(); ++a) {
      if (!g.rho(i, a).is_zero_literal() && !x[a].is_zero_literal()) s += g.rho(i, a) * x[a];
    }
    v.comps[u(i)] = s;
  }
  return v;
}

Section bracket(const Algebroid& g, const Section& x, const Section& y) {
  require_section(g, x);
  require_section(g, y);
  const Section vx = anchor_apply(g, x);
  const Section vy = anchor_apply(g, y);
  Section out = g.zero_section();
  for (int c = 0; c < g.rank(); ++c) {
    Expr s = directional(vx, y[c]) - directional(vy, x[c]);
    for (int a = 0; a < g.rank(); ++a) {
      if (x[a].is_zero_literal()) continue;
      for (int b = 0; b < g.rank(); ++b) {
        if (y[b].is_zero_literal() || g.c(a, b, c).is_zero_literal()) continue;
        s += g.c(a, b, c) * x[a] * y[b];
      }
    }
    out.comps[u(c)] = s;
  }
  return out;
}

Verdict validate(const Algebroid& g, const ZeroTester& tester) {
  const int r = g.rank();
  const int n = g.dim();
  std::vector<Component> leibniz;
  std::vector<Component> anti;
  std::vector<Component> jacobi;
  std::vector<Component> hom;
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      // [e_a, f e_b] - f [e_a, e_b] - (#e_a f) e_b with f each coordinate.
      for (int i = 0; i < n; ++i) {
        const Expr f = g.chart().coord(i);
        const Section lhs = bracket(g, g.e(a), f * g.e(b));
        const Section rhs = f * bracket(g, g.e(a), g.e(b));
        const Expr df = anchor_derivative(g, g.e(a), f);
        for (int c = 0; c < r; ++c) {
          leibniz.push_back({{a, b, i, c}, lhs[c] - rhs[c] - (c == b ? df : Expr(0))});
        }
      }
      if (a <= b) {
        for (int c = 0; c < r; ++c) anti.push_back({{a, b, c}, g.c(a, b, c) + g.c(b, a, c)});
      }
      // rho^j_c c^c_{ab} - rho^i_a d_i rho^j_b + rho^i_b d_i rho^j_a
      const Section va = g.anchor_column(a);
      const Section vb = g.anchor_column(b);
      for (int j = 0; j < n; ++j) {
        Expr s = directional(vb, g.rho(j, a)) - directional(va, g.rho(j, b));
        for (int c = 0; c < r; ++c) {
          if (!g.c(a, b, c).is_zero_literal()) s += g.rho(j, c) * g.c(a, b, c);
        }
        hom.push_back({{a, b, j}, s});
      }
    }
  }
  for (int a = 0; a < r; ++a) {
    for (int b = a + 1; b < r; ++b) {
      for (int c = b + 1; c < r; ++c) {
        const Section s = bracket(g, bracket(g, g.e(a), g.e(b)), g.e(c)) +
                          bracket(g, bracket(g, g.e(b), g.e(c)), g.e(a)) +
                          bracket(g, bracket(g, g.e(c), g.e(a)), g.e(b));
        for (int d = 0; d < r; ++d) jacobi.push_back({{a, b, c, d}, s[d]});
      }
    }
  }
  std::vector<Verdict> subs;
  subs.push_back(check_zero("leibniz", tester, leibniz));
  subs.push_back(check_zero("antisymmetry", tester, anti));
  subs.push_back(check_zero("jacobi", tester, jacobi));
  subs.push_back(check_zero("anchor_hom", tester, hom));
  return Verdict::all_of("algebroid_axioms", std::move(subs));
}

Algebroid build_action_algebroid(const LieAlgebra& alg, const std::vector<Section>& fields, const ZeroTester& tester) {
  const int r = alg.dim();
  if (static_cast<int>(fields.size()) != r) throw ShapeError("need one action field per Lie algebra basis element");
  const Chart& chart = tester.chart();
  const int n = chart.dim();
  for (const auto& v : fields) {
    require_same_chart(chart, v.chart);
    if (v.rank() != n || v.frame != Frame::Tangent) throw ShapeError("action fields must be vector fields");
  }
  for (int a = 0; a < r; ++a) {
    for (int b = a + 1; b < r; ++b) {
      Section defect = vf_bracket(fields[u(a)], fields[u(b)]);
      for (int c = 0; c < r; ++c) {
        if (!alg.f(a, b, c).is_zero()) defect = defect - Expr(alg.f(a, b, c)) * fields[u(c)];
      }
      for (int i = 0; i < n; ++i) {
        const ZeroResult z = tester.test(defect[i]);
        if (!z.zero) throw WitnessError("not an infinitesimal action: pair (a,b) bracket defect", {a, b, i}, z.witness, z.value);
      }
    }
  }
  ExprMat anchor = zeros(u(n), u(r));
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < r; ++a) anchor[u(i)][u(a)] = fields[u(a)][i];
  }
  std::vector<std::vector<ExprVec>> c(u(r), std::vector<ExprVec>(u(r), ExprVec(u(r))));
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      for (int d = 0; d < r; ++d) c[u(a)][u(b)][u(d)] = Expr(alg.f(a, b, d));
    }
  }
  return {chart, std::move(anchor), std::move(c), Origin::Action};
}

Algebroid build_poisson_algebroid(const TensorField& pi, const ZeroTester& tester) {
  const Chart& chart = pi.chart();
  const int n = chart.dim();
  if (pi.order() != 2 || pi.slots()[0] != tm_upper(chart) || pi.slots()[1] != tm_upper(chart)) {
    throw ShapeError("Poisson tensor must be a (2,0) tensor on TM");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const ZeroResult z = tester.test(pi.at({i, j}) + pi.at({j, i}));
      if (!z.zero) throw WitnessError("Poisson tensor not antisymmetric", {i, j}, z.witness, z.value);
    }
  }
  // Schouten condition: cyclic sum over (i,j,k) of pi^{il} d_l pi^{jk}.
  const auto term = [&](int i, int j, int k) {
    Expr s;
    for (int l = 0; l < n; ++l) {
      if (!pi.at({i, l}).is_zero_literal()) s += pi.at({i, l}) * differentiate(pi.at({j, k}), l);
    }
    return s;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const ZeroResult z = tester.test(term(i, j, k) + term(j, k, i) + term(k, i, j));
        if (!z.zero) throw WitnessError("Poisson tensor not Poisson: Jacobi defect for (i,j,k)", {i, j, k}, z.witness, z.value);
      }
    }
  }
  ExprMat anchor = zeros(u(n), u(n));
  std::vector<std::vector<ExprVec>> c(u(n), std::vector<ExprVec>(u(n), ExprVec(u(n))));
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < n; ++a) anchor[u(i)][u(a)] = pi.at({i, a});
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int k = 0; k < n; ++k) c[u(a)][u(b)][u(k)] = differentiate(pi.at({b, a}), k);
    }
  }
  return {chart, std::move(anchor), std::move(c), Origin::Poisson};
}

Algebroid build_foliation_algebroid(const std::vector<Section>& frame, const ZeroTester& tester) {
  const Chart& chart = tester.chart();
  const int n = chart.dim();
  const int k = static_cast<int>(frame.size());
  std::vector<ExprVec> cols;
  for (const auto& v : frame) {
    require_same_chart(chart, v.chart);
    if (v.rank() != n || v.frame != Frame::Tangent) throw ShapeError("foliation frame must consist of vector fields");
    cols.push_back(v.comps);
  }
  std::vector<std::vector<ExprVec>> c(u(k), std::vector<ExprVec>(u(k), ExprVec(u(k))));
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const Section br = vf_bracket(frame[u(a)], frame[u(b)]);
      const SpanSolution sol = solve_in_span(cols, br.comps, tester);
      if (!sol.ok) {
        throw WitnessError("not integrable: brackets do not close for pair (a,b), residual component",
                           {a, b, sol.failing_row}, sol.residual.witness, sol.residual.value);
      }
      for (int d = 0; d < k; ++d) {
        c[u(a)][u(b)][u(d)] = sol.coefficients[u(d)];
        c[u(b)][u(a)][u(d)] = -sol.coefficients[u(d)];
      }
    }
  }
  ExprMat anchor = zeros(u(n), u(k));
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < k; ++a) anchor[u(i)][u(a)] = frame[u(a)][i];
  }
  return {chart, std::move(anchor), std::move(c), Origin::Foliation};
}

Algebroid reframe(const Algebroid& g, const ExprMat& p) {
  const int r = g.rank();
  if (static_cast<int>(p.size()) != r) throw ShapeError("frame change must be rank x rank");
  const ExprMat pinv = inverse(p);
  std::vector<Section> cols;
  for (int a = 0; a < r; ++a) {
    Section s = g.zero_section();
    for (int b = 0; b < r; ++b) s.comps[u(b)] = p[u(b)][u(a)];
    cols.push_back(std::move(s));
  }
  ExprMat anchor = zeros(u(g.dim()), u(r));
  for (int i = 0; i < g.dim(); ++i) {
    for (int a = 0; a < r; ++a) {
      Expr s;
      for (int b = 0; b < r; ++b) s += g.rho(i, b) * p[u(b)][u(a)];
      anchor[u(i)][u(a)] = s;
    }
  }
  std::vector<std::vector<ExprVec>> c(u(r), std::vector<ExprVec>(u(r), ExprVec(u(r))));
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      const Section v = bracket(g, cols[u(a)], cols[u(b)]);
      for (int d = 0; d < r; ++d) {
        Expr s;
        for (int e = 0; e < r; ++e) {
          if (!pinv[u(d)][u(e)].is_zero_literal()) s += pinv[u(d)][u(e)] * v[e];
        }
        c[u(a)][u(b)][u(d)] = s;
      }
    }
  }
  return {g.chart(), std::move(anchor), std::move(c), g.origin()};
}

int orbit_rank(const Algebroid& g, std::span<const double> p) { return numeric_rank(eval(g.anchor(), p)); }

OrbitInfo orbit_info(const Algebroid& g, const ZeroTester& tester) {
  OrbitInfo info;
  info.min_rank = g.dim() + 1;
  bool any = false;
  for (const auto& p : tester.points()) {
    int r = 0;
    try {
      r = orbit_rank(g, p);
    } catch (const DomainError&) {
      continue;
    }
    any = true;
    info.min_rank = std::min(info.min_rank, r);
    info.max_rank = std::max(info.max_rank, r);
  }
  if (!any) throw UndecidableError("anchor cannot be evaluated anywhere on the box");
  info.transitive = info.min_rank == g.dim();
  info.regular = info.min_rank == info.max_rank;
  return info;
}

}  // namespace cartalg
