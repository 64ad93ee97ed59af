#include "cartalg/jet.hpp"

#include "cartalg/errors.hpp"

namespace cartalg {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

void require_correction(const Algebroid& g, const ExprMat& phi) {
  if (static_cast<int>(phi.size()) != g.dim()) throw ShapeError("jet correction must have one row per coordinate");
  for (const auto& row : phi) {
    if (static_cast<int>(row.size()) != g.rank()) throw ShapeError("jet correction row length differs from the rank");
  }
}

void require_jet(const Algebroid& g, const JetSection& j) {
  require_same_chart(g.chart(), j.base.chart);
  if (j.base.rank() != g.rank()) throw ShapeError("jet base rank differs from algebroid rank");
  require_correction(g, j.correction);
}

/// phi(d_i) as a section.
Section column(const Algebroid& g, const ExprMat& phi, int i) {
  Section s = g.zero_section();
  s.comps = phi[u(i)];
  return s;
}

ExprMat combine(const ExprMat& a, const ExprMat& b, int sign) {
  ExprMat out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < out[i].size(); ++k) out[i][k] = sign > 0 ? a[i][k] + b[i][k] : a[i][k] - b[i][k];
  }
  return out;
}

/// (phi2 # phi1)^b_i = phi2^b_k rho^k_a phi1^a_i.
ExprMat compose(const Algebroid& g, const ExprMat& phi2, const ExprMat& phi1) {
  const int n = g.dim();
  const int r = g.rank();
  ExprMat out = zeros(u(n), u(r));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      Expr v;
      for (int a = 0; a < r; ++a) {
        if (!g.rho(k, a).is_zero_literal() && !phi1[u(i)][u(a)].is_zero_literal()) v += g.rho(k, a) * phi1[u(i)][u(a)];
      }
      if (v.is_zero_literal()) continue;
      for (int b = 0; b < r; ++b) {
        if (!phi2[u(k)][u(b)].is_zero_literal()) out[u(i)][u(b)] += phi2[u(k)][u(b)] * v;
      }
    }
  }
  return out;
}

}  // namespace

JetSection jet_zero(const Algebroid& g) { return {g.zero_section(), zeros(u(g.dim()), u(g.rank()))}; }

JetSection prolong(const Algebroid& g, const Section& x) {
  JetSection j{x, zeros(u(g.dim()), u(g.rank()))};
  require_jet(g, j);
  return j;
}

JetSection operator+(const JetSection& a, const JetSection& b) {
  if (a.correction.size() != b.correction.size()) throw ShapeError("jet sections of different shape");
  return {a.base + b.base, combine(a.correction, b.correction, 1)};
}

JetSection operator-(const JetSection& a, const JetSection& b) {
  if (a.correction.size() != b.correction.size()) throw ShapeError("jet sections of different shape");
  return {a.base - b.base, combine(a.correction, b.correction, -1)};
}

JetSection scale(const Expr& f, const JetSection& j) {
  JetSection out{f * j.base, j.correction};
  for (std::size_t i = 0; i < out.correction.size(); ++i) {
    const Expr df = differentiate(f, static_cast<int>(i));
    for (std::size_t b = 0; b < out.correction[i].size(); ++b) {
      out.correction[i][b] = f * j.correction[i][b] - df * j.base.comps[b];
    }
  }
  return out;
}

ExprMat kappa(const Algebroid& g, const Section& x, const ExprMat& phi) {
  require_correction(g, phi);
  if (x.rank() != g.rank()) throw ShapeError("kappa: section rank differs from algebroid rank");
  const int n = g.dim();
  const Section vx = anchor_apply(g, x);
  ExprMat out = zeros(u(n), u(g.rank()));
  for (int i = 0; i < n; ++i) {
    const Section br = bracket(g, x, column(g, phi, i));
    for (int b = 0; b < g.rank(); ++b) {
      Expr s = br[b];
      for (int k = 0; k < n; ++k) {
        const Expr d = differentiate(vx[k], i);
        if (!d.is_zero_literal() && !phi[u(k)][u(b)].is_zero_literal()) s += phi[u(k)][u(b)] * d;
      }
      out[u(i)][u(b)] = s;
    }
  }
  return out;
}

ExprMat fiber_bracket(const Algebroid& g, const ExprMat& phi1, const ExprMat& phi2) {
  require_correction(g, phi1);
  require_correction(g, phi2);
  return combine(compose(g, phi2, phi1), compose(g, phi1, phi2), -1);
}

JetSection jet_bracket(const Algebroid& g, const JetSection& a, const JetSection& b) {
  require_jet(g, a);
  require_jet(g, b);
  ExprMat phi = combine(fiber_bracket(g, a.correction, b.correction), kappa(g, a.base, b.correction), 1);
  phi = combine(phi, kappa(g, b.base, a.correction), -1);
  return {bracket(g, a.base, b.base), std::move(phi)};
}

Section adjoint_action(const Algebroid& g, const JetSection& j, const Section& y) {
  require_jet(g, j);
  const Section vy = anchor_apply(g, y);
  Section out = bracket(g, j.base, y);
  for (int b = 0; b < g.rank(); ++b) {
    Expr s;
    for (int i = 0; i < g.dim(); ++i) {
      if (!vy[i].is_zero_literal() && !j.correction[u(i)][u(b)].is_zero_literal()) s += j.correction[u(i)][u(b)] * vy[i];
    }
    out.comps[u(b)] = out.comps[u(b)] - s;
  }
  return out;
}

JetSection jet_anchor(const Algebroid& g, const JetSection& j) {
  require_jet(g, j);
  const int n = g.dim();
  ExprMat phi = zeros(u(n), u(n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      Expr s;
      for (int a = 0; a < g.rank(); ++a) {
        if (!g.rho(k, a).is_zero_literal() && !j.correction[u(i)][u(a)].is_zero_literal()) {
          s += g.rho(k, a) * j.correction[u(i)][u(a)];
        }
      }
      phi[u(i)][u(k)] = s;
    }
  }
  Section base = anchor_apply(g, j.base);
  return {std::move(base), std::move(phi)};
}

JetSection splitting_from_connection(const Algebroid& g, const TMConnection& nabla, const Section& x) {
  require_same_chart(g.chart(), nabla.chart());
  if (nabla.rank() != g.rank() || nabla.target() != SlotTag::Algebroid) {
    throw PreconditionError("splitting_from_connection: connection target must be g");
  }
  if (x.rank() != g.rank()) throw ShapeError("splitting_from_connection: section rank differs from algebroid rank");
  ExprMat phi = zeros(u(g.dim()), u(g.rank()));
  for (int i = 0; i < g.dim(); ++i) {
    const Section d = cov_deriv_tm(nabla, Section::basis(g.chart(), Frame::Tangent, g.dim(), i), x);
    for (int b = 0; b < g.rank(); ++b) phi[u(i)][u(b)] = -d[b];
  }
  return {x, std::move(phi)};
}

ExprMat splitting_curvature(const Algebroid& g, const TMConnection& nabla, const Section& x, const Section& y) {
  const JetSection k = jet_bracket(g, splitting_from_connection(g, nabla, x), splitting_from_connection(g, nabla, y)) -
                       splitting_from_connection(g, nabla, bracket(g, x, y));
  for (int a = 0; a < g.rank(); ++a) {
    if (!k.base[a].is_zero_literal()) throw InternalConsistencyError("splitting curvature has a base component");
  }
  return k.correction;
}

}  // namespace cartalg
