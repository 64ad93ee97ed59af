#pragma once

// Seeded random algebroids with connections, shared by property tests and the acceptance suite.

#include <string>
#include <vector>

#include "cartalg/algebroid.hpp"
#include "cartalg/connections.hpp"
#include "support/random_expr.hpp"

namespace cartalg::testing {

struct Instance {
  std::string family;
  Algebroid g;
  TMConnection nabla;  // TM-connection on g
  GConnection conn;    // g-connection on g
};

inline std::size_t uz(int i) { return static_cast<std::size_t>(i); }

inline Chart chart_of_dim(int n) {
  std::vector<std::string> names{"x", "y", "z"};
  names.resize(uz(n));
  return Chart::uniform(names, -1, 1);
}

inline Algebroid so3_action(const Chart& c) {
  const Expr x = c.coord(0);
  const Expr y = c.coord(1);
  const Expr z = c.coord(2);
  std::vector<Section> v;
  v.push_back(Section{c, Frame::Tangent, {Expr(0), z, -y}});
  v.push_back(Section{c, Frame::Tangent, {-z, Expr(0), x}});
  v.push_back(Section{c, Frame::Tangent, {y, -x, Expr(0)}});
  return build_action_algebroid(LieAlgebra::so3(), v, ZeroTester(c));
}

inline LieAlgebra sl2() {
  std::vector<std::vector<std::vector<Rational>>> f(3, std::vector<std::vector<Rational>>(3, std::vector<Rational>(3)));
  const auto set = [&](int a, int b, int c, int v) {
    f[uz(a)][uz(b)][uz(c)] = v;
    f[uz(b)][uz(a)][uz(c)] = -v;
  };
  set(0, 1, 0, 1);
  set(0, 2, 1, 2);
  set(1, 2, 2, 1);
  return LieAlgebra(std::move(f));
}

/// d_x, x d_x, x^2 d_x on the line.
inline Algebroid sl2_on_line() {
  const Chart c = Chart::uniform({"x"}, -1, 1);
  const Expr x = c.coord(0);
  std::vector<Section> v;
  v.push_back(Section{c, Frame::Tangent, {Expr(1)}});
  v.push_back(Section{c, Frame::Tangent, {x}});
  v.push_back(Section{c, Frame::Tangent, {x * x}});
  return build_action_algebroid(sl2(), v, ZeroTester(c));
}

inline Algebroid random_poisson_plane(Rng& rng) {
  const Chart c = chart_of_dim(2);
  const Expr p = random_poly(c, rng, 2, 3);
  TensorField pi = tensor2(c, {{Expr(0), p}, {-p, Expr(0)}}, Variance::Upper, Variance::Upper);
  return build_poisson_algebroid(pi, ZeroTester(c));
}

/// h(|x|^2) times the Lie-Poisson tensor of so(3)*.
inline Algebroid random_poisson_so3(Rng& rng) {
  const Chart c = chart_of_dim(3);
  Expr r2;
  for (int i = 0; i < 3; ++i) r2 += c.coord(i) * c.coord(i);
  const Expr h = Expr(1) + Expr(Rational(rng.uniform_int(0, 3), 2)) * r2;
  ExprMat m = zeros(3, 3);
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    m[uz(i)][uz(j)] = h * c.coord(k);
    m[uz(j)][uz(i)] = -(h * c.coord(k));
  }
  return build_poisson_algebroid(tensor2(c, m, Variance::Upper, Variance::Upper), ZeroTester(c));
}

/// Bundle of Lie algebras f * so(3) with zero anchor.
inline Algebroid random_so3_bundle(Rng& rng, int n) {
  const Chart c = chart_of_dim(n);
  const Expr f = Expr(1) + random_poly(c, rng, 2, 2);
  std::vector<std::vector<ExprVec>> s(3, std::vector<ExprVec>(3, ExprVec(3, Expr(0))));
  const LieAlgebra so3 = LieAlgebra::so3();
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int d = 0; d < 3; ++d) s[uz(a)][uz(b)][uz(d)] = f * Expr(so3.f(a, b, d));
    }
  }
  return {c, zeros(uz(n), 3), std::move(s), Origin::Direct};
}

/// I plus a strictly upper triangular polynomial matrix.
inline ExprMat random_unipotent(const Chart& c, Rng& rng, int r) {
  ExprMat p = identity(uz(r));
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) p[uz(i)][uz(j)] = random_poly(c, rng, 1, 2);
  }
  return p;
}

inline Coeffs random_coeffs(const Chart& c, Rng& rng, int dirs, int rank) {
  Coeffs out = zero_coeffs(dirs, rank);
  for (auto& m : out) {
    for (auto& row : m) {
      for (auto& e : row) e = rng.uniform_int(0, 2) == 0 ? Expr(0) : random_poly(c, rng, 2, 2);
    }
  }
  return out;
}

inline Algebroid random_algebroid(Rng& rng, std::string& family) {
  switch (rng.uniform_int(0, 6)) {
    case 0: {
      family = "tangent";
      return Algebroid::tangent(chart_of_dim(rng.uniform_int(1, 3)));
    }
    case 1: family = "so3_action"; return so3_action(chart_of_dim(3));
    case 2: family = "poisson_plane"; return random_poisson_plane(rng);
    case 3: family = "poisson_so3"; return random_poisson_so3(rng);
    case 4: family = "so3_bundle"; return random_so3_bundle(rng, rng.uniform_int(1, 3));
    case 5: family = "sl2_line"; return sl2_on_line();
    default: {
      Algebroid g = rng.uniform_int(0, 1) == 0 ? so3_action(chart_of_dim(3)) : random_poisson_plane(rng);
      family = "reframed";
      return reframe(g, random_unipotent(g.chart(), rng, g.rank()));
    }
  }
}

inline Instance random_instance(Rng& rng) {
  Instance in;
  in.g = random_algebroid(rng, in.family);
  const Chart& c = in.g.chart();
  in.nabla = TMConnection(c, random_coeffs(c, rng, c.dim(), in.g.rank()), SlotTag::Algebroid);
  in.conn = GConnection(in.g, random_coeffs(c, rng, in.g.rank(), in.g.rank()), SlotTag::Algebroid);
  return in;
}

/// Flat g-connection on g gauge equivalent to the trivial one: A_a = -(rho_a P) P^{-1}.
inline GConnection gauge_flat(const Algebroid& g, const ExprMat& p) {
  const int r = g.rank();
  const ExprMat pinv = inverse(p);
  Coeffs a = zero_coeffs(r, r);
  for (int x = 0; x < r; ++x) {
    const Section vx = g.anchor_column(x);
    ExprMat dp = zeros(uz(r), uz(r));
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) dp[uz(i)][uz(j)] = directional(vx, p[uz(i)][uz(j)]);
    }
    const ExprMat m = matmul(dp, pinv);
    for (int al = 0; al < r; ++al) {
      for (int be = 0; be < r; ++be) a[uz(x)][uz(al)][uz(be)] = -m[uz(be)][uz(al)];
    }
  }
  return {g, std::move(a), SlotTag::Algebroid};
}

}  // namespace cartalg::testing
