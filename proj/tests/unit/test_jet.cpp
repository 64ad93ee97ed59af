#include "cartalg/errors.hpp"
#include "cartalg/jet.hpp"
#include "doctest.h"
#include "support/instances.hpp"

using namespace cartalg;
using namespace cartalg::testing;

namespace {

bool zero_mat(const ZeroTester& t, const ExprMat& m) {
  for (const auto& row : m) {
    for (const auto& e : row) {
      if (!t.test(e).zero) return false;
    }
  }
  return true;
}

ExprMat minus(const ExprMat& a, const ExprMat& b) {
  ExprMat out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].size(); ++k) out[i][k] = a[i][k] - b[i][k];
  }
  return out;
}

bool zero_jet(const ZeroTester& t, const JetSection& j) {
  for (const auto& e : j.base.comps) {
    if (!t.test(e).zero) return false;
  }
  return zero_mat(t, j.correction);
}

bool zero_section(const ZeroTester& t, const Section& s) {
  for (const auto& e : s.comps) {
    if (!t.test(e).zero) return false;
  }
  return true;
}

Section random_section(const Algebroid& g, Rng& rng) {
  Section s = g.zero_section();
  for (auto& e : s.comps) e = random_poly(g.chart(), rng, 2, 2);
  return s;
}

JetSection random_jet(const Algebroid& g, Rng& rng) {
  JetSection j = jet_zero(g);
  j.base = random_section(g, rng);
  for (auto& row : j.correction) {
    for (auto& e : row) e = random_poly(g.chart(), rng, 1, 2);
  }
  return j;
}

/// Flat connection on the plane with non-parallel torsion.
TMConnection flat_not_cartan(const Chart& c) {
  Coeffs gam = zero_coeffs(2, 2);
  gam[0][1][0] = c.expr("-2*x");
  return {c, gam, SlotTag::Algebroid};
}

}  // namespace

TEST_CASE("kappa examples") {
  SUBCASE("kernel section of a bundle of Lie algebras") {
    const Chart c = chart_of_dim(2);
    std::vector<std::vector<ExprVec>> s(2, std::vector<ExprVec>(2, ExprVec(2, Expr(0))));
    const Algebroid g(c, zeros(2, 2), s, Origin::Direct);
    ExprMat phi = zeros(2, 2);
    phi[0][1] = c.expr("x*y");
    CHECK(zero_mat(ZeroTester(c), kappa(g, Section::parse(c, Frame::Algebroid, {"x", "1"}), phi)));
  }
  SUBCASE("tangent, constant data") {
    const Chart c = chart_of_dim(2);
    const Algebroid g = Algebroid::tangent(c);
    ExprMat phi = zeros(2, 2);
    phi[0][1] = Expr(1);
    CHECK(zero_mat(ZeroTester(c), kappa(g, g.e(0), phi)));
  }
  SUBCASE("so(3) action") {
    const Algebroid g = so3_action(chart_of_dim(3));
    ExprMat phi = zeros(3, 3);
    phi[0][1] = Expr(1);
    const ExprMat k = kappa(g, g.e(0), phi);
    for (int i = 0; i < 3; ++i) {
      for (int b = 0; b < 3; ++b) CHECK(k[uz(i)][uz(b)] == Expr(i == 0 && b == 2 ? 1 : 0));
    }
  }
  SUBCASE("shape errors") {
    const Algebroid g = so3_action(chart_of_dim(3));
    CHECK_THROWS_AS((void)kappa(g, g.e(0), zeros(2, 3)), ShapeError);
    CHECK_THROWS_AS((void)jet_bracket(g, jet_zero(g), JetSection{g.e(0), zeros(3, 2)}), ShapeError);
  }
}

TEST_CASE("jet bracket examples") {
  const Algebroid g = so3_action(chart_of_dim(3));
  const ZeroTester t(g.chart());
  Rng rng(1);
  const Section x = random_section(g, rng);
  const Section y = random_section(g, rng);
  const JetSection p = jet_bracket(g, prolong(g, x), prolong(g, y));
  CHECK(zero_jet(t, p - prolong(g, bracket(g, x, y))));

  JetSection a = jet_zero(g);
  JetSection b = jet_zero(g);
  a.correction = random_jet(g, rng).correction;
  b.correction = random_jet(g, rng).correction;
  const JetSection f = jet_bracket(g, a, b);
  CHECK(zero_section(t, f.base));
  CHECK(zero_mat(t, minus(f.correction, fiber_bracket(g, a.correction, b.correction))));
}

TEST_CASE("adjoint action examples") {
  const Algebroid g = so3_action(chart_of_dim(3));
  const ZeroTester t(g.chart());
  Rng rng(3);
  const Section x = random_section(g, rng);
  const Section y = random_section(g, rng);
  CHECK(zero_section(t, adjoint_action(g, prolong(g, x), y) - bracket(g, x, y)));

  const Algebroid b = random_so3_bundle(rng, 2);
  JetSection j = random_jet(b, rng);
  j.base = b.zero_section();
  CHECK(zero_section(ZeroTester(b.chart()), adjoint_action(b, j, random_section(b, rng))));
}

TEST_CASE("splitting examples") {
  const Algebroid g = so3_action(chart_of_dim(3));
  const ZeroTester t(g.chart());
  const TMConnection triv = TMConnection::trivial(g.chart(), 3, SlotTag::Algebroid);
  for (int a = 0; a < 3; ++a) CHECK(zero_mat(t, splitting_from_connection(g, triv, g.e(a)).correction));
  const JetSection s = splitting_from_connection(g, triv, g.chart().coord(0) * g.e(0));
  CHECK(s.correction[0][0] == Expr(-1));
  CHECK(s.correction[1][0].is_zero_literal());
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) CHECK(zero_mat(t, splitting_curvature(g, triv, g.e(a), g.e(b))));
  }
  const TMConnection on_tm = TMConnection::trivial(g.chart(), 3, SlotTag::TM);
  CHECK_THROWS_AS((void)splitting_from_connection(g, on_tm, g.e(0)), PreconditionError);

  const Chart c = chart_of_dim(2);
  const Algebroid tan = Algebroid::tangent(c);
  const ZeroTester tc(c);
  const TMConnection fnc = flat_not_cartan(c);
  CHECK(is_flat(fnc, tc).passed());
  bool nonzero = false;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) nonzero = nonzero || !zero_mat(tc, splitting_curvature(tan, fnc, tan.e(a), tan.e(b)));
  }
  CHECK(nonzero);
}

TEST_CASE("property: jet bracket is a Lie algebroid bracket") {
  Rng rng(11);
  for (int k = 0; k < 10; ++k) {
    std::string fam;
    const Algebroid g = random_algebroid(rng, fam);
    CAPTURE(fam);
    const ZeroTester t(g.chart());
    const JetSection a = random_jet(g, rng);
    const JetSection b = random_jet(g, rng);
    const JetSection c = random_jet(g, rng);
    CHECK(zero_jet(t, jet_bracket(g, a, b) + jet_bracket(g, b, a)));
    const JetSection jac = jet_bracket(g, a, jet_bracket(g, b, c)) + jet_bracket(g, b, jet_bracket(g, c, a)) +
                           jet_bracket(g, c, jet_bracket(g, a, b));
    CHECK(zero_jet(t, jac));
    // Leibniz in the split form.
    const Expr f = random_poly(g.chart(), rng, 2, 2);
    const JetSection lhs = jet_bracket(g, a, scale(f, b));
    const Expr af = anchor_derivative(g, a.base, f);
    CHECK(zero_jet(t, lhs - scale(f, jet_bracket(g, a, b)) - scale(af, b)));
  }
}

TEST_CASE("property: the adjoint action is a representation") {
  Rng rng(12);
  for (int k = 0; k < 10; ++k) {
    std::string fam;
    const Algebroid g = random_algebroid(rng, fam);
    CAPTURE(fam);
    const ZeroTester t(g.chart());
    const JetSection a = random_jet(g, rng);
    const JetSection b = random_jet(g, rng);
    const Section y = random_section(g, rng);
    const Section r = adjoint_action(g, a, adjoint_action(g, b, y)) - adjoint_action(g, b, adjoint_action(g, a, y)) -
                      adjoint_action(g, jet_bracket(g, a, b), y);
    CHECK(zero_section(t, r));
  }
}

TEST_CASE("property: the splitting realizes the induced representations") {
  Rng rng(13);
  for (int k = 0; k < 10; ++k) {
    const Instance in = random_instance(rng);
    CAPTURE(in.family);
    const Algebroid& g = in.g;
    const ZeroTester t(g.chart());
    const Algebroid tan = Algebroid::tangent(g.chart());
    const GConnection on_g = induced_rep_on_g(g, in.nabla);
    const GConnection on_tm = induced_rep_on_tm(g, in.nabla);
    const Section x = random_section(g, rng);
    const Section y = random_section(g, rng);
    Section v = Section::zero(g.chart(), Frame::Tangent, g.dim());
    for (auto& e : v.comps) e = random_poly(g.chart(), rng, 2, 2);
    const JetSection s = splitting_from_connection(g, in.nabla, x);
    CHECK(zero_section(t, s.base - x));
    CHECK(zero_section(t, adjoint_action(g, s, y) - cov_deriv_g(on_g, x, y)));
    const Section lhs = adjoint_action(tan, jet_anchor(g, s), v);
    const Section rhs = cov_deriv_g(on_tm, x, v);
    for (int i = 0; i < g.dim(); ++i) CHECK(t.test(lhs[i] - rhs[i]).zero);
  }
}
