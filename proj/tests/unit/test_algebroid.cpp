#include "cartalg/algebroid.hpp"
#include "cartalg/errors.hpp"
#include "doctest.h"
#include "support/random_expr.hpp"

using namespace cartalg;
using cartalg::testing::Rng;

namespace {

Chart r3(int lo = -1, int hi = 1) { return Chart::uniform({"x", "y", "z"}, lo, hi); }

Section vf(const Chart& c, const std::vector<std::string>& comps) { return Section::parse(c, Frame::Tangent, comps); }

std::vector<Section> rotation_fields(const Chart& c) {
  // V_a = eps_{aji} x^i d_j, so that [V_a, V_b] = eps_{abc} V_c.
  return {vf(c, {"0", "z", "-y"}), vf(c, {"-z", "0", "x"}), vf(c, {"y", "-x", "0"})};
}

TensorField lie_poisson(const Chart& c) {
  return tensor2(c, {{Expr(0), c.expr("z"), c.expr("-y")}, {c.expr("-z"), Expr(0), c.expr("x")},
                     {c.expr("y"), c.expr("-x"), Expr(0)}},
                 Variance::Upper, Variance::Upper);
}

bool same(const Section& a, const Section& b) {
  const ZeroTester t(a.chart);
  for (int i = 0; i < a.rank(); ++i) {
    if (!t.test(a[i] - b[i]).zero) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("Lie algebra constants are checked") {
  CHECK(LieAlgebra::so3().f(0, 1, 2) == Rational(1));
  CHECK(LieAlgebra::so3().f(2, 1, 0) == Rational(-1));
  std::vector<std::vector<std::vector<Rational>>> bad(2, std::vector<std::vector<Rational>>(2, std::vector<Rational>(2)));
  bad[0][1][1] = 1;
  CHECK_THROWS_AS(LieAlgebra{bad}, PreconditionError);
  // [e1,e2] = e3, [e1,e3] = e1 has Jacobi sum e3 on (e1,e2,e3).
  std::vector<std::vector<std::vector<Rational>>> f(3, std::vector<std::vector<Rational>>(3, std::vector<Rational>(3)));
  f[0][1][2] = 1;
  f[1][0][2] = -1;
  f[0][2][0] = 1;
  f[2][0][0] = -1;
  CHECK_THROWS_AS(LieAlgebra{f}, PreconditionError);
}

TEST_CASE("bracket examples") {
  const Chart plane = Chart::uniform({"x", "y"}, -1, 1);
  const Algebroid tm = Algebroid::tangent(plane);
  const Section x = Section::parse(plane, Frame::Algebroid, {"1", "0"});
  const Section y = Section::parse(plane, Frame::Algebroid, {"x", "0"});
  CHECK(same(bracket(tm, x, y), x));

  const ZeroTester t2(plane);
  const Algebroid transl = build_action_algebroid(LieAlgebra::abelian(2), {vf(plane, {"1", "0"}), vf(plane, {"0", "1"})}, t2);
  CHECK(bracket(transl, transl.e(0), transl.e(1)).comps == ExprVec{Expr(0), Expr(0)});

  const Chart c = r3();
  const Algebroid so3 = build_action_algebroid(LieAlgebra::so3(), rotation_fields(c), ZeroTester(c));
  CHECK(same(bracket(so3, so3.e(0), so3.e(1)), so3.e(2)));
}

TEST_CASE("anchor examples") {
  const Chart c = r3();
  const Algebroid tm = Algebroid::tangent(c);
  const Section s = Section::parse(c, Frame::Algebroid, {"x*y", "1", "sin(z)"});
  CHECK(anchor_apply(tm, s).comps == s.comps);
  CHECK(anchor_apply(tm, tm.zero_section()).comps == ExprVec(3, Expr(0)));

  const Algebroid lp = build_poisson_algebroid(lie_poisson(c), ZeroTester(c));
  // <a, #b> = Pi(a, b) fixes #dx^1 = -z d_y + y d_z.
  CHECK(same(anchor_apply(lp, lp.e(0)), vf(c, {"0", "-z", "y"})));
}

TEST_CASE("validate") {
  const Chart c = r3();
  const ZeroTester t(c);
  CHECK(validate(Algebroid::tangent(c), t).passed());
  const Algebroid so3 = build_action_algebroid(LieAlgebra::so3(), rotation_fields(c), t);
  const Verdict v = validate(so3, t);
  CHECK(v.passed());
  CHECK(v.subs.size() == 4);

  auto structure = so3.structure();
  structure[0][1][2] = c.expr("1 + x");
  structure[1][0][2] = c.expr("-1 - x");
  const Algebroid bent(c, so3.anchor(), structure);
  const Verdict bad = validate(bent, t);
  CHECK_FALSE(bad.passed());
  const Verdict* hom = bad.find("anchor_hom");
  REQUIRE(hom);
  CHECK_FALSE(hom->passed());
  REQUIRE(hom->witness);
  CHECK(hom->witness->indices[0] == 0);
  CHECK(hom->witness->indices[1] == 1);
  CHECK(hom->witness->point.size() == 3);
  CHECK(bad.find("antisymmetry")->passed());
}

TEST_CASE("action builder") {
  const Chart plane = Chart::uniform({"x", "y"}, -1, 1);
  const ZeroTester t2(plane);
  const Algebroid transl = build_action_algebroid(LieAlgebra::abelian(2), {vf(plane, {"1", "0"}), vf(plane, {"0", "1"})}, t2);
  CHECK(transl.anchor() == identity(2));
  CHECK(transl.origin() == Origin::Action);

  const Chart c = r3();
  const ZeroTester t(c);
  auto fields = rotation_fields(c);
  CHECK(validate(build_action_algebroid(LieAlgebra::so3(), fields, t), t).passed());
  fields[2] = Expr(-1) * fields[2];
  try {
    (void)build_action_algebroid(LieAlgebra::so3(), fields, t);
    FAIL("expected rejection");
  } catch (const WitnessError& e) {
    CHECK(std::string(e.what()).find("not an infinitesimal action") != std::string::npos);
    CHECK(e.point.size() == 3);
  }
}

TEST_CASE("Poisson builder") {
  const Chart c = r3();
  const ZeroTester t(c);
  const Algebroid zero = build_poisson_algebroid(tensor2(c, zeros(3, 3), Variance::Upper, Variance::Upper), t);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      CHECK(zero.rho(a, b).is_zero_literal());
      for (int k = 0; k < 3; ++k) CHECK(zero.c(a, b, k).is_zero_literal());
    }
  }
  const Algebroid lp = build_poisson_algebroid(lie_poisson(c), t);
  // d_k pi^{ba} = eps^{bak} = -eps_{abk}
  CHECK(lp.c(0, 1, 2) == Expr(-1));
  CHECK(lp.c(1, 2, 0) == Expr(-1));
  CHECK(lp.c(1, 0, 2) == Expr(1));
  CHECK(lp.c(0, 1, 0).is_zero_literal());
  CHECK(validate(lp, t).passed());

  const TensorField bad = tensor2(c, {{Expr(0), c.expr("z"), c.expr("x")}, {c.expr("-z"), Expr(0), Expr(0)},
                                      {c.expr("-x"), Expr(0), Expr(0)}},
                                  Variance::Upper, Variance::Upper);
  try {
    (void)build_poisson_algebroid(bad, t);
    FAIL("expected rejection");
  } catch (const WitnessError& e) {
    CHECK(e.indices == std::vector<int>{0, 1, 2});
    CHECK(e.value != 0.0);
  }
}

TEST_CASE("foliation builder") {
  const Chart c = Chart::uniform({"x", "y", "z"}, -1, 1);
  const ZeroTester t(c);
  const Algebroid flat = build_foliation_algebroid({vf(c, {"1", "0", "0"}), vf(c, {"0", "1", "0"})}, t);
  CHECK(flat.c(0, 1, 0).is_zero_literal());
  CHECK(flat.c(0, 1, 1).is_zero_literal());
  CHECK_THROWS_AS((void)build_foliation_algebroid({vf(c, {"1", "0", "0"}), vf(c, {"0", "x", "1"})}, t), WitnessError);
  const Algebroid curved = build_foliation_algebroid({vf(c, {"1", "0", "0"}), vf(c, {"0", "1 + x^2", "0"})}, t);
  CHECK(t.test(curved.c(0, 1, 1) - c.expr("2*x/(1 + x^2)")).zero);
  CHECK(curved.c(0, 1, 0).is_zero_literal());
  CHECK(validate(curved, t).passed());
  CHECK_THROWS_AS((void)build_foliation_algebroid({vf(c, {"1", "0", "0"}), vf(c, {"x", "0", "0"})}, t),
                  PreconditionError);
}

TEST_CASE("orbit rank") {
  const Chart plane = Chart::uniform({"x", "y"}, -1, 1);
  const ZeroTester t2(plane);
  const OrbitInfo tm = orbit_info(Algebroid::tangent(plane), t2);
  CHECK(tm.min_rank == 2);
  CHECK(tm.transitive);
  CHECK(tm.regular);

  const Chart c = r3();
  const ZeroTester t(c);
  const Algebroid so3 = build_action_algebroid(LieAlgebra::so3(), rotation_fields(c), t);
  CHECK(orbit_rank(so3, std::vector<double>{1, 0, 0}) == 2);
  CHECK(orbit_rank(so3, std::vector<double>{0, 0, 0}) == 0);
  CHECK_FALSE(orbit_info(so3, t).transitive);

  const Algebroid zero = build_poisson_algebroid(tensor2(c, zeros(3, 3), Variance::Upper, Variance::Upper), t);
  const OrbitInfo z = orbit_info(zero, t);
  CHECK(z.max_rank == 0);
  CHECK(z.regular);
}

TEST_CASE("property: Poisson bracket reproduces the cotangent formula") {
  // [a,b] = L_{#a} b - L_{#b} a + d(Pi(a,b)), computed with tensor Lie derivatives.
  Rng rng(3);
  const Chart c = r3();
  const ZeroTester t(c);
  for (int k = 0; k < 5; ++k) {
    // A function of |x|^2 times Lie-Poisson stays Poisson.
    const Expr g = Expr(1) + c.expr("x^2 + y^2 + z^2") * Expr(rng.small_rational());
    const TensorField pi = g * lie_poisson(c);
    const Algebroid alg = build_poisson_algebroid(pi, t);
    CHECK(validate(alg, t).passed());
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const Section da = Section::basis(c, Frame::Cotangent, 3, a);
        const Section db = Section::basis(c, Frame::Cotangent, 3, b);
        const Section ha = anchor_apply(alg, alg.e(a));
        const Section hb = anchor_apply(alg, alg.e(b));
        // <dx^a, #dx^b> = Pi^{ab}
        CHECK(t.test(ha[b] - pi.at({b, a})).zero);
        CHECK(t.test(hb[a] - pi.at({a, b})).zero);
        const TensorField oracle = lie_derivative(ha, as_tensor(db)) - lie_derivative(hb, as_tensor(da));
        const Section br = bracket(alg, alg.e(a), alg.e(b));
        for (int kk = 0; kk < 3; ++kk) {
          CHECK(t.test(br[kk] - oracle.at({kk}) - differentiate(pi.at({a, b}), kk)).zero);
        }
      }
    }
  }
}

TEST_CASE("property: Leibniz rule on random sections") {
  Rng rng(8);
  const Chart c = r3();
  const ZeroTester t(c);
  const Algebroid so3 = build_action_algebroid(LieAlgebra::so3(), rotation_fields(c), t);
  for (int k = 0; k < 10; ++k) {
    Section x = so3.zero_section();
    Section y = so3.zero_section();
    for (auto& e : x.comps) e = testing::random_poly(c, rng, 2, 2);
    for (auto& e : y.comps) e = testing::random_poly(c, rng, 2, 2);
    const Expr f = testing::random_poly(c, rng, 2, 3);
    const Section lhs = bracket(so3, x, f * y);
    const Section rhs = f * bracket(so3, x, y) + anchor_derivative(so3, x, f) * y;
    CHECK(same(lhs, rhs));
    CHECK(same(bracket(so3, x, y), Expr(-1) * bracket(so3, y, x)));
    // The anchor is a bracket homomorphism.
    CHECK(same(anchor_apply(so3, bracket(so3, x, y)), vf_bracket(anchor_apply(so3, x), anchor_apply(so3, y))));
  }
}
