#include <cmath>

#include "cartalg/chart.hpp"
#include "cartalg/errors.hpp"
#include "cartalg/expr.hpp"
#include "cartalg/linalg.hpp"
#include "cartalg/verdict.hpp"
#include "cartalg/zero_test.hpp"
#include "doctest.h"
#include "support/random_expr.hpp"

using namespace cartalg;
using cartalg::testing::Rng;

namespace {

Chart chart_x() { return Chart::uniform({"x"}, -2, 2); }
Chart chart_ty() { return Chart::uniform({"t", "y"}, -2, 2); }
Chart chart_xyz() { return Chart::uniform({"x", "y", "z"}, -1, 1); }

}  // namespace

TEST_CASE("rational arithmetic and printing") {
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("-3") == Rational(-3));
  CHECK(Rational::parse("1/3") == Rational(1, 3));
  CHECK(Rational(1, 4).to_string() == "0.25");
  CHECK(Rational(-1, 3).to_string() == "-1/3");
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
  CHECK_THROWS_AS((void)Rational(0).pow(-1), std::domain_error);
  CHECK_THROWS_AS((void)(Rational(INT64_MAX) * Rational(2)), std::overflow_error);
}

TEST_CASE("chart validation") {
  CHECK_THROWS_AS(Chart::uniform({"x", "x"}, 0, 1), PreconditionError);
  CHECK_THROWS_AS(Chart::uniform({"sin"}, 0, 1), PreconditionError);
  CHECK_THROWS_AS(Chart({"x"}, {Interval{2, 1}}), PreconditionError);
  CHECK(chart_xyz().index_of("z") == 2);
}

TEST_CASE("parse keeps the syntactic shape") {
  const Chart c = chart_x();
  const Expr e = parse_expr("x^2 + 1", c);
  REQUIRE(e.kind() == ExprKind::Add);
  REQUIRE(e.children().size() == 2);
  CHECK(e.children()[0].kind() == ExprKind::Pow);
  CHECK(e.children()[0].exponent() == 2);
  CHECK(e.children()[0].children()[0].symbol_name() == "x");
  CHECK(e.children()[1].value() == Rational(1));

  const Expr p = parse_expr("sin(t)*y", chart_ty());
  REQUIRE(p.kind() == ExprKind::Mul);
  CHECK(p.children()[0].kind() == ExprKind::Func);
  CHECK(p.children()[0].func() == FuncKind::Sin);
  CHECK(p.children()[1].symbol_name() == "y");
}

TEST_CASE("parse errors") {
  const Chart c = Chart::uniform({"x", "y"}, 0, 1);
  try {
    (void)parse_expr("x + z", c);
    FAIL("expected an error");
  } catch (const UnknownIdentifierError& e) {
    CHECK(e.identifier == "z");
  }
  try {
    (void)parse_expr("x + * y", c);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
  CHECK_THROWS_AS((void)parse_expr("x^1.5", c), ParseError);
  CHECK_THROWS_AS((void)parse_expr("sin x", c), ParseError);
  CHECK_THROWS_AS((void)parse_expr("(x", c), ParseError);
  CHECK_THROWS_AS((void)parse_expr("", c), ParseError);
  CHECK_NOTHROW((void)parse_expr("  x ^ -2 * - y / (x+1) ", c));
}

TEST_CASE("parse-print-parse is a fixed point") {
  const Chart c = chart_xyz();
  for (const char* text : {"x^2 + 1", "a", "-x*y", "-(x*y)", "x - (y + z)", "x/y/z", "x/(y/z)", "x*(y*z)",
                           "-x^2", "(x + 1)^-3", "sin(x)^2 + cos(x)^2 - 1", "x - -y", "1/3*x", "0.25*x",
                           "x*-y", "--x", "(-x)^2", "sqrt(x^2 + 1)/(1 + y^2)^2"}) {
    CAPTURE(text);
    if (std::string(text) == "a") continue;
    const Expr e = parse_expr(text, c);
    const Expr again = parse_expr(to_string(e), c);
    CHECK(e == again);
    CHECK(to_string(again) == to_string(e));
  }
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const Expr raw = testing::random_tree(c, rng, 4);
    const Expr e = parse_expr(to_string(raw), c);
    CAPTURE(to_string(raw));
    CHECK(parse_expr(to_string(e), c) == e);
    const Expr ce = canon(raw);
    CHECK(canon(parse_expr(to_string(ce), c)) == ce);
  }
}

TEST_CASE("differentiate") {
  const Chart c = chart_ty();
  const Chart cx = chart_x();
  CHECK(differentiate(cx.expr("x^2"), 0) == cx.expr("2*x"));
  CHECK(differentiate(c.expr("sin(t)"), 0) == c.expr("cos(t)"));
  CHECK(differentiate(Chart::uniform({"x", "y"}, 0, 1).expr("x"), 1).is_zero_literal());
  CHECK(differentiate(cx.expr("1/x"), 0) == cx.expr("-x^-2"));
}

TEST_CASE("eval and domain violations") {
  const Chart cx = chart_x();
  const std::vector<double> two{2.0};
  const std::vector<double> zero{0.0};
  CHECK(eval(cx.expr("x^2+1"), two) == doctest::Approx(5.0));
  CHECK(eval(chart_ty().expr("sin(t)"), std::vector<double>{0.0, 1.0}) == 0.0);
  try {
    (void)eval(parse_expr("1/x", cx), zero);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.subexpression == "1/x");
  }
  CHECK_THROWS_AS((void)eval(cx.expr("log(x - 3)"), two), DomainError);
  CHECK_THROWS_AS((void)eval(cx.expr("sqrt(x - 3)"), two), DomainError);
  CHECK(eval(cx.expr("sqrt(x - 2)"), two) == 0.0);
}

TEST_CASE("canonical form") {
  const Chart c = chart_xyz();
  CHECK(c.expr("x*y - y*x").is_zero_literal());
  CHECK(c.expr("x/x") == Expr(1));
  CHECK(c.expr("2*(x + y) - 2*x") == c.expr("2*y"));
  CHECK(c.expr("(x*y)^2") == c.expr("x^2*y^2"));
  CHECK(c.expr("sqrt(4/9)") == Expr(Rational(2, 3)));
  CHECK(c.expr("sin(0) + cos(0) + exp(0) + log(1)") == Expr(2));
  CHECK(to_string(c.expr("y + x + 1 - 3*z")) == "1 + x + y - 3*z");
  // 0^-1 stays unevaluated so the sampler reports it.
  CHECK(c.expr("0^-1").kind() == ExprKind::Pow);
}

TEST_CASE("is_zero examples") {
  const Chart t = Chart::uniform({"t"}, -3, 3);
  const ZeroResult pyth = is_zero(t.expr("sin(t)^2 + cos(t)^2 - 1"), t);
  CHECK(pyth.zero);
  CHECK(pyth.path == DecisionPath::Probabilistic);

  const Chart c = chart_ty();
  const ZeroResult comm = is_zero(parse_expr("t*y - y*t", c), c);
  CHECK(comm.zero);
  CHECK(comm.path == DecisionPath::Symbolic);

  const Chart box = Chart::uniform({"x"}, 0, 2);
  const ZeroResult lin = is_zero(box.expr("x - 1"), box);
  CHECK_FALSE(lin.zero);
  REQUIRE(lin.witness.size() == 1);
  CHECK(lin.witness[0] != 1.0);
  CHECK(std::abs(lin.value) == doctest::Approx(std::abs(lin.witness[0] - 1.0)));

  const Chart pos = Chart::uniform({"x"}, 1, 2);
  CHECK_THROWS_AS((void)is_zero(pos.expr("log(-x)"), pos), UndecidableError);
  CHECK_FALSE(is_zero(Expr(Rational(1, 1000000)), pos).zero);
}

TEST_CASE("is_zero is deterministic in the seed") {
  const Chart c = chart_xyz();
  const Expr e = c.expr("x - y^2");
  const ZeroResult a = is_zero(e, c, ZeroOptions{32, 1e-9, 1e-9, 7});
  const ZeroResult b = is_zero(e, c, ZeroOptions{32, 1e-9, 1e-9, 7});
  CHECK(a.witness == b.witness);
  CHECK(a.value == b.value);
}

TEST_CASE("property: derivative matches central finite differences") {
  Rng rng(2024);
  for (int k = 0; k < 100; ++k) {
    const int dim = rng.uniform_int(1, 3);
    std::vector<std::string> names{"x", "y", "z"};
    names.resize(static_cast<std::size_t>(dim));
    const Chart c = Chart::uniform(names, -2, 2);
    const Expr e = testing::random_poly(c, rng, 4, 5);
    const int coord = rng.uniform_int(0, dim - 1);
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (auto& v : p) v = rng.uniform(-2, 2);
    const double h = 1e-5;
    std::vector<double> lo = p;
    std::vector<double> hi = p;
    lo[static_cast<std::size_t>(coord)] -= h;
    hi[static_cast<std::size_t>(coord)] += h;
    const double fd = (eval(e, hi) - eval(e, lo)) / (2 * h);
    const double exact = eval(differentiate(e, coord), p);
    CAPTURE(to_string(e));
    CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("property: e - e is zero and canon is idempotent") {
  const Chart c = chart_xyz();
  Rng rng(99);
  for (int k = 0; k < 100; ++k) {
    const Expr raw = testing::random_tree(c, rng, 4);
    CAPTURE(to_string(raw));
    CHECK(is_zero(raw - raw, c).zero);
    const Expr once = canon(raw);
    CHECK(canon(once) == once);
    CHECK(canon(Expr::raw_add({once, Expr::raw_neg(raw)})).is_zero_literal());
    // Canonicalization preserves the value.
    const std::vector<double> p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK(eval(once, p) == doctest::Approx(eval(raw, p)).epsilon(1e-9));
  }
}

TEST_CASE("symbolic determinant, inverse and span solve") {
  const Chart c = chart_xyz();
  const ExprMat m{{c.expr("x"), c.expr("1")}, {c.expr("y"), c.expr("2")}};
  CHECK(det(m) == c.expr("2*x - y"));
  const Chart pos = Chart::uniform({"x", "y", "z"}, 1, 2);
  const ExprMat g{{pos.expr("1 + x^2"), pos.expr("y")}, {pos.expr("y"), pos.expr("3")}};
  const ExprMat prod = matmul(g, inverse(g));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) CHECK(is_zero(prod[i][j] - Expr(i == j ? 1 : 0), pos).zero);
  }
  const ZeroTester tester(pos);
  const std::vector<ExprVec> frame{{Expr(1), Expr(0), Expr(0)}, {Expr(0), pos.expr("1 + x^2"), Expr(0)}};
  const SpanSolution ok = solve_in_span(frame, {Expr(0), pos.expr("2*x"), Expr(0)}, tester);
  REQUIRE(ok.ok);
  CHECK(ok.coefficients[0].is_zero_literal());
  CHECK(is_zero(ok.coefficients[1] - pos.expr("2*x/(1 + x^2)"), pos).zero);
  const SpanSolution bad = solve_in_span(frame, {Expr(0), Expr(0), Expr(1)}, tester);
  CHECK_FALSE(bad.ok);
  CHECK(bad.failing_row == 2);
  CHECK_THROWS_AS((void)solve_in_span({{Expr(1), Expr(0)}, {Expr(2), Expr(0)}}, {Expr(0), Expr(0)},
                                      ZeroTester(Chart::uniform({"x", "y"}, 0, 1))),
                  PreconditionError);
}

TEST_CASE("check_zero reports indices") {
  const Chart c = chart_xyz();
  const ZeroTester tester(c);
  const Verdict ok = check_zero("ok", tester, {{{0}, Expr(0)}, {{1}, c.expr("x - x")}});
  CHECK(ok.passed());
  const Verdict bad = check_zero("bad", tester, {{{0}, Expr(0)}, {{4, 2}, c.expr("x*y")}});
  CHECK_FALSE(bad.passed());
  REQUIRE(bad.witness);
  CHECK(bad.witness->indices == std::vector<int>{4, 2});
}
