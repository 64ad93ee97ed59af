#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cartalg/bundles.hpp"
#include "cartalg/chart.hpp"
#include "cartalg/linalg.hpp"
#include "cartalg/verdict.hpp"

namespace cartalg {

/// Finite-dimensional Lie algebra with exact structure constants f^c_{ab}.
class LieAlgebra {
public:
  LieAlgebra() = default;
  /// `f[a][b][c]` = f^c_{ab}. Throws PreconditionError unless antisymmetric and Jacobi.
  explicit LieAlgebra(std::vector<std::vector<std::vector<Rational>>> f);

  static LieAlgebra abelian(int dim);
  /// [e_a, e_b] = eps_{abc} e_c.
  static LieAlgebra so3();
  /// Two-dimensional non-abelian algebra, [e_1, e_2] = e_2.
  static LieAlgebra affine_line();

  [[nodiscard]] int dim() const { return static_cast<int>(f_.size()); }
  [[nodiscard]] const Rational& f(int a, int b, int c) const {
    return f_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
  }
  [[nodiscard]] const std::vector<std::vector<std::vector<Rational>>>& table() const { return f_; }

private:
  std::vector<std::vector<std::vector<Rational>>> f_;
};

enum class Origin : std::uint8_t { Direct, Tangent, Action, Poisson, Foliation };

[[nodiscard]] const char* to_string(Origin o);

/// Trivialized Lie algebroid over one chart, in a global frame e_a.
class Algebroid {
public:
  Algebroid() = default;
  /// anchor[i][a] = rho^i_a; structure[a][b][c] = c^c_{ab}.
  Algebroid(Chart chart, ExprMat anchor, std::vector<std::vector<ExprVec>> structure, Origin origin = Origin::Direct);

  static Algebroid tangent(const Chart& chart);

  [[nodiscard]] const Chart& chart() const { return chart_; }
  [[nodiscard]] int dim() const { return chart_.dim(); }
  [[nodiscard]] int rank() const { return rank_; }
  [[nodiscard]] Origin origin() const { return origin_; }
  [[nodiscard]] const Expr& rho(int i, int a) const {
    return anchor_[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)];
  }
  [[nodiscard]] const Expr& c(int a, int b, int d) const {
    return structure_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][static_cast<std::size_t>(d)];
  }
  [[nodiscard]] const ExprMat& anchor() const { return anchor_; }
  [[nodiscard]] const std::vector<std::vector<ExprVec>>& structure() const { return structure_; }

  /// Frame section e_a.
  [[nodiscard]] Section e(int a) const { return Section::basis(chart_, Frame::Algebroid, rank_, a); }
  [[nodiscard]] Section zero_section() const { return Section::zero(chart_, Frame::Algebroid, rank_); }
  /// Anchor image of e_a as a vector field.
  [[nodiscard]] Section anchor_column(int a) const;

  /// Same data, tagged with a different origin.
  [[nodiscard]] Algebroid with_origin(Origin o) const;

private:
  Chart chart_;
  int rank_ = 0;
  ExprMat anchor_;
  std::vector<std::vector<ExprVec>> structure_;
  Origin origin_ = Origin::Direct;
};

/// [X,Y]^c = rho^i_a X^a d_i Y^c - rho^i_a Y^a d_i X^c + c^c_{ab} X^a Y^b.
[[nodiscard]] Section bracket(const Algebroid& g, const Section& x, const Section& y);
[[nodiscard]] Section anchor_apply(const Algebroid& g, const Section& x);
/// rho^i_a d_i f for X = e_a generalised to X^a.
[[nodiscard]] Expr anchor_derivative(const Algebroid& g, const Section& x, const Expr& f);

/// Axiom report with sub-verdicts leibniz, antisymmetry, jacobi, anchor_hom.
[[nodiscard]] Verdict validate(const Algebroid& g, const ZeroTester& tester);

/// Throws PreconditionError naming the failing pair unless [V_a,V_b] = f^c_{ab} V_c.
[[nodiscard]] Algebroid build_action_algebroid(const LieAlgebra& a, const std::vector<Section>& fields,
                                               const ZeroTester& tester);

/// Cotangent algebroid of a Poisson tensor pi[i][j] in the frame dx^a.
/// Anchor rho^i_a = pi^{ia}; structure c^k_{ab} = d_k pi^{ba}.
[[nodiscard]] Algebroid build_poisson_algebroid(const TensorField& pi, const ZeroTester& tester);

/// Subalgebroid of TM spanned by an involutive frame.
[[nodiscard]] Algebroid build_foliation_algebroid(const std::vector<Section>& frame, const ZeroTester& tester);

/// Same algebroid in the frame e'_a = p[b][a] e_b; p must be invertible on the box.
[[nodiscard]] Algebroid reframe(const Algebroid& g, const ExprMat& p);

struct OrbitInfo {
  int min_rank = 0;
  int max_rank = 0;
  bool transitive = false;
  bool regular = false;
};

[[nodiscard]] int orbit_rank(const Algebroid& g, std::span<const double> p);
/// Rank statistics over the tester's sample points.
[[nodiscard]] OrbitInfo orbit_info(const Algebroid& g, const ZeroTester& tester);

}  // namespace cartalg
