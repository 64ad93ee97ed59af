#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cartalg/algebroid.hpp"
#include "cartalg/connections.hpp"
#include "cartalg/jet.hpp"

namespace cartalg {

// ---- Bracket compatibility ------------------------------------------------------------------

/// C(V,X,Y) = nabla_V[X,Y] - [nabla_V X,Y] - [X,nabla_V Y] - nabla_{bar_Y V} X + nabla_{bar_X V} Y.
[[nodiscard]] Section compat_defect(const Algebroid& g, const TMConnection& nabla, const Section& v, const Section& x,
                                    const Section& y);

/// Sub-verdicts "compat" and "splitting", components indexed [i,a,b,c] with a < b.
/// Throws InternalConsistencyError if the two computations reach different decisions.
[[nodiscard]] Verdict check_cartan(const Algebroid& g, const TMConnection& nabla, const ZeroTester& tester);

/// Component-wise agreement of the compat defect with the splitting curvature.
[[nodiscard]] Verdict oracle_agreement(const Algebroid& g, const TMConnection& nabla, const ZeroTester& tester);

enum class Classification : std::uint8_t { LocallySymmetric, Curved, NotCartan };

[[nodiscard]] const char* to_string(Classification c);

struct TheoremA {
  Classification classification = Classification::NotCartan;
  /// Sub-verdicts: cartan, flat, and constant_sections_parallel for action algebroids.
  Verdict verdict;
};

[[nodiscard]] TheoremA theorem_a(const Algebroid& g, const TMConnection& nabla, const ZeroTester& tester);

/// Parallelism of the torsion of bar-nabla under bar-nabla. Throws PreconditionError unless transitive.
[[nodiscard]] Verdict transitive_symmetry_check(const Algebroid& g, const TMConnection& nabla,
                                                const ZeroTester& tester);

/// curv(#X,#Y)Z = (bar_Z T)(X,Y) on frames.
[[nodiscard]] Verdict abba_identity(const Algebroid& g, const TMConnection& nabla, const ZeroTester& tester);
/// curv(V,W)Z = (bar_Z T)(tV,tW) on coordinate fields; t[b][i] is the splitting matrix.
[[nodiscard]] Verdict hodge_identity(const Algebroid& g, const TMConnection& nabla, const ExprMat& t,
                                     const ZeroTester& tester);

// ---- Transitive algebroids ------------------------------------------------------------------

/// nabla_V X = D_X tV + [tV, X] for a representation D of g on itself; t[b][i] maps d_i to g.
[[nodiscard]] TMConnection connection_from_rep(const Algebroid& g, const ExprMat& t, const GConnection& rep);

struct ReductiveResult {
  TMConnection nabla;
  /// Sub-verdicts: cartan, rep_recovered.
  Verdict post;
};

/// nabla_V X = t bar_X V + [tV, X]. Throws unless # t = id and the representation is flat.
[[nodiscard]] ReductiveResult reductive_connection(const Algebroid& g, const ExprMat& t, const GConnection& on_tm,
                                                   const ZeroTester& tester);

// ---- Riemannian structures ------------------------------------------------------------------

/// Endomorphism fields E[l][m] = E^l_m; the default basis is (E_ij)^l_m = s_mi d^l_j - s_mj d^l_i, i < j.
[[nodiscard]] std::vector<ExprMat> skew_frame(const TensorField& metric);

struct RiemannReport {
  TMConnection levi_civita;
  TensorField curvature;
  /// The Cartan algebroid TM + h inside J^1 TM, with frame d_i lifted by Levi-Civita first.
  Algebroid g;
  ExprMat t;
  GConnection rep_on_tm;
  TMConnection cartan;
  /// Sub-verdicts: h_skew, cartan, f3_identity, h_invariant, curvature_parallel, locally_symmetric.
  /// Pass iff curvature is h-invariant and parallel.
  Verdict verdict;
};

/// Throws WitnessError when the metric is degenerate at a sample point.
[[nodiscard]] RiemannReport riemann_pipeline(const TensorField& metric, const std::vector<ExprMat>& h_frame,
                                             const ZeroTester& tester);

// ---- Poisson structures ---------------------------------------------------------------------

struct PoissonReport {
  Algebroid g;
  /// The connection on T*M dual to the given one, as a TM-connection on g.
  TMConnection on_cotangent;
  /// Sub-verdicts: torsion_free, lemma_sx, flat, nabla_pi_parallel, p2_identity.
  Verdict verdict;
};

[[nodiscard]] PoissonReport poisson_report(const TensorField& pi, const TMConnection& nabla, const ZeroTester& tester);

// ---- Invariant calculus ---------------------------------------------------------------------
// A k-form with values in a representation E has k lower algebroid slots followed by one upper E slot.

/// D tau with the new lower algebroid slot appended last. Algebroid slots use on_g, TM slots on_tm,
/// other slots on_bundle. Throws PreconditionError unless each used connection is flat.
[[nodiscard]] TensorField fundamental_operator(const Algebroid& g, const TensorField& tau, const GConnection* on_g,
                                               const GConnection* on_tm, const GConnection* on_bundle,
                                               const ZeroTester& tester);

/// Koszul formula on frames for k <= 2. Throws PreconditionError for a non-flat representation.
[[nodiscard]] TensorField exterior_derivative(const GConnection& rep, const TensorField& theta,
                                              const ZeroTester& tester);

/// omega(X) = X.
[[nodiscard]] TensorField tautological_form(const Algebroid& g);
/// (omega ^ D theta)(X_0..X_k) = sum_i (-1)^i (D_{X_i} theta)(..X_i omitted..).
[[nodiscard]] TensorField wedge_omega(const TensorField& dtheta);
/// theta^{d omega}(X_0..X_k) = sum_{i<j} (-1)^{i+j+1} theta(d omega(X_i,X_j), ..); zero for k = 0.
[[nodiscard]] TensorField theta_domega(const TensorField& theta, const TensorField& domega);

// ---- Absolute parallelisms ------------------------------------------------------------------

struct Parallelism {
  Chart chart;
  LieAlgebra model;
  /// omega[a][i] = omega^a_i.
  ExprMat omega;
};

struct ParallelismReport {
  /// Omega[i][j][a] = Omega^a_{ij}.
  TensorField curvature;
  /// Gamma^k_{ij} = (omega^{-1})^k_a d_i omega^a_j, as gamma[i][j][k].
  TMConnection d;
  bool maurer_cartan = false;
  /// Sub-verdicts: d_flat, torsion_identity, theorem_c. Vanishing curvature is reported in maurer_cartan.
  Verdict verdict;
};

/// Throws WitnessError when omega is singular at a sample point.
[[nodiscard]] ParallelismReport parallelism_report(const Parallelism& p, const ZeroTester& tester);

// ---- Holonomy -------------------------------------------------------------------------------

using DMatrix = std::vector<std::vector<double>>;

struct HolonomyResult {
  DMatrix holonomy;
  DMatrix log_holonomy;
  /// R(d_i, d_j) at the base point as a matrix acting on component columns.
  DMatrix curvature;
  /// log H + h^2 R.
  DMatrix defect;
  double defect_norm = 0.0;
  /// defect_norm / |h^2 R|, or defect_norm when R vanishes.
  double relative_error = 0.0;
};

/// RK4 transport around the square p -> p + h e_i -> p + h e_i + h e_j -> p + h e_j -> p.
/// Throws PreconditionError if the loop leaves the chart box.
[[nodiscard]] HolonomyResult holonomy_check(const TMConnection& nabla, const std::vector<double>& point, int i, int j,
                                            double h, int steps = 64);

}  // namespace cartalg
