#pragma once

#include "cartalg/algebroid.hpp"
#include "cartalg/connections.hpp"

namespace cartalg {

/// A section of J^1 g in split form: prolongation of base plus a T*M (x) g correction.
/// correction[i][b] = phi^b_i, the g-component b of phi(d_i).
struct JetSection {
  Section base;
  ExprMat correction;
};

[[nodiscard]] JetSection jet_zero(const Algebroid& g);
/// (X, 0).
[[nodiscard]] JetSection prolong(const Algebroid& g, const Section& x);
[[nodiscard]] JetSection operator+(const JetSection& a, const JetSection& b);
[[nodiscard]] JetSection operator-(const JetSection& a, const JetSection& b);
/// f (X, phi) = (f X, f phi - df (x) X).
[[nodiscard]] JetSection scale(const Expr& f, const JetSection& j);

/// (kappa_X phi)(V) = [X, phi(V)] + phi([V, #X]).
[[nodiscard]] ExprMat kappa(const Algebroid& g, const Section& x, const ExprMat& phi);
/// Fiber bracket phi2 # phi1 - phi1 # phi2.
[[nodiscard]] ExprMat fiber_bracket(const Algebroid& g, const ExprMat& phi1, const ExprMat& phi2);
[[nodiscard]] JetSection jet_bracket(const Algebroid& g, const JetSection& a, const JetSection& b);

/// ad_{(X,phi)} Y = [X,Y] - phi(#Y).
[[nodiscard]] Section adjoint_action(const Algebroid& g, const JetSection& j, const Section& y);
/// J^1 #: (X, phi) -> (#X, rho phi), a jet of a vector field.
[[nodiscard]] JetSection jet_anchor(const Algebroid& g, const JetSection& j);

/// s(X) = (X, -nabla X).
[[nodiscard]] JetSection splitting_from_connection(const Algebroid& g, const TMConnection& nabla, const Section& x);
/// Correction part of [sX, sY] - s[X,Y]; the base part vanishes identically.
[[nodiscard]] ExprMat splitting_curvature(const Algebroid& g, const TMConnection& nabla, const Section& x,
                                          const Section& y);

}  // namespace cartalg
