#pragma once

#include <cmath>
#include <string>

#include "cartalg/errors.hpp"
#include "cartalg/linalg.hpp"
#include "cartalg/zero_test.hpp"

namespace cartalg::detail {

/// Throws WitnessError if det m is numerically zero at a sample point, or changes sign on the box
/// (then it vanishes somewhere; the sample of smallest |det| is reported).
inline void require_nondegenerate(const ExprMat& m, const ZeroTester& tester, const std::string& what) {
  const Expr d = det(m);
  const std::vector<double>* smallest = nullptr;
  double smallest_v = 0.0;
  bool pos = false;
  bool neg = false;
  for (const auto& p : tester.points()) {
    double v = 0.0;
    try {
      v = eval(d, p);
    } catch (const DomainError&) {
      continue;
    }
    if (!(std::abs(v) > tester.options().eps_abs)) throw WitnessError(what + " is degenerate", {}, p, v);
    pos = pos || v > 0;
    neg = neg || v < 0;
    if (smallest == nullptr || std::abs(v) < std::abs(smallest_v)) {
      smallest = &p;
      smallest_v = v;
    }
  }
  if (pos && neg) throw WitnessError(what + " is degenerate: determinant changes sign on the box", {}, *smallest, smallest_v);
}

}  // namespace cartalg::detail
