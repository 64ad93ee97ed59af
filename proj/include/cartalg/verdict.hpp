#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cartalg/expr.hpp"
#include "cartalg/zero_test.hpp"

namespace cartalg {

enum class Status : std::uint8_t { Pass, Fail, Undecidable };

[[nodiscard]] const char* to_string(Status s);

struct Witness {
  std::vector<double> point;
  /// Component indices of the failing entry, in the order documented by the check.
  std::vector<int> indices;
  double value = 0.0;
};

struct Verdict {
  std::string name;
  Status status = Status::Pass;
  DecisionPath path = DecisionPath::Symbolic;
  std::optional<Witness> witness;
  std::string detail;
  std::vector<Verdict> subs;

  [[nodiscard]] bool passed() const { return status == Status::Pass; }
  [[nodiscard]] const Verdict* find(const std::string& sub) const;

  static Verdict pass(std::string name, std::string detail = {});
  static Verdict fail(std::string name, std::string detail, std::optional<Witness> w = std::nullopt);
  /// Pass iff every sub-verdict passes; the first failing sub supplies the witness.
  static Verdict all_of(std::string name, std::vector<Verdict> subs);
};

/// One entry of a component-wise identity check.
struct Component {
  std::vector<int> indices;
  Expr value;
};

/// Checks that every component is zero; stops at the first failure.
[[nodiscard]] Verdict check_zero(std::string name, const ZeroTester& tester, const std::vector<Component>& comps);

}  // namespace cartalg
