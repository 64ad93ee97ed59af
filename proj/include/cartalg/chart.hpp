#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cartalg/expr.hpp"
#include "cartalg/rational.hpp"

namespace cartalg {

struct Interval {
  Rational lo;
  Rational hi;
};

/// A coordinate chart: ordered coordinate names and a closed sample box.
class Chart {
public:
  Chart() = default;
  /// Throws PreconditionError on duplicate or reserved names, or an empty box.
  Chart(std::vector<std::string> names, std::vector<Interval> box);

  /// Chart with every coordinate sampled on the same interval.
  static Chart uniform(std::vector<std::string> names, Rational lo, Rational hi);

  [[nodiscard]] int dim() const { return static_cast<int>(names_.size()); }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
  [[nodiscard]] const std::vector<Interval>& box() const { return box_; }
  [[nodiscard]] const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] std::optional<int> index_of(std::string_view name) const;

  /// The coordinate function x^i.
  [[nodiscard]] Expr coord(int i) const;
  /// Parses and canonicalizes.
  [[nodiscard]] Expr expr(std::string_view text) const;

  [[nodiscard]] bool contains(const std::vector<double>& p) const;

  friend bool operator==(const Chart& a, const Chart& b);

private:
  std::vector<std::string> names_;
  std::vector<Interval> box_;
};

/// Throws ChartMismatchError unless the charts are equal.
void require_same_chart(const Chart& a, const Chart& b);

}  // namespace cartalg
