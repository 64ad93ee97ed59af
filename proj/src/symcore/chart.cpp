#include "cartalg/chart.hpp"

#include <set>

#include "cartalg/errors.hpp"

namespace cartalg {

namespace {

bool is_reserved(const std::string& n) {
  static const std::set<std::string> reserved{"sin", "cos", "tan", "exp", "log", "sqrt"};
  return reserved.contains(n);
}

}  // namespace

Chart::Chart(std::vector<std::string> names, std::vector<Interval> box)
    : names_(std::move(names)), box_(std::move(box)) {
  if (names_.size() != box_.size()) throw PreconditionError("chart box must have one interval per coordinate");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw PreconditionError("empty coordinate name");
    if (is_reserved(n)) throw PreconditionError("coordinate name '" + n + "' is a reserved function name");
    if (!seen.insert(n).second) throw PreconditionError("duplicate coordinate name '" + n + "'");
  }
  for (std::size_t i = 0; i < box_.size(); ++i) {
    if (box_[i].hi < box_[i].lo) throw PreconditionError("empty sample interval for '" + names_[i] + "'");
  }
}

Chart Chart::uniform(std::vector<std::string> names, Rational lo, Rational hi) {
  std::vector<Interval> box(names.size(), Interval{lo, hi});
  return {std::move(names), std::move(box)};
}

std::optional<int> Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

Expr Chart::coord(int i) const { return Expr::symbol(i, name(i)); }

Expr Chart::expr(std::string_view text) const { return canon(parse_expr(text, *this)); }

bool Chart::contains(const std::vector<double>& p) const {
  if (p.size() != names_.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < box_[i].lo.to_double() || p[i] > box_[i].hi.to_double()) return false;
  }
  return true;
}

bool operator==(const Chart& a, const Chart& b) {
  if (a.names_ != b.names_) return false;
  for (std::size_t i = 0; i < a.box_.size(); ++i) {
    if (a.box_[i].lo != b.box_[i].lo || a.box_[i].hi != b.box_[i].hi) return false;
  }
  return true;
}

void require_same_chart(const Chart& a, const Chart& b) {
  if (!(a == b)) throw ChartMismatchError();
}

}  // namespace cartalg
