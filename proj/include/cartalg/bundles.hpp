#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cartalg/chart.hpp"
#include "cartalg/expr.hpp"
#include "cartalg/linalg.hpp"
#include "cartalg/verdict.hpp"

namespace cartalg {

/// Which frame a section's components refer to.
enum class Frame : std::uint8_t { Tangent, Cotangent, Algebroid, Other };

struct Section {
  Chart chart;
  Frame frame = Frame::Tangent;
  ExprVec comps;

  [[nodiscard]] int rank() const { return static_cast<int>(comps.size()); }
  [[nodiscard]] const Expr& operator[](int a) const { return comps.at(static_cast<std::size_t>(a)); }

  static Section zero(const Chart& chart, Frame frame, int rank);
  /// The a-th frame element.
  static Section basis(const Chart& chart, Frame frame, int rank, int a);
  /// Parses component strings against the chart.
  static Section parse(const Chart& chart, Frame frame, const std::vector<std::string>& comps);
};

[[nodiscard]] Section operator+(const Section& a, const Section& b);
[[nodiscard]] Section operator-(const Section& a, const Section& b);
[[nodiscard]] Section operator*(const Expr& f, const Section& s);

enum class Variance : std::uint8_t { Upper, Lower };
/// Bundle is any other explicitly trivialized vector bundle.
enum class SlotTag : std::uint8_t { TM, Algebroid, Bundle };

struct Slot {
  Variance variance = Variance::Upper;
  SlotTag tag = SlotTag::TM;
  int dim = 0;
  friend bool operator==(const Slot&, const Slot&) = default;
};

struct Symmetry {
  int first = 0;
  int second = 1;
  bool antisymmetric = false;
};

/// Multi-indexed field of expressions; components are stored row-major.
class TensorField {
public:
  TensorField() = default;
  TensorField(Chart chart, std::vector<Slot> slots);

  [[nodiscard]] const Chart& chart() const { return chart_; }
  [[nodiscard]] const std::vector<Slot>& slots() const { return slots_; }
  [[nodiscard]] std::size_t order() const { return slots_.size(); }
  [[nodiscard]] std::size_t size() const { return data_.size(); }
  [[nodiscard]] const std::vector<Expr>& data() const { return data_; }

  [[nodiscard]] const Expr& at(std::span<const int> idx) const;
  Expr& at(std::span<const int> idx);
  [[nodiscard]] const Expr& at(std::initializer_list<int> idx) const { return at(std::span(idx.begin(), idx.size())); }
  Expr& at(std::initializer_list<int> idx) { return at(std::span(idx.begin(), idx.size())); }

  /// Multi-index of a flat position.
  [[nodiscard]] std::vector<int> unflatten(std::size_t flat) const;

  void declare(Symmetry s);
  [[nodiscard]] const std::vector<Symmetry>& symmetries() const { return symmetries_; }
  /// Checks every declared symmetry with the zero test.
  [[nodiscard]] Verdict verify_symmetries(const ZeroTester& tester) const;

  /// Every component zero; the witness lists the multi-index.
  [[nodiscard]] Verdict check_zero(const std::string& name, const ZeroTester& tester) const;

  [[nodiscard]] TensorField map(const std::function<Expr(const Expr&)>& f) const;

  friend TensorField operator+(const TensorField& a, const TensorField& b);
  friend TensorField operator-(const TensorField& a, const TensorField& b);
  friend TensorField operator*(const Expr& f, const TensorField& t);

private:
  [[nodiscard]] std::size_t flat(std::span<const int> idx) const;

  Chart chart_;
  std::vector<Slot> slots_;
  std::vector<Expr> data_;
  std::vector<Symmetry> symmetries_;
};

/// Calls f(multi_index) for every index tuple of the given dimensions.
void for_each_index(std::span<const int> dims, const std::function<void(std::span<const int>)>& f);

[[nodiscard]] Slot tm_upper(const Chart& c);
[[nodiscard]] Slot tm_lower(const Chart& c);

/// Builds a rank-2 TM tensor from a matrix; `upper` picks the variance of both slots.
[[nodiscard]] TensorField tensor2(const Chart& chart, const ExprMat& m, Variance v0, Variance v1);
[[nodiscard]] ExprMat matrix_of(const TensorField& t);

/// Jacobi-Lie bracket of vector fields.
[[nodiscard]] Section vf_bracket(const Section& v, const Section& w);
/// Directional derivative V(f).
[[nodiscard]] Expr directional(const Section& v, const Expr& f);
[[nodiscard]] TensorField scalar_field(const Chart& chart, const Expr& f);

/// Lie derivative of a tensor with only TM slots.
[[nodiscard]] TensorField lie_derivative(const Section& v, const TensorField& t);
/// Contracts an upper and a lower slot of the same tag.
[[nodiscard]] TensorField tensor_contract(const TensorField& t, int upper, int lower);
[[nodiscard]] TensorField tensor_product(const TensorField& a, const TensorField& b);

[[nodiscard]] TensorField as_tensor(const Section& s);

}  // namespace cartalg
