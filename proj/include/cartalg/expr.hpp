#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cartalg/rational.hpp"

namespace cartalg {

class Chart;

enum class ExprKind : std::uint8_t { Const, Sym, Neg, Add, Mul, Div, Pow, Func };
enum class FuncKind : std::uint8_t { Sin, Cos, Tan, Exp, Log, Sqrt };

[[nodiscard]] const char* func_name(FuncKind f);

class Expr;
struct ExprNode;

/// Immutable scalar expression over chart coordinates.
///
/// Values built through the arithmetic operators are kept in canonical form
/// (flattened, sorted, like terms collected, exact rational coefficients).
/// Trees produced by the parser are raw and keep their syntactic shape until
/// canon() is applied.
class Expr {
public:
  Expr();  // the constant 0
  Expr(Rational value);      // NOLINT(google-explicit-constructor)
  Expr(std::int64_t value);  // NOLINT(google-explicit-constructor)
  Expr(int value) : Expr(static_cast<std::int64_t>(value)) {}  // NOLINT(google-explicit-constructor)

  static Expr symbol(int index, std::string name);

  // Raw (non-canonical) constructors used by the parser.
  static Expr raw_neg(Expr e);
  static Expr raw_add(std::vector<Expr> terms);
  static Expr raw_mul(std::vector<Expr> factors);
  static Expr raw_div(Expr num, Expr den);
  static Expr raw_pow(Expr base, int exponent);
  static Expr raw_func(FuncKind f, Expr arg);

  [[nodiscard]] ExprKind kind() const;
  [[nodiscard]] bool is_canonical() const;
  [[nodiscard]] bool is_const() const { return kind() == ExprKind::Const; }
  [[nodiscard]] bool is_zero_literal() const;
  [[nodiscard]] bool is_one_literal() const;
  [[nodiscard]] const Rational& value() const;   // Const
  [[nodiscard]] int symbol_index() const;        // Sym
  [[nodiscard]] const std::string& symbol_name() const;
  [[nodiscard]] int exponent() const;            // Pow
  [[nodiscard]] FuncKind func() const;           // Func
  [[nodiscard]] std::span<const Expr> children() const;
  [[nodiscard]] std::uint64_t hash() const;
  /// Number of nodes in the tree, counting shared subtrees once per use.
  [[nodiscard]] std::size_t tree_size() const;

  [[nodiscard]] const ExprNode* node() const { return node_.get(); }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
  friend struct ExprFactory;
};

struct ExprNode {
  ExprKind kind = ExprKind::Const;
  bool canonical = true;
  FuncKind func = FuncKind::Sin;
  int exponent = 0;
  int sym = -1;
  std::string name;
  Rational value;
  std::vector<Expr> kids;
  std::uint64_t hash = 0;
  std::size_t size = 1;
};

/// Total structural order used for sorting canonical terms.
[[nodiscard]] int compare(const Expr& a, const Expr& b);

[[nodiscard]] Expr canon(const Expr& e);
[[nodiscard]] Expr pow(const Expr& base, int exponent);
[[nodiscard]] Expr apply(FuncKind f, const Expr& arg);
[[nodiscard]] Expr sin(const Expr& e);
[[nodiscard]] Expr cos(const Expr& e);
[[nodiscard]] Expr tan(const Expr& e);
[[nodiscard]] Expr exp(const Expr& e);
[[nodiscard]] Expr log(const Expr& e);
[[nodiscard]] Expr sqrt(const Expr& e);

/// Exact symbolic derivative with respect to coordinate `coord`. Result is canonical.
[[nodiscard]] Expr differentiate(const Expr& e, int coord);

/// Text in the expression grammar. Parse trees print back to an identical tree.
[[nodiscard]] std::string to_string(const Expr& e);

/// Value at a point; throws DomainError naming the offending subexpression.
[[nodiscard]] double eval(const Expr& e, std::span<const double> point);

/// Parses `text` against the coordinates of `chart`; returns the raw parse tree.
[[nodiscard]] Expr parse_expr(std::string_view text, const Chart& chart);

}  // namespace cartalg
