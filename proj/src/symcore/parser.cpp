#include <cctype>
#include <limits>
#include <string>

#include "cartalg/chart.hpp"
#include "cartalg/errors.hpp"
#include "cartalg/expr.hpp"

namespace cartalg {

namespace {

class Parser {
public:
  Parser(std::string_view text, const Chart& chart) : text_(text), chart_(chart) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(Expr::raw_neg(term()));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms[0] : Expr::raw_add(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(unary());
      } else if (accept('/')) {
        Expr left = factors.size() == 1 ? factors[0] : Expr::raw_mul(std::move(factors));
        factors = {Expr::raw_div(std::move(left), unary())};
      } else {
        break;
      }
    }
    return factors.size() == 1 ? factors[0] : Expr::raw_mul(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) return Expr::raw_neg(unary());
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    skip_ws();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
      skip_ws();
    }
    const std::size_t start = pos_;
    long long n = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      n = n * 10 + (text_[pos_] - '0');
      if (n > std::numeric_limits<int>::max()) fail("exponent too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected integer exponent");
    if (pos_ < text_.size() && text_[pos_] == '.') fail("exponents must be integers");
    return Expr::raw_pow(std::move(base), static_cast<int>(negative ? -n : n));
  }

  Expr atom() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      const std::size_t frac = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == frac) fail("expected digits after '.'");
    }
    try {
      return Expr(Rational::parse(text_.substr(start, pos_ - start)));
    } catch (const std::overflow_error&) {
      pos_ = start;
      fail("numeric literal out of range");
    }
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    static constexpr std::pair<std::string_view, FuncKind> kFuncs[] = {
        {"sin", FuncKind::Sin}, {"cos", FuncKind::Cos}, {"tan", FuncKind::Tan},
        {"exp", FuncKind::Exp}, {"log", FuncKind::Log}, {"sqrt", FuncKind::Sqrt}};
    for (const auto& [fname, kind] : kFuncs) {
      if (name != fname) continue;
      if (!accept('(')) fail("expected '(' after " + std::string(fname));
      Expr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return Expr::raw_func(kind, std::move(arg));
    }
    if (auto idx = chart_.index_of(name)) return chart_.coord(*idx);
    throw UnknownIdentifierError(std::string(name));
  }

  std::string_view text_;
  const Chart& chart_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const Chart& chart) { return Parser(text, chart).parse(); }

}  // namespace cartalg
