#include "cartalg/rational.hpp"

#include <cctype>
#include <numeric>
#include <stdexcept>

namespace cartalg {

__extension__ using i128 = __int128;

namespace {

std::int64_t checked(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
  return static_cast<std::int64_t>(v);
}

Rational make(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("rational division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 a = n < 0 ? -n : n;
  i128 b = d;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  return {checked(n), checked(d)};
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("rational division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n, d);
  num_ = g > 1 ? n / g : n;
  den_ = g > 1 ? d / g : d;
}

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational n = parse(text.substr(i, slash - i));
    Rational d = parse(text.substr(slash + 1));
    Rational r = n / d;
    return negative ? -r : r;
  }
  i128 n = 0;
  i128 d = 1;
  bool seen_dot = false;
  bool seen_digit = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !seen_dot) {
      seen_dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("bad rational literal '" + std::string(text) + "'");
    }
    seen_digit = true;
    n = n * 10 + (c - '0');
    if (seen_dot) d *= 10;
    if (n > INT64_MAX || d > INT64_MAX) throw std::overflow_error("rational literal too long");
  }
  if (!seen_digit) throw std::invalid_argument("bad rational literal '" + std::string(text) + "'");
  return make(negative ? -n : n, d);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

Rational Rational::operator-() const {
  if (num_ == INT64_MIN) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 l = static_cast<i128>(a.num_) * b.den_;
  const i128 r = static_cast<i128>(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::pow(int exponent) const {
  if (exponent < 0) {
    if (num_ == 0) throw std::domain_error("rational 0 to a negative power");
    return Rational(1) / pow(-exponent);
  }
  Rational result(1);
  Rational base = *this;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e != 0) base *= base;
  }
  return result;
}

bool Rational::has_finite_decimal() const {
  std::int64_t d = den_;
  while (d % 2 == 0) d /= 2;
  while (d % 5 == 0) d /= 5;
  return d == 1;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  if (!has_finite_decimal()) return std::to_string(num_) + "/" + std::to_string(den_);
  // Scale to a power-of-ten denominator.
  int digits = 0;
  i128 scaled = num_ < 0 ? -static_cast<i128>(num_) : num_;
  i128 d = den_;
  i128 ten_pow = 1;
  while (ten_pow % d != 0) {
    ten_pow *= 10;
    ++digits;
  }
  scaled *= ten_pow / d;
  std::string s;
  i128 whole = scaled / ten_pow;
  i128 frac = scaled % ten_pow;
  s = std::to_string(static_cast<std::int64_t>(whole));
  std::string f = std::to_string(static_cast<std::int64_t>(frac));
  s += "." + std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
  return num_ < 0 ? "-" + s : s;
}

}  // namespace cartalg
