#include "cartalg/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <utility>

#include "cartalg/errors.hpp"

namespace cartalg {

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::Sin: return "sin";
    case FuncKind::Cos: return "cos";
    case FuncKind::Tan: return "tan";
    case FuncKind::Exp: return "exp";
    case FuncKind::Log: return "log";
    case FuncKind::Sqrt: return "sqrt";
  }
  return "?";
}

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  std::uint64_t z = h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U));
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

int kind_rank(ExprKind k) {
  switch (k) {
    case ExprKind::Const: return 0;
    case ExprKind::Sym: return 1;
    case ExprKind::Func: return 2;
    case ExprKind::Pow: return 3;
    case ExprKind::Mul: return 4;
    case ExprKind::Add: return 5;
    case ExprKind::Neg: return 6;
    case ExprKind::Div: return 7;
  }
  return 8;
}

}  // namespace

struct ExprFactory {
  static Expr make(ExprNode n) {
    std::uint64_t h = mix(0, static_cast<std::uint64_t>(n.kind));
    std::size_t size = 1;
    switch (n.kind) {
      case ExprKind::Const:
        h = mix(h, static_cast<std::uint64_t>(n.value.num()));
        h = mix(h, static_cast<std::uint64_t>(n.value.den()));
        break;
      case ExprKind::Sym: h = mix(h, static_cast<std::uint64_t>(n.sym)); break;
      case ExprKind::Pow: h = mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(n.exponent))); break;
      case ExprKind::Func: h = mix(h, static_cast<std::uint64_t>(n.func)); break;
      default: break;
    }
    for (const auto& k : n.kids) {
      h = mix(h, k.hash());
      size += k.tree_size();
    }
    n.hash = h;
    n.size = size;
    return Expr(std::make_shared<const ExprNode>(std::move(n)));
  }

  static Expr node(ExprKind kind, std::vector<Expr> kids, bool canonical) {
    ExprNode n;
    n.kind = kind;
    n.canonical = canonical;
    n.kids = std::move(kids);
    return make(std::move(n));
  }

  static Expr pow_node(Expr base, int exponent, bool canonical) {
    ExprNode n;
    n.kind = ExprKind::Pow;
    n.canonical = canonical;
    n.exponent = exponent;
    n.kids.push_back(std::move(base));
    return make(std::move(n));
  }

  static Expr func_node(FuncKind f, Expr arg, bool canonical) {
    ExprNode n;
    n.kind = ExprKind::Func;
    n.canonical = canonical;
    n.func = f;
    n.kids.push_back(std::move(arg));
    return make(std::move(n));
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z{Rational(0)};
  return z;
}

}  // namespace

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(Rational value) {
  ExprNode n;
  n.kind = ExprKind::Const;
  n.value = value;
  *this = ExprFactory::make(std::move(n));
}

Expr::Expr(std::int64_t value) : Expr(Rational(value)) {}

Expr Expr::symbol(int index, std::string name) {
  ExprNode n;
  n.kind = ExprKind::Sym;
  n.sym = index;
  n.name = std::move(name);
  return ExprFactory::make(std::move(n));
}

Expr Expr::raw_neg(Expr e) { return ExprFactory::node(ExprKind::Neg, {std::move(e)}, false); }
Expr Expr::raw_add(std::vector<Expr> terms) { return ExprFactory::node(ExprKind::Add, std::move(terms), false); }
Expr Expr::raw_mul(std::vector<Expr> factors) { return ExprFactory::node(ExprKind::Mul, std::move(factors), false); }
Expr Expr::raw_div(Expr num, Expr den) {
  return ExprFactory::node(ExprKind::Div, {std::move(num), std::move(den)}, false);
}
Expr Expr::raw_pow(Expr base, int exponent) { return ExprFactory::pow_node(std::move(base), exponent, false); }
Expr Expr::raw_func(FuncKind f, Expr arg) { return ExprFactory::func_node(f, std::move(arg), false); }

ExprKind Expr::kind() const { return node_->kind; }
bool Expr::is_canonical() const { return node_->canonical; }
bool Expr::is_zero_literal() const { return node_->kind == ExprKind::Const && node_->value.is_zero(); }
bool Expr::is_one_literal() const { return node_->kind == ExprKind::Const && node_->value.is_one(); }
const Rational& Expr::value() const { return node_->value; }
int Expr::symbol_index() const { return node_->sym; }
const std::string& Expr::symbol_name() const { return node_->name; }
int Expr::exponent() const { return node_->exponent; }
FuncKind Expr::func() const { return node_->func; }
std::span<const Expr> Expr::children() const { return node_->kids; }
std::uint64_t Expr::hash() const { return node_->hash; }
std::size_t Expr::tree_size() const { return node_->size; }

int compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  const int ra = kind_rank(a.kind());
  const int rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case ExprKind::Const: {
      const auto c = a.value() <=> b.value();
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case ExprKind::Sym:
      if (a.symbol_index() != b.symbol_index()) return a.symbol_index() < b.symbol_index() ? -1 : 1;
      return a.symbol_name().compare(b.symbol_name()) < 0 ? -1 : (a.symbol_name() == b.symbol_name() ? 0 : 1);
    case ExprKind::Func:
      if (a.func() != b.func()) return a.func() < b.func() ? -1 : 1;
      return compare(a.children()[0], b.children()[0]);
    case ExprKind::Pow: {
      const int c = compare(a.children()[0], b.children()[0]);
      if (c != 0) return c;
      if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
      return 0;
    }
    default: {
      const auto ka = a.children();
      const auto kb = b.children();
      const std::size_t n = std::min(ka.size(), kb.size());
      for (std::size_t i = 0; i < n; ++i) {
        const int c = compare(ka[i], kb[i]);
        if (c != 0) return c;
      }
      if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
      return 0;
    }
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Canonical constructors. All inputs are assumed canonical.

namespace {

Expr combine_add(std::vector<Expr> terms);
Expr combine_mul(std::vector<Expr> factors);
Expr make_pow(const Expr& base, int n);
Expr mul_const(const Rational& c, const Expr& t);

/// Splits a canonical term into its rational coefficient and the remaining monomial.
std::pair<Rational, Expr> split_coef(const Expr& t) {
  if (t.kind() == ExprKind::Mul) {
    const auto kids = t.children();
    if (kids[0].kind() == ExprKind::Const) {
      if (kids.size() == 2) return {kids[0].value(), kids[1]};
      return {kids[0].value(), ExprFactory::node(ExprKind::Mul, {kids.begin() + 1, kids.end()}, true)};
    }
  }
  return {Rational(1), t};
}

Expr mul_const(const Rational& c, const Expr& t) {
  if (c.is_zero()) return zero_expr();
  if (c.is_one()) return t;
  switch (t.kind()) {
    case ExprKind::Const: return Expr(c * t.value());
    case ExprKind::Add: {
      std::vector<Expr> terms;
      terms.reserve(t.children().size());
      for (const auto& k : t.children()) terms.push_back(mul_const(c, k));
      return combine_add(std::move(terms));
    }
    case ExprKind::Mul: {
      auto [coef, rest] = split_coef(t);
      const Rational nc = c * coef;
      if (nc.is_one()) return rest;
      std::vector<Expr> kids{Expr(nc)};
      if (rest.kind() == ExprKind::Mul) {
        kids.insert(kids.end(), rest.children().begin(), rest.children().end());
      } else {
        kids.push_back(rest);
      }
      return ExprFactory::node(ExprKind::Mul, std::move(kids), true);
    }
    default: return ExprFactory::node(ExprKind::Mul, {Expr(c), t}, true);
  }
}

Expr combine_add(std::vector<Expr> terms) {
  Rational constant(0);
  std::vector<std::pair<Rational, Expr>> parts;
  parts.reserve(terms.size());
  std::function<void(const Expr&)> absorb = [&](const Expr& t) {
    switch (t.kind()) {
      case ExprKind::Const: constant += t.value(); break;
      case ExprKind::Add:
        for (const auto& k : t.children()) absorb(k);
        break;
      default: {
        auto [c, key] = split_coef(t);
        if (key.kind() == ExprKind::Add) {
          // c * (sum) with a rational c is distributed.
          for (const auto& k : key.children()) absorb(mul_const(c, k));
        } else {
          parts.emplace_back(c, std::move(key));
        }
      }
    }
  };
  for (const auto& t : terms) absorb(t);
  std::stable_sort(parts.begin(), parts.end(),
                   [](const auto& a, const auto& b) { return compare(a.second, b.second) < 0; });
  std::vector<Expr> out;
  out.reserve(parts.size() + 1);
  if (!constant.is_zero()) out.emplace_back(constant);
  for (std::size_t i = 0; i < parts.size();) {
    Rational c = parts[i].first;
    std::size_t j = i + 1;
    while (j < parts.size() && parts[j].second == parts[i].second) {
      c += parts[j].first;
      ++j;
    }
    if (!c.is_zero()) out.push_back(mul_const(c, parts[i].second));
    i = j;
  }
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out[0];
  return ExprFactory::node(ExprKind::Add, std::move(out), true);
}

Expr combine_mul(std::vector<Expr> factors) {
  Rational coef(1);
  std::vector<std::pair<Expr, int>> powers;
  std::function<void(const Expr&)> absorb = [&](const Expr& f) {
    switch (f.kind()) {
      case ExprKind::Const: coef *= f.value(); break;
      case ExprKind::Mul:
        for (const auto& k : f.children()) absorb(k);
        break;
      case ExprKind::Pow: powers.emplace_back(f.children()[0], f.exponent()); break;
      default: powers.emplace_back(f, 1);
    }
  };
  for (const auto& f : factors) absorb(f);
  if (coef.is_zero()) return zero_expr();
  std::stable_sort(powers.begin(), powers.end(),
                   [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
  std::vector<Expr> out;
  for (std::size_t i = 0; i < powers.size();) {
    int n = powers[i].second;
    std::size_t j = i + 1;
    while (j < powers.size() && powers[j].first == powers[i].first) {
      n += powers[j].second;
      ++j;
    }
    if (n != 0) {
      Expr p = make_pow(powers[i].first, n);
      if (p.kind() == ExprKind::Const) {
        coef *= p.value();
      } else {
        out.push_back(std::move(p));
      }
    }
    i = j;
  }
  if (coef.is_zero()) return zero_expr();
  if (out.empty()) return Expr(coef);
  if (out.size() == 1) return mul_const(coef, out[0]);
  if (!coef.is_one()) out.insert(out.begin(), Expr(coef));
  return ExprFactory::node(ExprKind::Mul, std::move(out), true);
}

Expr make_pow(const Expr& base, int n) {
  if (n == 0) return Expr(1);
  if (n == 1) return base;
  switch (base.kind()) {
    case ExprKind::Const:
      if (base.value().is_zero() && n < 0) return ExprFactory::pow_node(base, n, true);
      return Expr(base.value().pow(n));
    case ExprKind::Pow: {
      if (base.children()[0].kind() == ExprKind::Const) return ExprFactory::pow_node(base, n, true);
      return make_pow(base.children()[0], base.exponent() * n);
    }
    case ExprKind::Mul: {
      std::vector<Expr> kids;
      for (const auto& k : base.children()) kids.push_back(make_pow(k, n));
      return combine_mul(std::move(kids));
    }
    default: return ExprFactory::pow_node(base, n, true);
  }
}

Expr make_func(FuncKind f, const Expr& arg) {
  if (arg.kind() == ExprKind::Const) {
    const Rational& v = arg.value();
    switch (f) {
      case FuncKind::Sin:
      case FuncKind::Tan:
        if (v.is_zero()) return Expr(0);
        break;
      case FuncKind::Cos:
      case FuncKind::Exp:
        if (v.is_zero()) return Expr(1);
        break;
      case FuncKind::Log:
        if (v.is_one()) return Expr(0);
        break;
      case FuncKind::Sqrt: {
        if (v.is_negative()) break;
        auto isqrt = [](std::int64_t x) -> std::int64_t {
          auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(x))));
          while (r * r > x) --r;
          while ((r + 1) * (r + 1) <= x) ++r;
          return r * r == x ? r : -1;
        };
        const std::int64_t n = isqrt(v.num());
        const std::int64_t d = isqrt(v.den());
        if (n >= 0 && d > 0) return Expr(Rational(n, d));
        break;
      }
    }
  }
  return ExprFactory::func_node(f, arg, true);
}

}  // namespace

Expr canon(const Expr& e) {
  if (e.is_canonical()) return e;
  switch (e.kind()) {
    case ExprKind::Const:
    case ExprKind::Sym: return e;
    case ExprKind::Neg: return mul_const(Rational(-1), canon(e.children()[0]));
    case ExprKind::Add: {
      std::vector<Expr> kids;
      for (const auto& k : e.children()) kids.push_back(canon(k));
      return combine_add(std::move(kids));
    }
    case ExprKind::Mul: {
      std::vector<Expr> kids;
      for (const auto& k : e.children()) kids.push_back(canon(k));
      return combine_mul(std::move(kids));
    }
    case ExprKind::Div:
      return combine_mul({canon(e.children()[0]), make_pow(canon(e.children()[1]), -1)});
    case ExprKind::Pow: return make_pow(canon(e.children()[0]), e.exponent());
    case ExprKind::Func: return make_func(e.func(), canon(e.children()[0]));
  }
  return e;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero_literal()) return canon(b);
  if (b.is_zero_literal()) return canon(a);
  return combine_add({canon(a), canon(b)});
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero_literal()) return canon(a);
  return combine_add({canon(a), mul_const(Rational(-1), canon(b))});
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero_literal() || b.is_zero_literal()) return zero_expr();
  if (a.is_one_literal()) return canon(b);
  if (b.is_one_literal()) return canon(a);
  if (a.kind() == ExprKind::Const) return mul_const(a.value(), canon(b));
  if (b.kind() == ExprKind::Const) return mul_const(b.value(), canon(a));
  return combine_mul({canon(a), canon(b)});
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_one_literal()) return canon(a);
  return combine_mul({canon(a), make_pow(canon(b), -1)});
}

Expr Expr::operator-() const { return mul_const(Rational(-1), canon(*this)); }

Expr pow(const Expr& base, int exponent) { return make_pow(canon(base), exponent); }
Expr apply(FuncKind f, const Expr& arg) { return make_func(f, canon(arg)); }
Expr sin(const Expr& e) { return apply(FuncKind::Sin, e); }
Expr cos(const Expr& e) { return apply(FuncKind::Cos, e); }
Expr tan(const Expr& e) { return apply(FuncKind::Tan, e); }
Expr exp(const Expr& e) { return apply(FuncKind::Exp, e); }
Expr log(const Expr& e) { return apply(FuncKind::Log, e); }
Expr sqrt(const Expr& e) { return apply(FuncKind::Sqrt, e); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

class Differentiator {
public:
  explicit Differentiator(int coord) : coord_(coord) {}

  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
    Expr d = compute(e);
    memo_.emplace(e.node(), d);
    return d;
  }

private:
  Expr compute(const Expr& e) {
    const auto kids = e.children();
    switch (e.kind()) {
      case ExprKind::Const: return Expr(0);
      case ExprKind::Sym: return Expr(e.symbol_index() == coord_ ? 1 : 0);
      case ExprKind::Neg: return -(*this)(kids[0]);
      case ExprKind::Add: {
        std::vector<Expr> terms;
        for (const auto& k : kids) terms.push_back((*this)(k));
        return combine_add(std::move(terms));
      }
      case ExprKind::Mul: {
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < kids.size(); ++i) {
          Expr di = (*this)(kids[i]);
          if (di.is_zero_literal()) continue;
          std::vector<Expr> fs;
          for (std::size_t j = 0; j < kids.size(); ++j) fs.push_back(j == i ? di : canon(kids[j]));
          terms.push_back(combine_mul(std::move(fs)));
        }
        return combine_add(std::move(terms));
      }
      case ExprKind::Div: {
        const Expr a = canon(kids[0]);
        const Expr b = canon(kids[1]);
        const Expr da = (*this)(kids[0]);
        const Expr db = (*this)(kids[1]);
        return da / b - a * db * make_pow(b, -2);
      }
      case ExprKind::Pow: {
        const Expr b = canon(kids[0]);
        const Expr db = (*this)(kids[0]);
        if (db.is_zero_literal()) return Expr(0);
        return combine_mul({Expr(e.exponent()), make_pow(b, e.exponent() - 1), db});
      }
      case ExprKind::Func: {
        const Expr a = canon(kids[0]);
        const Expr da = (*this)(kids[0]);
        if (da.is_zero_literal()) return Expr(0);
        switch (e.func()) {
          case FuncKind::Sin: return make_func(FuncKind::Cos, a) * da;
          case FuncKind::Cos: return -(make_func(FuncKind::Sin, a) * da);
          case FuncKind::Tan: return make_pow(make_func(FuncKind::Cos, a), -2) * da;
          case FuncKind::Exp: return make_func(FuncKind::Exp, a) * da;
          case FuncKind::Log: return da * make_pow(a, -1);
          case FuncKind::Sqrt:
            return combine_mul({Expr(Rational(1, 2)), da, make_pow(make_func(FuncKind::Sqrt, a), -1)});
        }
      }
    }
    return Expr(0);
  }

  int coord_;
  std::unordered_map<const ExprNode*, Expr> memo_;
};

}  // namespace

Expr differentiate(const Expr& e, int coord) { return Differentiator(coord)(e); }

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_plain_atom(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Sym:
    case ExprKind::Func: return true;
    case ExprKind::Const: return !e.value().is_negative() && e.value().has_finite_decimal();
    default: return false;
  }
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, std::string& out, bool wrap) {
  if (wrap) out += '(';
  print(e, out);
  if (wrap) out += ')';
}

bool const_needs_parens(const Expr& e) {
  return e.kind() == ExprKind::Const && (e.value().is_negative() || !e.value().has_finite_decimal());
}

void print(const Expr& e, std::string& out) {
  const auto kids = e.children();
  switch (e.kind()) {
    case ExprKind::Const: out += e.value().to_string(); return;
    case ExprKind::Sym: out += e.symbol_name(); return;
    case ExprKind::Func:
      out += func_name(e.func());
      out += '(';
      print(kids[0], out);
      out += ')';
      return;
    case ExprKind::Neg: {
      out += '-';
      const ExprKind k = kids[0].kind();
      print_wrapped(kids[0], out,
                    k == ExprKind::Add || k == ExprKind::Mul || k == ExprKind::Div || const_needs_parens(kids[0]));
      return;
    }
    case ExprKind::Pow:
      print_wrapped(kids[0], out, !is_plain_atom(kids[0]));
      out += '^';
      out += std::to_string(e.exponent());
      return;
    case ExprKind::Div: {
      const ExprKind kn = kids[0].kind();
      print_wrapped(kids[0], out, kn == ExprKind::Add || const_needs_parens(kids[0]));
      out += '/';
      const ExprKind kd = kids[1].kind();
      print_wrapped(kids[1], out,
                    kd == ExprKind::Add || kd == ExprKind::Mul || kd == ExprKind::Div || const_needs_parens(kids[1]));
      return;
    }
    case ExprKind::Mul:
      for (std::size_t i = 0; i < kids.size(); ++i) {
        const ExprKind k = kids[i].kind();
        if (i == 0) {
          // A leading rational coefficient prints bare: "-2*x", "1/3*x" reparse to the same canonical value.
          print_wrapped(kids[i], out, k == ExprKind::Add || k == ExprKind::Mul);
        } else {
          out += '*';
          print_wrapped(kids[i], out,
                        k == ExprKind::Add || k == ExprKind::Mul || k == ExprKind::Div || const_needs_parens(kids[i]));
        }
      }
      return;
    case ExprKind::Add:
      for (std::size_t i = 0; i < kids.size(); ++i) {
        const Expr& k = kids[i];
        if (i == 0) {
          print_wrapped(k, out, k.kind() == ExprKind::Add);
          continue;
        }
        if (k.kind() == ExprKind::Neg) {
          out += " - ";
          print_wrapped(k.children()[0], out, k.children()[0].kind() == ExprKind::Add);
          continue;
        }
        if (k.is_canonical()) {
          // Canonical negative terms print with a binary minus.
          if (k.kind() == ExprKind::Const && k.value().is_negative()) {
            out += " - ";
            print(Expr(-k.value()), out);
            continue;
          }
          if (k.kind() == ExprKind::Mul && k.children()[0].kind() == ExprKind::Const &&
              k.children()[0].value().is_negative()) {
            out += " - ";
            print(mul_const(Rational(-1), k), out);
            continue;
          }
        }
        out += " + ";
        print_wrapped(k, out, k.kind() == ExprKind::Add || const_needs_parens(k));
      }
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Point evaluation

namespace {

class PointEvaluator {
public:
  explicit PointEvaluator(std::span<const double> p) : point_(p) {}

  double operator()(const Expr& e) {
    if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
    const double v = compute(e);
    if (!std::isfinite(v)) throw DomainError("non-finite value", to_string(e));
    memo_.emplace(e.node(), v);
    return v;
  }

private:
  double compute(const Expr& e) {
    const auto kids = e.children();
    switch (e.kind()) {
      case ExprKind::Const: return e.value().to_double();
      case ExprKind::Sym:
        if (e.symbol_index() < 0 || static_cast<std::size_t>(e.symbol_index()) >= point_.size()) {
          throw ShapeError("point has no coordinate " + e.symbol_name());
        }
        return point_[static_cast<std::size_t>(e.symbol_index())];
      case ExprKind::Neg: return -(*this)(kids[0]);
      case ExprKind::Add: {
        double s = 0;
        for (const auto& k : kids) s += (*this)(k);
        return s;
      }
      case ExprKind::Mul: {
        double p = 1;
        for (const auto& k : kids) p *= (*this)(k);
        return p;
      }
      case ExprKind::Div: {
        const double num = (*this)(kids[0]);
        const double den = (*this)(kids[1]);
        if (den == 0.0) throw DomainError("division by zero", to_string(e));
        return num / den;
      }
      case ExprKind::Pow: {
        const double b = (*this)(kids[0]);
        if (b == 0.0 && e.exponent() < 0) throw DomainError("division by zero", to_string(e));
        return std::pow(b, e.exponent());
      }
      case ExprKind::Func: {
        const double a = (*this)(kids[0]);
        switch (e.func()) {
          case FuncKind::Sin: return std::sin(a);
          case FuncKind::Cos: return std::cos(a);
          case FuncKind::Tan: return std::tan(a);
          case FuncKind::Exp: return std::exp(a);
          case FuncKind::Log:
            if (a <= 0.0) throw DomainError("log of non-positive value", to_string(e));
            return std::log(a);
          case FuncKind::Sqrt:
            if (a < 0.0) throw DomainError("sqrt of negative value", to_string(e));
            return std::sqrt(a);
        }
      }
    }
    return 0.0;
  }

  std::span<const double> point_;
  std::unordered_map<const ExprNode*, double> memo_;
};

}  // namespace

double eval(const Expr& e, std::span<const double> point) { return PointEvaluator(point)(e); }

}  // namespace cartalg
