#include "cartalg/zero_test.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "cartalg/errors.hpp"

namespace cartalg {

const char* to_string(DecisionPath p) { return p == DecisionPath::Symbolic ? "symbolic" : "probabilistic"; }

std::vector<std::vector<double>> sample_box(const Chart& chart, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto unit = [&rng] { return static_cast<double>(rng() >> 11U) * 0x1.0p-53; };
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(count));
  for (auto& p : pts) {
    p.resize(static_cast<std::size_t>(chart.dim()));
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double lo = chart.box()[i].lo.to_double();
      const double hi = chart.box()[i].hi.to_double();
      p[i] = lo + (hi - lo) * unit();
    }
  }
  return pts;
}

BatchEvaluator::BatchEvaluator(std::shared_ptr<const std::vector<std::vector<double>>> points)
    : points_(std::move(points)) {}

const SampleValues& BatchEvaluator::operator()(const Expr& e) {
  if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second.second;
  SampleValues v = compute(e);
  return memo_.emplace(e.node(), std::make_pair(e, std::move(v))).first->second.second;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double finite_or_nan(double v) { return std::isfinite(v) ? v : kNaN; }

}  // namespace

SampleValues BatchEvaluator::compute(const Expr& e) {
  const std::size_t n = points_->size();
  SampleValues out{std::vector<double>(n), std::vector<double>(n)};
  const auto kids = e.children();
  switch (e.kind()) {
    case ExprKind::Const: {
      const double c = e.value().to_double();
      std::fill(out.value.begin(), out.value.end(), c);
      std::fill(out.magnitude.begin(), out.magnitude.end(), std::abs(c));
      return out;
    }
    case ExprKind::Sym: {
      const auto idx = static_cast<std::size_t>(e.symbol_index());
      for (std::size_t k = 0; k < n; ++k) {
        const auto& p = (*points_)[k];
        if (idx >= p.size()) throw ShapeError("sample point has no coordinate " + e.symbol_name());
        out.value[k] = p[idx];
        out.magnitude[k] = std::abs(p[idx]);
      }
      return out;
    }
    default: break;
  }
  // Map nodes are stable under rehash, so child references stay valid.
  std::vector<const SampleValues*> cp;
  cp.reserve(kids.size());
  for (const auto& k : kids) cp.push_back(&(*this)(k));
  const auto cv = [&cp](std::size_t i) -> const SampleValues& { return *cp[i]; };
  for (std::size_t k = 0; k < n; ++k) {
    double v = 0.0;
    double m = 0.0;
    switch (e.kind()) {
      case ExprKind::Neg:
        v = -cv(0).value[k];
        m = cv(0).magnitude[k];
        break;
      case ExprKind::Add:
        for (const auto* c : cp) {
          v += c->value[k];
          m += c->magnitude[k];
        }
        break;
      case ExprKind::Mul:
        v = 1.0;
        m = 1.0;
        for (const auto* c : cp) {
          v *= c->value[k];
          m *= c->magnitude[k];
        }
        break;
      case ExprKind::Div: {
        const double a = cv(0).value[k];
        const double b = cv(1).value[k];
        if (b == 0.0) {
          v = kNaN;
          break;
        }
        v = a / b;
        m = cv(0).magnitude[k] / std::abs(b) + std::abs(a) * cv(1).magnitude[k] / (b * b);
        break;
      }
      case ExprKind::Pow: {
        const double b = cv(0).value[k];
        const int p = e.exponent();
        if (p < 0) {
          if (b == 0.0) {
            v = kNaN;
            break;
          }
          v = std::pow(b, p);
          m = std::pow(std::abs(b), p) * (1.0 + std::abs(p) * cv(0).magnitude[k] / std::abs(b));
        } else {
          v = std::pow(b, p);
          m = std::pow(cv(0).magnitude[k], p);
        }
        break;
      }
      case ExprKind::Func: {
        const double a = cv(0).value[k];
        double d = 0.0;
        switch (e.func()) {
          case FuncKind::Sin:
            v = std::sin(a);
            d = std::cos(a);
            break;
          case FuncKind::Cos:
            v = std::cos(a);
            d = std::sin(a);
            break;
          case FuncKind::Tan:
            v = std::tan(a);
            d = 1.0 + v * v;
            break;
          case FuncKind::Exp:
            v = std::exp(a);
            d = v;
            break;
          case FuncKind::Log:
            v = a > 0.0 ? std::log(a) : kNaN;
            d = 1.0 / a;
            break;
          case FuncKind::Sqrt:
            v = a >= 0.0 ? std::sqrt(a) : kNaN;
            d = a > 0.0 ? 0.5 / v : 0.0;
            break;
        }
        m = std::abs(v) + std::abs(d) * cv(0).magnitude[k];
        break;
      }
      default: break;
    }
    out.value[k] = finite_or_nan(v);
    out.magnitude[k] = std::isnan(out.value[k]) ? kNaN : m;
  }
  return out;
}

ZeroTester::ZeroTester(Chart chart, ZeroOptions opts) : chart_(std::move(chart)), opts_(opts) {
  if (opts_.samples <= 0) throw PreconditionError("sample count must be positive");
  points_ = std::make_shared<const std::vector<std::vector<double>>>(sample_box(chart_, opts_.samples, opts_.seed));
}

ZeroResult ZeroTester::test(const Expr& e) const {
  BatchEvaluator cache(points_);
  return test(e, cache);
}

ZeroResult ZeroTester::test(const Expr& e, BatchEvaluator& cache) const {
  const Expr c = canon(e);
  ZeroResult r;
  if (c.is_zero_literal()) {
    r.zero = true;
    r.path = DecisionPath::Symbolic;
    r.valid_samples = 0;
    return r;
  }
  const SampleValues& sv = cache(c);
  // Scale from the largest top-level term, so cancellation between terms is tolerated.
  std::vector<double> scale_at(sv.magnitude);
  if (c.kind() == ExprKind::Add) {
    std::fill(scale_at.begin(), scale_at.end(), 0.0);
    for (const auto& t : c.children()) {
      const SampleValues& tv = cache(t);
      for (std::size_t k = 0; k < scale_at.size(); ++k) scale_at[k] = std::max(scale_at[k], tv.magnitude[k]);
    }
  }
  double scale = 0.0;
  int valid = 0;
  std::size_t worst = 0;
  double worst_abs = -1.0;
  for (std::size_t k = 0; k < sv.value.size(); ++k) {
    if (std::isnan(sv.value[k])) continue;
    ++valid;
    scale = std::max(scale, std::isnan(scale_at[k]) ? 0.0 : scale_at[k]);
    if (std::abs(sv.value[k]) > worst_abs) {
      worst_abs = std::abs(sv.value[k]);
      worst = k;
    }
  }
  if (valid == 0) throw UndecidableError("undecidable on box: every sample hits a domain violation in " + to_string(c));
  r.valid_samples = valid;
  r.scale = scale;
  r.path = c.kind() == ExprKind::Const ? DecisionPath::Symbolic : DecisionPath::Probabilistic;
  r.zero = c.kind() != ExprKind::Const && worst_abs <= opts_.eps_abs + opts_.eps_rel * scale;
  if (!r.zero) {
    r.witness = (*points_)[worst];
    r.value = sv.value[worst];
  }
  return r;
}

ZeroResult is_zero(const Expr& e, const Chart& chart, const ZeroOptions& opts) {
  return ZeroTester(chart, opts).test(e);
}

}  // namespace cartalg
