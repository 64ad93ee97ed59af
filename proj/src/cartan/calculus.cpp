#include "cartalg/cartan.hpp"
#include "cartalg/errors.hpp"

namespace cartalg {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

/// Form degree, after checking the slot layout.
int form_degree(const TensorField& theta, int rank) {
  const auto& sl = theta.slots();
  if (sl.empty() || sl.back().variance != Variance::Upper) throw ShapeError("form must end with one upper value slot");
  for (std::size_t k = 0; k + 1 < sl.size(); ++k) {
    if (sl[k].variance != Variance::Lower || sl[k].tag != SlotTag::Algebroid || sl[k].dim != rank) {
      throw ShapeError("form arguments must be lower algebroid slots");
    }
  }
  return static_cast<int>(sl.size()) - 1;
}

void require_flat(const GConnection& rep, const ZeroTester& tester) {
  const Verdict v = is_flat(rep, tester);
  if (!v.passed()) throw PreconditionError("g-tensor calculus requires representations: connection is not flat");
}

std::vector<Slot> form_slots(int k, int rank, const Slot& value) {
  std::vector<Slot> out(u(k), Slot{Variance::Lower, SlotTag::Algebroid, rank});
  out.push_back(value);
  return out;
}

/// idx without position p.
std::vector<int> omit(std::span<const int> idx, std::size_t p) {
  std::vector<int> out;
  for (std::size_t q = 0; q < idx.size(); ++q) {
    if (q != p) out.push_back(idx[q]);
  }
  return out;
}

/// idx without positions p < q, with `front` prepended.
std::vector<int> omit2(std::span<const int> idx, std::size_t p, std::size_t q, int front) {
  std::vector<int> out{front};
  for (std::size_t s = 0; s < idx.size(); ++s) {
    if (s != p && s != q) out.push_back(idx[s]);
  }
  return out;
}

}  // namespace

TensorField fundamental_operator(const Algebroid& g, const TensorField& tau, const GConnection* on_g,
                                 const GConnection* on_tm, const GConnection* on_bundle, const ZeroTester& tester) {
  bool need_g = false;
  bool need_tm = false;
  bool need_bundle = false;
  for (const auto& s : tau.slots()) {
    need_g = need_g || s.tag == SlotTag::Algebroid;
    need_tm = need_tm || s.tag == SlotTag::TM;
    need_bundle = need_bundle || s.tag == SlotTag::Bundle;
  }
  if (need_g && on_g != nullptr) require_flat(*on_g, tester);
  if (need_tm && on_tm != nullptr) require_flat(*on_tm, tester);
  if (need_bundle && on_bundle != nullptr) require_flat(*on_bundle, tester);
  return gtensor_cov_deriv(g, on_g, on_tm, tau, on_bundle);
}

TensorField exterior_derivative(const GConnection& rep, const TensorField& theta, const ZeroTester& tester) {
  const Algebroid& g = rep.algebroid();
  require_same_chart(g.chart(), theta.chart());
  const int r = g.rank();
  const int k = form_degree(theta, r);
  if (k > 2) throw PreconditionError("exterior_derivative supports forms of degree at most 2");
  const Slot value = theta.slots().back();
  if (value.tag != rep.target() || value.dim != rep.rank()) throw ShapeError("form values do not match the representation");
  require_flat(rep, tester);
  if (k == 2) {
    std::vector<Component> anti;
    for (int a = 0; a < r; ++a) {
      for (int b = a; b < r; ++b) {
        for (int be = 0; be < rep.rank(); ++be) anti.push_back({{a, b, be}, theta.at({a, b, be}) + theta.at({b, a, be})});
      }
    }
    if (!check_zero("antisymmetry", tester, anti).passed()) throw PreconditionError("form is not antisymmetric");
  }
  TensorField out(theta.chart(), form_slots(k + 1, r, value));
  for (std::size_t f = 0; f < out.size(); ++f) {
    const std::vector<int> idx = out.unflatten(f);
    const std::span<const int> args(idx.data(), idx.size() - 1);
    const int be = idx.back();
    Expr s;
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::vector<int> rest = omit(args, i);
      const int a = args[i];
      rest.push_back(be);
      Expr term = directional(g.anchor_column(a), theta.at(rest));
      for (int al = 0; al < rep.rank(); ++al) {
        rest.back() = al;
        const Expr& th = theta.at(rest);
        if (!th.is_zero_literal() && !rep.A(a, al, be).is_zero_literal()) term += rep.A(a, al, be) * th;
      }
      s += i % 2 == 0 ? term : -term;
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      for (std::size_t j = i + 1; j < args.size(); ++j) {
        Expr term;
        for (int d = 0; d < r; ++d) {
          const Expr& c = g.c(args[i], args[j], d);
          if (c.is_zero_literal()) continue;
          std::vector<int> rest = omit2(args, i, j, d);
          rest.push_back(be);
          term += c * theta.at(rest);
        }
        s += (i + j) % 2 == 0 ? term : -term;
      }
    }
    out.at(idx) = s;
  }
  return out;
}

TensorField tautological_form(const Algebroid& g) {
  const int r = g.rank();
  TensorField out(g.chart(), form_slots(1, r, {Variance::Upper, SlotTag::Algebroid, r}));
  for (int a = 0; a < r; ++a) out.at({a, a}) = Expr(1);
  return out;
}

TensorField wedge_omega(const TensorField& dtheta) {
  const auto& sl = dtheta.slots();
  if (sl.size() < 2) throw ShapeError("wedge_omega expects a derivative of a form");
  const int r = sl.back().dim;
  std::vector<Slot> theta_slots(sl.begin(), sl.end() - 1);
  TensorField theta_shape(dtheta.chart(), theta_slots);
  const int k = form_degree(theta_shape, r);
  TensorField out(dtheta.chart(), form_slots(k + 1, r, theta_slots.back()));
  for (std::size_t f = 0; f < out.size(); ++f) {
    const std::vector<int> idx = out.unflatten(f);
    const std::span<const int> args(idx.data(), idx.size() - 1);
    Expr s;
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::vector<int> rest = omit(args, i);
      rest.push_back(idx.back());
      rest.push_back(args[i]);
      const Expr& v = dtheta.at(rest);
      if (v.is_zero_literal()) continue;
      s += i % 2 == 0 ? v : -v;
    }
    out.at(idx) = s;
  }
  return out;
}

TensorField theta_domega(const TensorField& theta, const TensorField& domega) {
  const int r = domega.slots().front().dim;
  const int k = form_degree(theta, r);
  TensorField out(theta.chart(), form_slots(k + 1, r, theta.slots().back()));
  if (k == 0) return out;
  for (std::size_t f = 0; f < out.size(); ++f) {
    const std::vector<int> idx = out.unflatten(f);
    const std::span<const int> args(idx.data(), idx.size() - 1);
    Expr s;
    for (std::size_t i = 0; i < args.size(); ++i) {
      for (std::size_t j = i + 1; j < args.size(); ++j) {
        Expr term;
        for (int d = 0; d < r; ++d) {
          const Expr& w = domega.at({args[i], args[j], d});
          if (w.is_zero_literal()) continue;
          std::vector<int> rest = omit2(args, i, j, d);
          rest.push_back(idx.back());
          term += w * theta.at(rest);
        }
        s += (i + j + 1) % 2 == 0 ? term : -term;
      }
    }
    out.at(idx) = s;
  }
  return out;
}

}  // namespace cartalg
