#include "cartalg/connections.hpp"

#include "cartalg/errors.hpp"

namespace cartalg {

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

Coeffs canonical(Coeffs c) {
  for (auto& m : c) {
    for (auto& row : m) {
      for (auto& e : row) e = canon(e);
    }
  }
  return c;
}

void check_shape(const Coeffs& c, int dirs, int rank, const char* what) {
  if (static_cast<int>(c.size()) != dirs) throw ShapeError(std::string(what) + ": wrong number of directions");
  for (const auto& m : c) {
    if (static_cast<int>(m.size()) != rank) throw ShapeError(std::string(what) + ": wrong bundle rank");
    for (const auto& row : m) {
      if (static_cast<int>(row.size()) != rank) throw ShapeError(std::string(what) + ": wrong bundle rank");
    }
  }
}

/// Multiplies, skipping literal zeros.
void add_product(Expr& acc, const Expr& a, const Expr& b) {
  if (a.is_zero_literal() || b.is_zero_literal()) return;
  acc += a * b;
}

}  // namespace

Coeffs zero_coeffs(int dirs, int rank) { return Coeffs(u(dirs), zeros(u(rank), u(rank))); }

TMConnection::TMConnection(Chart chart, Coeffs gamma, SlotTag target)
    : chart_(std::move(chart)), target_(target), gamma_(canonical(std::move(gamma))) {
  rank_ = gamma_.empty() ? 0 : static_cast<int>(gamma_[0].size());
  check_shape(gamma_, chart_.dim(), rank_, "connection coefficients");
  if (target_ == SlotTag::TM && rank_ != chart_.dim()) throw ShapeError("connection on TM must have rank n");
}

TMConnection TMConnection::trivial(const Chart& chart, int rank, SlotTag target) {
  return {chart, zero_coeffs(chart.dim(), rank), target};
}

GConnection::GConnection(Algebroid g, Coeffs a, SlotTag target)
    : g_(std::move(g)), target_(target), a_(canonical(std::move(a))) {
  rank_ = a_.empty() ? 0 : static_cast<int>(a_[0].size());
  if (a_.empty() && g_.rank() > 0) throw ShapeError("g-connection has no coefficients");
  check_shape(a_, g_.rank(), rank_, "g-connection coefficients");
  if (target_ == SlotTag::Algebroid && rank_ != g_.rank()) throw ShapeError("g-connection on g must have rank r");
  if (target_ == SlotTag::TM && rank_ != g_.dim()) throw ShapeError("g-connection on TM must have rank n");
}

Section cov_deriv_tm(const TMConnection& nabla, const Section& v, const Section& sigma) {
  require_same_chart(nabla.chart(), v.chart);
  require_same_chart(nabla.chart(), sigma.chart);
  if (v.rank() != nabla.dim() || sigma.rank() != nabla.rank()) throw ShapeError("cov_deriv_tm: shape mismatch");
  Section out = Section::zero(sigma.chart, sigma.frame, sigma.rank());
  for (int b = 0; b < nabla.rank(); ++b) {
    Expr s = directional(v, sigma[b]);
    for (int i = 0; i < nabla.dim(); ++i) {
      if (v[i].is_zero_literal()) continue;
      Expr inner;
      for (int a = 0; a < nabla.rank(); ++a) add_product(inner, nabla.gamma(i, a, b), sigma[a]);
      add_product(s, v[i], inner);
    }
    out.comps[u(b)] = s;
  }
  return out;
}

TensorField tensor_cov_deriv(const TMConnection& nabla, const TensorField& t) {
  require_same_chart(nabla.chart(), t.chart());
  if (nabla.target() != SlotTag::TM) throw ShapeError("tensor_cov_deriv needs a connection on TM");
  const int n = nabla.dim();
  for (const auto& s : t.slots()) {
    if (s.tag != SlotTag::TM) throw ShapeError("tensor_cov_deriv: non-TM slot present");
  }
  std::vector<Slot> slots = t.slots();
  slots.push_back(tm_lower(t.chart()));
  TensorField out(t.chart(), slots);
  for (std::size_t f = 0; f < t.size(); ++f) {
    std::vector<int> idx = t.unflatten(f);
    for (int k = 0; k < n; ++k) {
      Expr s = differentiate(t.data()[f], k);
      for (std::size_t p = 0; p < idx.size(); ++p) {
        const int orig = idx[p];
        for (int m = 0; m < n; ++m) {
          idx[p] = m;
          const Expr& tm = t.at(idx);
          if (tm.is_zero_literal()) continue;
          if (t.slots()[p].variance == Variance::Upper) {
            add_product(s, nabla.gamma(k, m, orig), tm);
          } else {
            const Expr& g = nabla.gamma(k, orig, m);
            if (!g.is_zero_literal()) s -= g * tm;
          }
        }
        idx[p] = orig;
      }
      std::vector<int> oidx = idx;
      oidx.push_back(k);
      out.at(oidx) = s;
    }
  }
  return out;
}

TensorField curvature_tm(const TMConnection& nabla) {
  const int n = nabla.dim();
  const int r = nabla.rank();
  const Slot bundle_lower{Variance::Lower, nabla.target(), r};
  const Slot bundle_upper{Variance::Upper, nabla.target(), r};
  TensorField out(nabla.chart(), {tm_lower(nabla.chart()), tm_lower(nabla.chart()), bundle_lower, bundle_upper});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
          Expr s = differentiate(nabla.gamma(j, a, b), i) - differentiate(nabla.gamma(i, a, b), j);
          for (int c = 0; c < r; ++c) {
            add_product(s, nabla.gamma(i, c, b), nabla.gamma(j, a, c));
            const Expr& x = nabla.gamma(j, c, b);
            const Expr& y = nabla.gamma(i, a, c);
            if (!x.is_zero_literal() && !y.is_zero_literal()) s -= x * y;
          }
          out.at({i, j, a, b}) = s;
        }
      }
    }
  }
  out.declare({0, 1, true});
  return out;
}

Verdict is_flat(const TMConnection& nabla, const ZeroTester& tester) {
  return curvature_tm(nabla).check_zero("flat", tester);
}

Section cov_deriv_g(const GConnection& nabla, const Section& x, const Section& sigma) {
  const Algebroid& g = nabla.algebroid();
  require_same_chart(g.chart(), x.chart);
  require_same_chart(g.chart(), sigma.chart);
  if (x.rank() != g.rank() || sigma.rank() != nabla.rank()) throw ShapeError("cov_deriv_g: shape mismatch");
  const Section v = anchor_apply(g, x);
  Section out = Section::zero(sigma.chart, sigma.frame, sigma.rank());
  for (int beta = 0; beta < nabla.rank(); ++beta) {
    Expr s = directional(v, sigma[beta]);
    for (int a = 0; a < g.rank(); ++a) {
      if (x[a].is_zero_literal()) continue;
      Expr inner;
      for (int alpha = 0; alpha < nabla.rank(); ++alpha) add_product(inner, nabla.A(a, alpha, beta), sigma[alpha]);
      add_product(s, x[a], inner);
    }
    out.comps[u(beta)] = s;
  }
  return out;
}

TensorField curvature_g(const GConnection& nabla) {
  const Algebroid& g = nabla.algebroid();
  const int r = g.rank();
  const int m = nabla.rank();
  const Slot alg{Variance::Lower, SlotTag::Algebroid, r};
  TensorField out(g.chart(), {alg, alg, {Variance::Lower, nabla.target(), m}, {Variance::Upper, nabla.target(), m}});
  for (int a = 0; a < r; ++a) {
    const Section va = g.anchor_column(a);
    for (int b = 0; b < r; ++b) {
      if (a == b) continue;
      const Section vb = g.anchor_column(b);
      for (int al = 0; al < m; ++al) {
        for (int be = 0; be < m; ++be) {
          Expr s = directional(va, nabla.A(b, al, be)) - directional(vb, nabla.A(a, al, be));
          for (int c = 0; c < m; ++c) {
            add_product(s, nabla.A(a, c, be), nabla.A(b, al, c));
            const Expr& x = nabla.A(b, c, be);
            const Expr& y = nabla.A(a, al, c);
            if (!x.is_zero_literal() && !y.is_zero_literal()) s -= x * y;
          }
          for (int d = 0; d < r; ++d) {
            const Expr& x = g.c(a, b, d);
            const Expr& y = nabla.A(d, al, be);
            if (!x.is_zero_literal() && !y.is_zero_literal()) s -= x * y;
          }
          out.at({a, b, al, be}) = s;
        }
      }
    }
  }
  out.declare({0, 1, true});
  return out;
}

Verdict is_flat(const GConnection& nabla, const ZeroTester& tester) {
  return curvature_g(nabla).check_zero("flat", tester);
}

TensorField gtensor_cov_deriv(const Algebroid& g, const GConnection* on_g, const GConnection* on_tm,
                              const TensorField& t, const GConnection* on_bundle) {
  require_same_chart(g.chart(), t.chart());
  const auto conn_for = [&](const Slot& s) -> const GConnection& {
    const GConnection* c = s.tag == SlotTag::Algebroid ? on_g : (s.tag == SlotTag::TM ? on_tm : on_bundle);
    if (c == nullptr) throw PreconditionError("gtensor_cov_deriv: no connection for a slot of this tensor");
    if (c->rank() != s.dim) throw ShapeError("gtensor_cov_deriv: slot dimension differs from connection rank");
    return *c;
  };
  for (const auto& s : t.slots()) (void)conn_for(s);
  std::vector<Slot> slots = t.slots();
  slots.push_back({Variance::Lower, SlotTag::Algebroid, g.rank()});
  TensorField out(t.chart(), slots);
  for (std::size_t f = 0; f < t.size(); ++f) {
    std::vector<int> idx = t.unflatten(f);
    for (int d = 0; d < g.rank(); ++d) {
      Expr s = directional(g.anchor_column(d), t.data()[f]);
      for (std::size_t p = 0; p < idx.size(); ++p) {
        const GConnection& c = conn_for(t.slots()[p]);
        const int orig = idx[p];
        for (int m = 0; m < c.rank(); ++m) {
          idx[p] = m;
          const Expr& tm = t.at(idx);
          if (tm.is_zero_literal()) continue;
          if (t.slots()[p].variance == Variance::Upper) {
            add_product(s, c.A(d, m, orig), tm);
          } else {
            const Expr& a = c.A(d, orig, m);
            if (!a.is_zero_literal()) s -= a * tm;
          }
        }
        idx[p] = orig;
      }
      std::vector<int> oidx = idx;
      oidx.push_back(d);
      out.at(oidx) = s;
    }
  }
  return out;
}

namespace {

void require_on_g(const GConnection& nabla, const char* what) {
  if (nabla.target() != SlotTag::Algebroid) throw PreconditionError(std::string(what) + ": connection target must be g");
}

void require_on_g(const Algebroid& g, const TMConnection& nabla, const char* what) {
  require_same_chart(g.chart(), nabla.chart());
  if (nabla.rank() != g.rank()) throw PreconditionError(std::string(what) + ": connection target must be g");
}

}  // namespace

GConnection dual_connection(const GConnection& nabla) {
  require_on_g(nabla, "dual_connection");
  const Algebroid& g = nabla.algebroid();
  const int r = g.rank();
  Coeffs a = zero_coeffs(r, r);
  for (int x = 0; x < r; ++x) {
    for (int y = 0; y < r; ++y) {
      for (int c = 0; c < r; ++c) a[u(x)][u(y)][u(c)] = nabla.A(y, x, c) + g.c(x, y, c);
    }
  }
  return {g, std::move(a), SlotTag::Algebroid};
}

TensorField torsion_g(const GConnection& nabla) {
  require_on_g(nabla, "torsion_g");
  const Algebroid& g = nabla.algebroid();
  const int r = g.rank();
  const Slot lower{Variance::Lower, SlotTag::Algebroid, r};
  TensorField t(g.chart(), {lower, lower, {Variance::Upper, SlotTag::Algebroid, r}});
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      for (int c = 0; c < r; ++c) t.at({a, b, c}) = nabla.A(a, b, c) - nabla.A(b, a, c) - g.c(a, b, c);
    }
  }
  t.declare({0, 1, true});
  return t;
}

GConnection along_anchor(const Algebroid& g, const TMConnection& nabla) {
  require_same_chart(g.chart(), nabla.chart());
  const int r = nabla.rank();
  Coeffs a = zero_coeffs(g.rank(), r);
  for (int x = 0; x < g.rank(); ++x) {
    for (int al = 0; al < r; ++al) {
      for (int be = 0; be < r; ++be) {
        Expr s;
        for (int i = 0; i < g.dim(); ++i) add_product(s, g.rho(i, x), nabla.gamma(i, al, be));
        a[u(x)][u(al)][u(be)] = s;
      }
    }
  }
  return {g, std::move(a), nabla.target()};
}

GConnection induced_rep_on_g(const Algebroid& g, const TMConnection& nabla) {
  require_on_g(g, nabla, "induced_rep_on_g");
  const int r = g.rank();
  Coeffs a = zero_coeffs(r, r);
  for (int x = 0; x < r; ++x) {
    for (int y = 0; y < r; ++y) {
      for (int c = 0; c < r; ++c) {
        Expr s = g.c(x, y, c);
        for (int i = 0; i < g.dim(); ++i) add_product(s, g.rho(i, y), nabla.gamma(i, x, c));
        a[u(x)][u(y)][u(c)] = s;
      }
    }
  }
  return {g, std::move(a), SlotTag::Algebroid};
}

GConnection induced_rep_on_tm(const Algebroid& g, const TMConnection& nabla) {
  require_on_g(g, nabla, "induced_rep_on_tm");
  const int n = g.dim();
  const int r = g.rank();
  Coeffs a = zero_coeffs(r, n);
  for (int x = 0; x < r; ++x) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Expr s = -differentiate(g.rho(k, x), j);
        for (int b = 0; b < r; ++b) add_product(s, nabla.gamma(j, x, b), g.rho(k, b));
        a[u(x)][u(j)][u(k)] = s;
      }
    }
  }
  return {g, std::move(a), SlotTag::TM};
}

Verdict anchor_equivariance(const Algebroid& g, const GConnection& on_g, const GConnection& on_tm,
                            const ZeroTester& tester) {
  std::vector<Component> comps;
  for (int a = 0; a < g.rank(); ++a) {
    const Section va = g.anchor_column(a);
    for (int b = 0; b < g.rank(); ++b) {
      for (int k = 0; k < g.dim(); ++k) {
        Expr s = -directional(va, g.rho(k, b));
        for (int c = 0; c < g.rank(); ++c) add_product(s, g.rho(k, c), on_g.A(a, b, c));
        for (int j = 0; j < g.dim(); ++j) {
          const Expr& x = g.rho(j, b);
          const Expr& y = on_tm.A(a, j, k);
          if (!x.is_zero_literal() && !y.is_zero_literal()) s -= x * y;
        }
        comps.push_back({{a, b, k}, s});
      }
    }
  }
  return check_zero("anchor_equivariance", tester, comps);
}

Verdict check_anchor_equivariance(const Algebroid& g, const TMConnection& nabla, const ZeroTester& tester) {
  return anchor_equivariance(g, induced_rep_on_g(g, nabla), induced_rep_on_tm(g, nabla), tester);
}

TensorField morphism_curvature(const ExprMat& phi, const Algebroid& g, const Algebroid& h, const ZeroTester& tester) {
  require_same_chart(g.chart(), h.chart());
  const int rg = g.rank();
  const int rh = h.rank();
  if (static_cast<int>(phi.size()) != rh) throw ShapeError("morphism matrix must have rank(h) rows");
  for (const auto& row : phi) {
    if (static_cast<int>(row.size()) != rg) throw ShapeError("morphism matrix must have rank(g) columns");
  }
  const auto image = [&](const Section& x) {
    Section y = h.zero_section();
    for (int c = 0; c < rh; ++c) {
      Expr s;
      for (int a = 0; a < rg; ++a) add_product(s, phi[u(c)][u(a)], x[a]);
      y.comps[u(c)] = s;
    }
    return y;
  };
  for (int a = 0; a < rg; ++a) {
    const Section lhs = anchor_apply(h, image(g.e(a)));
    for (int i = 0; i < g.dim(); ++i) {
      const ZeroResult z = tester.test(lhs[i] - g.rho(i, a));
      if (!z.zero) throw WitnessError("anchor incompatibility: #_h phi != #_g", {a, i}, z.witness, z.value);
    }
  }
  const Slot lower{Variance::Lower, SlotTag::Algebroid, rg};
  TensorField k(g.chart(), {lower, lower, {Variance::Upper, SlotTag::Bundle, rh}});
  for (int a = 0; a < rg; ++a) {
    for (int b = 0; b < rg; ++b) {
      const Section v = bracket(h, image(g.e(a)), image(g.e(b))) - image(bracket(g, g.e(a), g.e(b)));
      for (int c = 0; c < rh; ++c) k.at({a, b, c}) = v[c];
    }
  }
  k.declare({0, 1, true});
  return k;
}

TMConnection cotangent_dual(const TMConnection& nabla) {
  const int n = nabla.dim();
  const int r = nabla.rank();
  Coeffs g = zero_coeffs(n, r);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < r; ++a) {
      for (int b = 0; b < r; ++b) g[u(i)][u(a)][u(b)] = -nabla.gamma(i, b, a);
    }
  }
  return {nabla.chart(), std::move(g), SlotTag::Bundle};
}

TMConnection levi_civita(const TensorField& metric) {
  const Chart& chart = metric.chart();
  const int n = chart.dim();
  const auto& sl = metric.slots();
  if (sl.size() != 2 || sl[0] != tm_lower(chart) || sl[1] != tm_lower(chart)) {
    throw ShapeError("metric must be a lower-lower TM tensor");
  }
  const ExprMat gmat = matrix_of(metric);
  const ExprMat ginv = inverse(gmat);
  Coeffs gamma = zero_coeffs(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Expr s;
        for (int l = 0; l < n; ++l) {
          const Expr d = differentiate(gmat[u(j)][u(l)], i) + differentiate(gmat[u(i)][u(l)], j) -
                         differentiate(gmat[u(i)][u(j)], l);
          add_product(s, ginv[u(k)][u(l)], d);
        }
        gamma[u(i)][u(j)][u(k)] = Rational(1, 2) * s;
      }
    }
  }
  return {chart, std::move(gamma), SlotTag::TM};
}

Verdict dual_identities(const GConnection& nabla, const ZeroTester& tester) {
  require_on_g(nabla, "dual_identities");
  const Algebroid& g = nabla.algebroid();
  const int r = g.rank();
  const GConnection star = dual_connection(nabla);
  const GConnection back = dual_connection(star);
  std::vector<Component> dd;
  for (int x = 0; x < r; ++x) {
    for (int a = 0; a < r; ++a) {
      for (int b = 0; b < r; ++b) dd.push_back({{x, a, b}, back.A(x, a, b) - nabla.A(x, a, b)});
    }
  }
  const TensorField t = torsion_g(nabla);
  const TensorField ts = torsion_g(star);
  std::vector<Component> sign;
  for (std::size_t f = 0; f < t.size(); ++f) {
    const std::vector<int> idx = t.unflatten(f);
    sign.push_back({idx, t.at(idx) + ts.at(idx)});
  }
  const TensorField rc = curvature_g(nabla);
  const TensorField rs = curvature_g(star);
  const TensorField dt = gtensor_cov_deriv(g, &star, nullptr, ts);
  std::vector<Component> d2;
  for (int x = 0; x < r; ++x) {
    for (int y = 0; y < r; ++y) {
      for (int z = 0; z < r; ++z) {
        for (int b = 0; b < r; ++b) {
          d2.push_back({{x, y, z, b}, rc.at({x, y, z, b}) - dt.at({x, y, b, z}) - rs.at({x, z, y, b}) - rs.at({z, y, x, b})});
        }
      }
    }
  }
  return Verdict::all_of("duality", {check_zero("double_dual", tester, dd), check_zero("torsion_sign", tester, sign),
                                     check_zero("dual2", tester, d2)});
}

Verdict scorch_check(const GConnection& star, const ZeroTester& tester) {
  require_on_g(star, "scorch_check");
  if (!is_flat(star, tester).passed()) throw PreconditionError("scorch_check: connection is not flat");
  const Verdict flat = is_flat(dual_connection(star), tester);
  const Verdict par = gtensor_cov_deriv(star.algebroid(), &star, nullptr, torsion_g(star)).check_zero("DT", tester);
  if (flat.status == Status::Undecidable || par.status == Status::Undecidable) {
    Verdict v = Verdict::fail("scorch", "undecidable");
    v.status = Status::Undecidable;
    return v;
  }
  if (flat.passed() != par.passed()) return Verdict::fail("scorch", "flatness of the dual and parallel torsion disagree");
  Verdict v = Verdict::pass("scorch", flat.passed() ? "dual flat, torsion parallel" : "dual curved, torsion not parallel");
  v.path = flat.path == DecisionPath::Probabilistic || par.path == DecisionPath::Probabilistic ? DecisionPath::Probabilistic
                                                                                              : DecisionPath::Symbolic;
  return v;
}

}  // namespace cartalg
