#include <chrono>
#include <random>

#include "cartalg/cli.hpp"

namespace cartalg::cli {

using nlohmann::json;

namespace {

std::size_t u(int i) { return static_cast<std::size_t>(i); }

struct Timed {
  Verdict verdict;
  double ms = 0.0;
};

template <class F>
Timed timed(F f) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v = f();
  const auto t1 = std::chrono::steady_clock::now();
  return {std::move(v), std::chrono::duration<double, std::milli>(t1 - t0).count()};
}

Verdict renamed(Verdict v, std::string name) {
  v.name = std::move(name);
  return v;
}

struct Target {
  std::string label;
  Algebroid g;
  TMConnection nabla;
};

/// TM-connections on algebroids named by the document: its own connections on the algebroid, the Cartan
/// connection of a metric, and the dual of the parallelism connection.
std::vector<Target> targets(const Document& doc, const ZeroTester& tester) {
  std::vector<Target> out;
  for (const auto& c : doc.connections) {
    if (c.on == "algebroid") out.push_back({c.name, doc.g, c.nabla});
  }
  if (doc.metric) {
    try {
      const RiemannReport r = riemann_pipeline(*doc.metric, doc.h_frame, tester);
      out.push_back({"metric", r.g, r.cartan});
    } catch (const WitnessError& e) {
      throw SpecError("/metric", e.what(), Witness{e.point, e.indices, e.value});
    }
  }
  if (doc.parallelism) {
    const ParallelismReport p = parallelism_report(*doc.parallelism, tester);
    const int n = doc.chart.dim();
    Coeffs dual = zero_coeffs(n, n);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < n; ++a) {
        for (int k = 0; k < n; ++k) dual[u(i)][u(a)][u(k)] = p.d.gamma(a, i, k);
      }
    }
    out.push_back({"parallelism", Algebroid::tangent(doc.chart), TMConnection(doc.chart, std::move(dual), SlotTag::Algebroid)});
  }
  return out;
}

std::vector<Target> require_targets(const Document& doc, const ZeroTester& tester, const std::string& pipeline) {
  std::vector<Target> out = targets(doc, tester);
  if (out.empty()) {
    throw SpecError("/connections", "pipeline '" + pipeline +
                                        "' needs a connection on the algebroid, a metric or a parallelism");
  }
  return out;
}

std::vector<Timed> run_pipeline(const Document& doc, const std::string& pipeline, const ZeroTester& tester) {
  std::vector<Timed> out;
  if (pipeline == "cartan") {
    for (const auto& t : require_targets(doc, tester, pipeline)) {
      out.push_back(timed([&] {
        return Verdict::all_of("cartan:" + t.label,
                               {check_cartan(t.g, t.nabla, tester), oracle_agreement(t.g, t.nabla, tester)});
      }));
    }
  } else if (pipeline == "theorem-a") {
    for (const auto& t : require_targets(doc, tester, pipeline)) {
      out.push_back(timed([&] { return renamed(theorem_a(t.g, t.nabla, tester).verdict, "theorem-a:" + t.label); }));
    }
  } else if (pipeline == "transitive") {
    for (const auto& t : require_targets(doc, tester, pipeline)) {
      out.push_back(timed([&] {
        try {
          return renamed(transitive_symmetry_check(t.g, t.nabla, tester), "transitive:" + t.label);
        } catch (const PreconditionError& e) {
          throw SpecError("", e.what());
        }
      }));
    }
  } else if (pipeline == "riemann") {
    if (!doc.metric) throw SpecError("/metric", "pipeline 'riemann' needs a metric");
    out.push_back(timed([&] {
      try {
        return riemann_pipeline(*doc.metric, doc.h_frame, tester).verdict;
      } catch (const WitnessError& e) {
        throw SpecError(doc.spec.h_frame ? "/h_frame" : "/metric", e.what(), Witness{e.point, e.indices, e.value});
      }
    }));
  } else if (pipeline == "poisson") {
    if (!doc.poisson) throw SpecError("/poisson", "pipeline 'poisson' needs a Poisson tensor");
    std::vector<NamedConnection> on_tm;
    for (const auto& c : doc.connections) {
      if (c.on == "tangent") on_tm.push_back(c);
    }
    if (on_tm.empty()) on_tm.push_back({"flat", "tangent", TMConnection::trivial(doc.chart, doc.chart.dim(), SlotTag::TM)});
    for (const auto& c : on_tm) {
      out.push_back(timed([&] { return renamed(poisson_report(*doc.poisson, c.nabla, tester).verdict, "poisson:" + c.name); }));
    }
  } else if (pipeline == "geometry") {
    if (!doc.parallelism) throw SpecError("/parallelism", "pipeline 'geometry' needs a parallelism");
    out.push_back(timed([&] {
      try {
        return parallelism_report(*doc.parallelism, tester).verdict;
      } catch (const WitnessError& e) {
        throw SpecError("/parallelism/omega", e.what(), Witness{e.point, e.indices, e.value});
      }
    }));
  } else {
    throw SpecError("", "unknown pipeline '" + pipeline + "'");
  }
  return out;
}

TensorField combine(const TensorField& a, const TensorField& b, int sign) {
  TensorField out = a;
  for (std::size_t f = 0; f < a.size(); ++f) {
    const std::vector<int> idx = a.unflatten(f);
    out.at(idx) = sign > 0 ? a.at(idx) + b.at(idx) : a.at(idx) - b.at(idx);
  }
  return out;
}

/// Polynomial of degree <= 2 with small integer coefficients, about half the monomials present.
Expr random_polynomial(const Chart& c, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  Expr s;
  if (coin(rng) == 1) s += Expr(coef(rng));
  for (int i = 0; i < c.dim(); ++i) {
    if (coin(rng) == 1) s += Expr(coef(rng)) * c.coord(i);
    for (int j = i; j < c.dim(); ++j) {
      if (coin(rng) == 1) s += Expr(coef(rng)) * c.coord(i) * c.coord(j);
    }
  }
  return s;
}

TensorField random_form(const Chart& c, int r, std::mt19937_64& rng) {
  TensorField out(c, {{Variance::Lower, SlotTag::Algebroid, r}, {Variance::Upper, SlotTag::Algebroid, r}});
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) out.at({a, b}) = random_polynomial(c, rng);
  }
  return out;
}

/// Identities of the invariant calculus for a Cartan connection, on seeded random g-valued 1-forms.
Verdict calculus_checks(const Target& t, const ZeroTester& tester, std::uint64_t seed, int forms) {
  const GConnection bar = induced_rep_on_g(t.g, t.nabla);
  const TensorField omega = tautological_form(t.g);
  const TensorField domega = exterior_derivative(bar, omega, tester);
  std::vector<Verdict> subs;
  subs.push_back(fundamental_operator(t.g, omega, &bar, nullptr, nullptr, tester).check_zero("D_omega", tester));
  subs.push_back(combine(domega, torsion_g(bar), -1).check_zero("d_omega_torsion", tester));
  std::mt19937_64 rng(seed);
  std::vector<Verdict> d2;
  std::vector<Verdict> dtheta;
  for (int k = 0; k < forms; ++k) {
    const TensorField theta = random_form(t.g.chart(), t.g.rank(), rng);
    const TensorField d1 = exterior_derivative(bar, theta, tester);
    d2.push_back(exterior_derivative(bar, d1, tester).check_zero("form_" + std::to_string(k), tester));
    const TensorField dt = fundamental_operator(t.g, theta, &bar, nullptr, nullptr, tester);
    const TensorField rhs = combine(wedge_omega(dt), theta_domega(theta, domega), 1);
    dtheta.push_back(combine(d1, rhs, -1).check_zero("form_" + std::to_string(k), tester));
  }
  subs.push_back(Verdict::all_of("d_squared", std::move(d2)));
  subs.push_back(Verdict::all_of("d_theta", std::move(dtheta)));
  return Verdict::all_of("calculus", std::move(subs));
}

std::vector<Timed> run_identities_on(const Document& doc, const ZeroTester& tester, std::uint64_t seed, int forms) {
  std::vector<Timed> out;
  std::uint64_t salt = 0;
  for (const auto& t : require_targets(doc, tester, "identities")) {
    const std::uint64_t form_seed = seed + 0x9e3779b97f4a7c15ULL * ++salt;
    out.push_back(timed([&] {
      std::vector<Verdict> subs;
      subs.push_back(check_anchor_equivariance(t.g, t.nabla, tester));
      subs.back().name = "anchor_equivariance";
      const GConnection bar = induced_rep_on_g(t.g, t.nabla);
      subs.push_back(dual_identities(bar, tester));
      if (is_flat(bar, tester).passed()) subs.push_back(scorch_check(bar, tester));
      subs.push_back(oracle_agreement(t.g, t.nabla, tester));
      const Verdict cartan = check_cartan(t.g, t.nabla, tester);
      if (cartan.passed()) {
        subs.push_back(calculus_checks(t, tester, form_seed, forms));
      } else {
        Verdict skip = Verdict::pass("calculus", "skipped: the connection is not Cartan");
        subs.push_back(std::move(skip));
      }
      return Verdict::all_of("identities:" + t.label, std::move(subs));
    }));
  }
  return out;
}

json witness_json(const Witness& w) { return {{"point", w.point}, {"indices", w.indices}, {"value", w.value}}; }

ZeroTester make_tester(const GeometrySpec& spec, const Options& opts, std::uint64_t& seed) {
  seed = opts.seed_given ? opts.seed : spec.seed.value_or(0);
  ZeroOptions zo;
  zo.samples = opts.samples;
  zo.eps_abs = opts.tol;
  zo.eps_rel = opts.tol;
  zo.seed = seed;
  // The tester only needs the chart; building it from the spec keeps input errors located.
  std::vector<Interval> box;
  for (const auto& [lo, hi] : spec.chart.box) box.push_back({Rational::parse(lo), Rational::parse(hi)});
  return ZeroTester(Chart(spec.chart.coordinates, std::move(box)), zo);
}

json envelope(const std::string& command, const Options& opts) {
  json r = json::object();
  r["tool"] = kToolName;
  r["version"] = kToolVersion;
  r["command"] = command;
  r["samples"] = opts.samples;
  r["tol"] = opts.tol;
  return r;
}

RunResult finish(json report, const std::vector<Timed>& checks, const Options& opts) {
  bool ok = true;
  json arr = json::array();
  for (const auto& c : checks) {
    json v = verdict_json(c.verdict);
    if (opts.timing) v["elapsed_ms"] = c.ms;
    arr.push_back(std::move(v));
    ok = ok && c.verdict.passed();
  }
  report["status"] = ok ? "pass" : "fail";
  report["checks"] = std::move(arr);
  return {ok ? 0 : 1, std::move(report)};
}

RunResult error_result(json report, const std::string& kind, const std::string& path, const std::string& message,
                       const std::optional<Witness>& w = std::nullopt) {
  report["status"] = "error";
  json e = {{"kind", kind}, {"path", path}, {"message", message}};
  if (w) e["witness"] = witness_json(*w);
  report["error"] = std::move(e);
  return {2, std::move(report)};
}

/// Loads, instantiates and runs `body`, mapping every input error to exit code 2.
template <class Body>
RunResult guarded(const std::string& command, const std::string& file, const Options& opts, Body body) {
  json report = envelope(command, opts);
  try {
    const GeometrySpec spec = load_spec(file);
    std::uint64_t seed = 0;
    const ZeroTester tester = make_tester(spec, opts, seed);
    report["document"] = spec.name;
    report["seed"] = seed;
    return body(spec, tester, seed, report);
  } catch (const SpecError& e) {
    return error_result(std::move(report), "input", e.path, e.what(), e.witness);
  } catch (const WitnessError& e) {
    return error_result(std::move(report), "input", "", e.what(), Witness{e.point, e.indices, e.value});
  } catch (const Error& e) {
    return error_result(std::move(report), "input", "", e.what());
  } catch (const InternalConsistencyError& e) {
    return error_result(std::move(report), "internal", "", e.what());
  }
}

int plane_index(const Chart& c, const std::string& s, const std::string& flag) {
  if (auto k = c.index_of(s)) return *k;
  try {
    std::size_t used = 0;
    const int k = std::stoi(s, &used);
    if (used == s.size() && k >= 0 && k < c.dim()) return k;
  } catch (const std::exception&) {
  }
  throw SpecError("", flag + ": '" + s + "' is neither a coordinate name nor an index below " + std::to_string(c.dim()));
}

}  // namespace

json verdict_json(const Verdict& v) {
  json j = {{"name", v.name}, {"status", to_string(v.status)}, {"path", to_string(v.path)}};
  if (!v.detail.empty()) j["detail"] = v.detail;
  if (v.witness) j["witness"] = witness_json(*v.witness);
  if (!v.subs.empty()) {
    json subs = json::array();
    for (const auto& s : v.subs) subs.push_back(verdict_json(s));
    j["subs"] = std::move(subs);
  }
  return j;
}

std::vector<Verdict> pipeline_checks(const Document& doc, const std::string& pipeline, const ZeroTester& tester) {
  std::vector<Verdict> out;
  for (auto& t : run_pipeline(doc, pipeline, tester)) out.push_back(std::move(t.verdict));
  return out;
}

std::vector<Verdict> identity_checks(const Document& doc, const ZeroTester& tester, std::uint64_t seed, int forms) {
  std::vector<Verdict> out;
  for (auto& t : run_identities_on(doc, tester, seed, forms)) out.push_back(std::move(t.verdict));
  return out;
}

RunResult run_validate(const std::string& file, const Options& opts) {
  return guarded("validate", file, opts, [&](const GeometrySpec& spec, const ZeroTester& tester, std::uint64_t, json report) {
    std::vector<Timed> checks;
    Document doc;
    try {
      doc = instantiate(spec, tester);
    } catch (const SpecError& e) {
      // A builder rejected an object at a sample point: that is a failed axiom, not malformed input.
      if (!e.witness) throw;
      Verdict v = Verdict::fail("build" + e.path, e.what(), e.witness);
      return finish(std::move(report), {{std::move(v), 0.0}}, opts);
    }
    checks.push_back(timed([&] { return renamed(validate(doc.g, tester), "algebroid:" + doc.algebroid_source); }));
    if (doc.metric) {
      checks.push_back(timed([&] {
        try {
          (void)riemann_pipeline(*doc.metric, doc.h_frame, tester);
          return Verdict::pass("metric", "symmetric and nondegenerate on the sample box");
        } catch (const WitnessError& e) {
          return Verdict::fail("metric", e.what(), Witness{e.point, e.indices, e.value});
        }
      }));
    }
    if (doc.parallelism) {
      checks.push_back(timed([&] {
        try {
          (void)parallelism_report(*doc.parallelism, tester);
          return Verdict::pass("parallelism", "omega is invertible on the sample box");
        } catch (const WitnessError& e) {
          return Verdict::fail("parallelism", e.what(), Witness{e.point, e.indices, e.value});
        }
      }));
    }
    return finish(std::move(report), checks, opts);
  });
}

RunResult run_check(const std::string& file, const std::optional<std::string>& pipeline, const Options& opts) {
  return guarded("check", file, opts, [&](const GeometrySpec& spec, const ZeroTester& tester, std::uint64_t, json report) {
    const Document doc = instantiate(spec, tester);
    std::vector<std::string> names;
    if (pipeline) {
      names.push_back(*pipeline);
    } else {
      names = spec.run;
    }
    if (names.empty()) throw SpecError("/run", "no pipeline given on the command line or in the document");
    report["pipelines"] = names;
    std::vector<Timed> checks;
    for (const auto& p : names) {
      for (auto& t : run_pipeline(doc, p, tester)) checks.push_back(std::move(t));
    }
    return finish(std::move(report), checks, opts);
  });
}

RunResult run_identities(const std::string& file, const Options& opts, int forms) {
  return guarded("identities", file, opts,
                 [&](const GeometrySpec& spec, const ZeroTester& tester, std::uint64_t seed, json report) {
                   const Document doc = instantiate(spec, tester);
                   report["forms"] = forms;
                   return finish(std::move(report), run_identities_on(doc, tester, seed, forms), opts);
                 });
}

RunResult run_holonomy(const std::string& file, const HolonomyRequest& req, const Options& opts) {
  return guarded("holonomy", file, opts, [&](const GeometrySpec& spec, const ZeroTester& tester, std::uint64_t, json report) {
    const Document doc = instantiate(spec, tester);
    std::optional<TMConnection> nabla;
    std::string label = req.connection;
    if (label.empty()) {
      if (doc.metric) {
        label = "levi_civita";
      } else {
        for (const auto& c : doc.connections) {
          if (c.on == "tangent") {
            if (!label.empty()) throw SpecError("/connections", "several connections on TM: choose one with --connection");
            label = c.name;
          }
        }
      }
    }
    if (label == "levi_civita" && doc.metric) {
      nabla = levi_civita(*doc.metric);
    } else {
      for (const auto& c : doc.connections) {
        if (c.name == label) nabla = c.nabla;
      }
    }
    if (!nabla) throw SpecError("/connections", label.empty() ? "no connection on TM to transport with" : "no connection named '" + label + "'");
    const int i = plane_index(doc.chart, req.plane_i, "--plane");
    const int j = plane_index(doc.chart, req.plane_j, "--plane");
    HolonomyResult h;
    const Timed t = timed([&] {
      try {
        h = holonomy_check(*nabla, req.point, i, j, req.side, req.steps);
      } catch (const Error& e) {
        throw SpecError("", e.what());
      }
      Verdict v = h.relative_error <= req.max_relative_error
                      ? Verdict::pass("holonomy", "numeric RK4 transport")
                      : Verdict::fail("holonomy", "relative error above the threshold",
                                      Witness{req.point, {i, j}, h.relative_error});
      v.path = DecisionPath::Probabilistic;
      return v;
    });
    report["holonomy"] = {{"connection", label},        {"point", req.point},
                          {"plane", {i, j}},            {"side", req.side},
                          {"steps", req.steps},         {"holonomy", h.holonomy},
                          {"log_holonomy", h.log_holonomy}, {"curvature", h.curvature},
                          {"defect", h.defect},         {"defect_norm", h.defect_norm},
                          {"relative_error", h.relative_error}, {"max_relative_error", req.max_relative_error}};
    return finish(std::move(report), {t}, opts);
  });
}

}  // namespace cartalg::cli
