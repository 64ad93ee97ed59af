#include <fstream>
#include <set>
#include <sstream>

#include "cartalg/cli.hpp"

namespace cartalg::cli {

using nlohmann::json;

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t k) { return path + "/" + std::to_string(k); }

const json& require_object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (allowed.count(key) == 0) throw SpecError(at(path, key), "unknown field");
  }
  return j;
}

const json& member(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) throw SpecError(at(path, key), "missing required field");
  return obj.at(key);
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) throw SpecError(path, "expected a string");
  return j.get<std::string>();
}

const json& array_at(const json& j, const std::string& path, int size) {
  if (!j.is_array()) throw SpecError(path, "expected an array");
  if (size >= 0 && static_cast<int>(j.size()) != size) {
    throw SpecError(path, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  }
  return j;
}

/// Validates each entry with `check`, which receives the text and its pointer.
template <class Check>
std::vector<std::string> strings(const json& j, const std::string& path, int size, Check check) {
  array_at(j, path, size);
  std::vector<std::string> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(string_at(j[k], at(path, k)));
    check(out.back(), at(path, k));
  }
  return out;
}

template <class Check>
StrMat matrix(const json& j, const std::string& path, int rows, int cols, Check check) {
  array_at(j, path, rows);
  StrMat out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(strings(j[k], at(path, k), cols, check));
  return out;
}

template <class Check>
StrTensor3 tensor3(const json& j, const std::string& path, int d0, int d1, int d2, Check check) {
  array_at(j, path, d0);
  StrTensor3 out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(matrix(j[k], at(path, k), d1, d2, check));
  return out;
}

void check_rational(const std::string& text, const std::string& path) {
  try {
    (void)Rational::parse(text);
  } catch (const Error& e) {
    throw SpecError(path, std::string("not a rational literal: ") + e.what());
  }
}

struct ExprCheck {
  const Chart* chart;
  void operator()(const std::string& text, const std::string& path) const {
    try {
      (void)parse_expr(text, *chart);
    } catch (const Error& e) {
      throw SpecError(path, e.what());
    }
  }
};

Chart make_chart(const ChartSpec& c) {
  std::vector<Interval> box;
  for (std::size_t k = 0; k < c.box.size(); ++k) {
    const Rational lo = Rational::parse(c.box[k].first);
    const Rational hi = Rational::parse(c.box[k].second);
    if (!(lo < hi)) throw SpecError(at("/chart/box", k), "empty interval");
    box.push_back({lo, hi});
  }
  try {
    return Chart(c.coordinates, std::move(box));
  } catch (const Error& e) {
    throw SpecError("/chart", e.what());
  }
}

ChartSpec parse_chart(const json& j) {
  const std::string path = "/chart";
  require_object(j, path, {"coordinates", "box"});
  ChartSpec c;
  c.coordinates = strings(member(j, path, "coordinates"), at(path, "coordinates"), -1,
                          [](const std::string& s, const std::string& p) {
                            if (s.empty()) throw SpecError(p, "empty coordinate name");
                          });
  if (c.coordinates.empty()) throw SpecError(at(path, "coordinates"), "a chart needs at least one coordinate");
  const int n = static_cast<int>(c.coordinates.size());
  const StrMat box = matrix(member(j, path, "box"), at(path, "box"), n, 2, check_rational);
  for (const auto& row : box) c.box.emplace_back(row[0], row[1]);
  (void)make_chart(c);
  return c;
}

void require_absent(const json& doc, const std::string& key, const std::string& other) {
  if (doc.contains(key)) throw SpecError("/" + key, "conflicts with /" + other + ": the document names one algebroid");
}

}  // namespace

GeometrySpec parse_spec(const json& doc) {
  require_object(doc, "", {"spec_version", "name", "description", "seed", "chart", "algebroid", "lie_algebra",
                           "action_fields", "poisson", "metric", "h_frame", "foliation_frame", "parallelism",
                           "connections", "run"});
  const json& version = member(doc, "", "spec_version");
  if (!version.is_number_integer() || version.get<int>() != kSpecVersion) {
    throw SpecError("/spec_version", "unsupported spec_version (expected " + std::to_string(kSpecVersion) + ")");
  }
  GeometrySpec s;
  s.name = string_at(member(doc, "", "name"), "/name");
  if (doc.contains("description")) s.description = string_at(doc.at("description"), "/description");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw SpecError("/seed", "expected a non-negative integer");
    s.seed = doc.at("seed").get<std::uint64_t>();
  }
  s.chart = parse_chart(member(doc, "", "chart"));
  const Chart chart = make_chart(s.chart);
  const ExprCheck ex{&chart};
  const int n = chart.dim();

  // At most one object defines the algebroid.
  std::string source;
  for (const char* key : {"algebroid", "lie_algebra", "poisson", "foliation_frame"}) {
    if (!doc.contains(key)) continue;
    if (!source.empty()) require_absent(doc, key, source);
    source = key;
  }
  int rank = n;
  if (doc.contains("algebroid")) {
    const json& a = require_object(doc.at("algebroid"), "/algebroid", {"anchor", "structure"});
    const json& anchor = array_at(member(a, "/algebroid", "anchor"), "/algebroid/anchor", n);
    rank = anchor.empty() ? 0 : static_cast<int>(array_at(anchor[0], "/algebroid/anchor/0", -1).size());
    if (rank == 0) throw SpecError("/algebroid/anchor", "an algebroid needs rank at least one");
    AlgebroidSpec as;
    as.anchor = matrix(anchor, "/algebroid/anchor", n, rank, ex);
    as.structure = tensor3(member(a, "/algebroid", "structure"), "/algebroid/structure", rank, rank, rank, ex);
    s.algebroid = std::move(as);
  }
  if (doc.contains("lie_algebra") != doc.contains("action_fields")) {
    throw SpecError(doc.contains("lie_algebra") ? "/action_fields" : "/lie_algebra",
                    "lie_algebra and action_fields must be given together");
  }
  if (doc.contains("lie_algebra")) {
    const json& f = array_at(doc.at("lie_algebra"), "/lie_algebra", -1);
    rank = static_cast<int>(f.size());
    if (rank == 0) throw SpecError("/lie_algebra", "a Lie algebra needs dimension at least one");
    ActionSpec a;
    a.lie_algebra = tensor3(f, "/lie_algebra", rank, rank, rank, check_rational);
    a.fields = matrix(doc.at("action_fields"), "/action_fields", rank, n, ex);
    s.action = std::move(a);
  }
  if (doc.contains("poisson")) s.poisson = matrix(doc.at("poisson"), "/poisson", n, n, ex);
  if (doc.contains("foliation_frame")) {
    const json& f = array_at(doc.at("foliation_frame"), "/foliation_frame", -1);
    rank = static_cast<int>(f.size());
    if (rank == 0) throw SpecError("/foliation_frame", "a foliation frame needs at least one field");
    s.foliation_frame = matrix(f, "/foliation_frame", rank, n, ex);
  }
  if (doc.contains("metric")) s.metric = matrix(doc.at("metric"), "/metric", n, n, ex);
  if (doc.contains("h_frame")) {
    if (!s.metric) throw SpecError("/h_frame", "h_frame requires a metric");
    s.h_frame = tensor3(doc.at("h_frame"), "/h_frame", -1, n, n, ex);
  }
  if (doc.contains("parallelism")) {
    const json& p = require_object(doc.at("parallelism"), "/parallelism", {"model", "omega"});
    ParallelismSpec ps;
    ps.model = tensor3(member(p, "/parallelism", "model"), "/parallelism/model", n, n, n, check_rational);
    ps.omega = matrix(member(p, "/parallelism", "omega"), "/parallelism/omega", n, n, ex);
    s.parallelism = std::move(ps);
  }
  if (doc.contains("connections")) {
    const json& cs = array_at(doc.at("connections"), "/connections", -1);
    std::set<std::string> names;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const std::string path = at("/connections", k);
      const json& c = require_object(cs[k], path, {"name", "on", "gamma"});
      ConnectionSpec spec;
      spec.name = string_at(member(c, path, "name"), at(path, "name"));
      if (spec.name.empty()) throw SpecError(at(path, "name"), "empty connection name");
      if (!names.insert(spec.name).second) throw SpecError(at(path, "name"), "duplicate connection name '" + spec.name + "'");
      spec.on = string_at(member(c, path, "on"), at(path, "on"));
      if (spec.on != "algebroid" && spec.on != "tangent") {
        throw SpecError(at(path, "on"), "expected \"algebroid\" or \"tangent\"");
      }
      const int r = spec.on == "algebroid" ? rank : n;
      spec.gamma = tensor3(member(c, path, "gamma"), at(path, "gamma"), n, r, r, ex);
      s.connections.push_back(std::move(spec));
    }
  }
  if (doc.contains("run")) {
    s.run = strings(doc.at("run"), "/run", -1, [](const std::string& name, const std::string& p) {
      for (const char* known : kPipelines) {
        if (name == known) return;
      }
      throw SpecError(p, "unknown pipeline '" + name + "'");
    });
  }
  return s;
}

json to_json(const GeometrySpec& s) {
  json doc = json::object();
  doc["spec_version"] = kSpecVersion;
  doc["name"] = s.name;
  if (!s.description.empty()) doc["description"] = s.description;
  if (s.seed) doc["seed"] = *s.seed;
  json box = json::array();
  for (const auto& [lo, hi] : s.chart.box) box.push_back({lo, hi});
  doc["chart"] = {{"coordinates", s.chart.coordinates}, {"box", box}};
  if (s.algebroid) doc["algebroid"] = {{"anchor", s.algebroid->anchor}, {"structure", s.algebroid->structure}};
  if (s.action) {
    doc["lie_algebra"] = s.action->lie_algebra;
    doc["action_fields"] = s.action->fields;
  }
  if (s.poisson) doc["poisson"] = *s.poisson;
  if (s.foliation_frame) doc["foliation_frame"] = *s.foliation_frame;
  if (s.metric) doc["metric"] = *s.metric;
  if (s.h_frame) doc["h_frame"] = *s.h_frame;
  if (s.parallelism) doc["parallelism"] = {{"model", s.parallelism->model}, {"omega", s.parallelism->omega}};
  if (!s.connections.empty()) {
    json cs = json::array();
    for (const auto& c : s.connections) cs.push_back({{"name", c.name}, {"on", c.on}, {"gamma", c.gamma}});
    doc["connections"] = cs;
  }
  if (!s.run.empty()) doc["run"] = s.run;
  return doc;
}

GeometrySpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("", "cannot read '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_spec(doc);
}

namespace {

ExprMat exprs(const Chart& c, const StrMat& m) {
  ExprMat out = zeros(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) out[i][j] = c.expr(m[i][j]);
  }
  return out;
}

std::vector<std::vector<std::vector<Rational>>> rationals(const StrTensor3& t) {
  std::vector<std::vector<std::vector<Rational>>> out;
  for (const auto& m : t) {
    auto& mo = out.emplace_back();
    for (const auto& row : m) {
      auto& ro = mo.emplace_back();
      for (const auto& x : row) ro.push_back(Rational::parse(x));
    }
  }
  return out;
}

std::vector<Section> fields(const Chart& c, const StrMat& m) {
  std::vector<Section> out;
  for (const auto& row : m) {
    Section s = Section::zero(c, Frame::Tangent, c.dim());
    for (std::size_t i = 0; i < row.size(); ++i) s.comps[i] = c.expr(row[i]);
    out.push_back(std::move(s));
  }
  return out;
}

/// Runs a builder and relocates its errors to `path`.
template <class F>
auto built(const std::string& path, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const WitnessError& e) {
    throw SpecError(path, e.what(), Witness{e.point, e.indices, e.value});
  } catch (const SpecError&) {
    throw;
  } catch (const Error& e) {
    throw SpecError(path, e.what());
  }
}

}  // namespace

Document instantiate(const GeometrySpec& spec, const ZeroTester& tester) {
  Document d;
  d.spec = spec;
  d.chart = make_chart(spec.chart);
  require_same_chart(d.chart, tester.chart());
  const Chart& c = d.chart;
  d.g = Algebroid::tangent(c);
  d.algebroid_source = "tangent";
  if (spec.algebroid) {
    d.g = built("/algebroid", [&] {
      const ExprMat anchor = exprs(c, spec.algebroid->anchor);
      std::vector<std::vector<ExprVec>> st;
      for (const auto& m : spec.algebroid->structure) st.push_back(exprs(c, m));
      return Algebroid(c, anchor, std::move(st), Origin::Direct);
    });
    d.algebroid_source = "algebroid";
  }
  if (spec.action) {
    const LieAlgebra la = built("/lie_algebra", [&] { return LieAlgebra(rationals(spec.action->lie_algebra)); });
    d.g = built("/action_fields", [&] { return build_action_algebroid(la, fields(c, spec.action->fields), tester); });
    d.algebroid_source = "lie_algebra";
  }
  if (spec.poisson) {
    d.poisson = tensor2(c, exprs(c, *spec.poisson), Variance::Upper, Variance::Upper);
    d.g = built("/poisson", [&] { return build_poisson_algebroid(*d.poisson, tester); });
    d.algebroid_source = "poisson";
  }
  if (spec.foliation_frame) {
    d.g = built("/foliation_frame", [&] { return build_foliation_algebroid(fields(c, *spec.foliation_frame), tester); });
    d.algebroid_source = "foliation_frame";
  }
  if (spec.metric) d.metric = tensor2(c, exprs(c, *spec.metric), Variance::Lower, Variance::Lower);
  if (spec.h_frame) {
    for (const auto& m : *spec.h_frame) d.h_frame.push_back(exprs(c, m));
  }
  if (spec.parallelism) {
    const LieAlgebra model = built("/parallelism/model", [&] { return LieAlgebra(rationals(spec.parallelism->model)); });
    d.parallelism = Parallelism{c, model, exprs(c, spec.parallelism->omega)};
  }
  for (std::size_t k = 0; k < spec.connections.size(); ++k) {
    const ConnectionSpec& cs = spec.connections[k];
    Coeffs gamma;
    for (const auto& m : cs.gamma) gamma.push_back(exprs(c, m));
    const SlotTag target = cs.on == "algebroid" ? SlotTag::Algebroid : SlotTag::TM;
    const int rank = cs.on == "algebroid" ? d.g.rank() : c.dim();
    if (!gamma.empty() && static_cast<int>(gamma[0].size()) != rank) {
      throw SpecError(at(at("/connections", k), "gamma"), "rank does not match the algebroid");
    }
    d.connections.push_back({cs.name, cs.on, built(at(at("/connections", k), "gamma"), [&] {
                               return TMConnection(c, std::move(gamma), target);
                             })});
  }
  return d;
}

}  // namespace cartalg::cli
