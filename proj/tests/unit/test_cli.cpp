#include <algorithm>
#include <filesystem>
#include <fstream>

#include "cartalg/cli.hpp"
#include "doctest.h"

using namespace cartalg;
using namespace cartalg::cli;
using nlohmann::json;

namespace {

const std::filesystem::path kData = CARTALG_DATA_DIR;

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(kData / "corpus")) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

json read(const std::filesystem::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string error_path(const json& doc) {
  try {
    (void)parse_spec(doc);
  } catch (const SpecError& e) {
    return e.path;
  }
  return "<none>";
}

ZeroTester tester_for(const Document& d) { return ZeroTester(d.chart, {}); }

json so3() { return read(kData / "corpus" / "so3_action.json"); }

}  // namespace

TEST_CASE("corpus round-trips through the spec model") {
  const auto files = corpus();
  REQUIRE(files.size() == 9);
  for (const auto& f : files) {
    CAPTURE(f.filename().string());
    const json doc = read(f);
    const GeometrySpec s = parse_spec(doc);
    const json back = to_json(s);
    CHECK(parse_spec(back) == s);
    CHECK(to_json(parse_spec(back)) == back);
    CHECK(load_spec(f.string()) == s);
  }
}

TEST_CASE("parse errors carry JSON pointers") {
  json d = so3();
  d["spec_version"] = 2;
  CHECK(error_path(d) == "/spec_version");

  d = so3();
  d["extra"] = 1;
  CHECK(error_path(d) == "/extra");

  d = so3();
  d["action_fields"][1][2] = "x +* 1";
  CHECK(error_path(d) == "/action_fields/1/2");

  d = so3();
  d["action_fields"][0][0] = "w";
  CHECK(error_path(d) == "/action_fields/0/0");

  d = so3();
  d["chart"]["box"][2] = json::array({"1", "-1"});
  CHECK(error_path(d).rfind("/chart/box/2", 0) == 0);

  d = so3();
  d["connections"].push_back(d["connections"][0]);
  CHECK(error_path(d) == "/connections/1/name");

  d = so3();
  d["connections"][0]["gamma"].erase(2);
  CHECK(error_path(d).rfind("/connections/0/gamma", 0) == 0);

  CHECK_THROWS_AS((void)load_spec((kData / "corpus" / "missing.json").string()), SpecError);
}

TEST_CASE("instantiate locates builder failures") {
  json d = so3();
  d["lie_algebra"][0][1][2] = "2";
  const GeometrySpec s = parse_spec(d);
  try {
    (void)instantiate(s, ZeroTester(Chart({"x", "y", "z"}, {{Rational(-1), Rational(1)},
                                                            {Rational(-1), Rational(1)},
                                                            {Rational(-1), Rational(1)}})));
    FAIL("expected a SpecError");
  } catch (const SpecError& e) {
    CHECK(e.path.rfind("/lie_algebra", 0) == 0);
  }
}

TEST_CASE("pipeline checks on the corpus") {
  const auto build = [](const std::string& name) {
    const GeometrySpec s = load_spec((kData / "corpus" / (name + ".json")).string());
    std::vector<Interval> box;
    for (const auto& [lo, hi] : s.chart.box) box.push_back({Rational::parse(lo), Rational::parse(hi)});
    return instantiate(s, ZeroTester(Chart(s.chart.coordinates, box)));
  };
  const auto all_pass = [](const std::vector<Verdict>& vs) {
    return std::all_of(vs.begin(), vs.end(), [](const Verdict& v) { return v.passed(); });
  };

  const Document so3d = build("so3_action");
  CHECK(so3d.algebroid_source == "lie_algebra");
  CHECK(all_pass(pipeline_checks(so3d, "cartan", tester_for(so3d))));
  CHECK(all_pass(pipeline_checks(so3d, "theorem-a", tester_for(so3d))));

  const Document sphere = build("sphere");
  CHECK(all_pass(pipeline_checks(sphere, "riemann", tester_for(sphere))));

  const Document ell = build("ellipsoid");
  const auto r = pipeline_checks(ell, "riemann", tester_for(ell));
  REQUIRE_FALSE(r.empty());
  CHECK_FALSE(all_pass(r));

  const Document pois = build("so3_dual_poisson");
  CHECK(all_pass(pipeline_checks(pois, "poisson", tester_for(pois))));

  CHECK_THROWS((void)pipeline_checks(so3d, "no-such-pipeline", tester_for(so3d)));
  CHECK_THROWS((void)pipeline_checks(so3d, "riemann", tester_for(so3d)));
}

TEST_CASE("identity battery is seeded and passes on the corpus") {
  for (const auto& f : corpus()) {
    CAPTURE(f.filename().string());
    const GeometrySpec s = load_spec(f.string());
    std::vector<Interval> box;
    for (const auto& [lo, hi] : s.chart.box) box.push_back({Rational::parse(lo), Rational::parse(hi)});
    const Document d = instantiate(s, ZeroTester(Chart(s.chart.coordinates, box)));
    const auto a = identity_checks(d, tester_for(d), 7, 3);
    const auto b = identity_checks(d, tester_for(d), 7, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].passed());
      CHECK(verdict_json(a[i]) == verdict_json(b[i]));
    }
  }
}

TEST_CASE("command runners report exit codes") {
  Options o;
  const std::string sphere = (kData / "corpus" / "sphere.json").string();
  CHECK(run_validate(sphere, o).exit_code == 0);
  CHECK(run_check(sphere, std::nullopt, o).exit_code == 0);
  CHECK(run_check((kData / "corpus" / "ellipsoid.json").string(), std::string("riemann"), o).exit_code == 1);
  const RunResult bad = run_check((kData / "negative" / "bad_expression.json").string(), std::nullopt, o);
  CHECK(bad.exit_code == 2);
  CHECK(bad.report["error"]["path"] == "/metric/1/1");

  HolonomyRequest h;
  h.point = {1.2, 0.7};
  h.plane_i = "th";
  h.plane_j = "ph";
  const RunResult hol = run_holonomy(sphere, h, o);
  CHECK(hol.exit_code == 0);
  h.plane_j = "th";
  CHECK(run_holonomy(sphere, h, o).exit_code == 2);
}
