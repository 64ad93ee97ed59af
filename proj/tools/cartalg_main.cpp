#include <iostream>

#include "CLI11.hpp"
#include "cartalg/cli.hpp"

using namespace cartalg::cli;

int main(int argc, char** argv) {
  CLI::App app{"Verify Lie algebroid, connection and Cartan geometry identities on a coordinate chart"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  Options opts;
  bool pretty = false;
  app.add_option("--seed", opts.seed, "Sampling seed (overrides the document seed)")
      ->each([&](const std::string&) { opts.seed_given = true; });
  app.add_option("--samples", opts.samples, "Sample points for numeric zero tests")->check(CLI::Range(1, 100000));
  app.add_option("--tol", opts.tol, "Absolute and relative zero tolerance")->check(CLI::PositiveNumber);
  auto* json_flag = app.add_flag("--json", "Compact JSON output (default)");
  app.add_flag("--pretty", pretty, "Indented JSON output")->excludes(json_flag);
  app.add_flag("--timing", opts.timing, "Add elapsed_ms to each check (reports are then not byte-stable)");

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check algebroid axioms and object well-formedness");
  validate->add_option("file", file, "Geometry document")->required();

  std::optional<std::string> pipeline;
  auto* check = app.add_subcommand("check", "Run a verification pipeline");
  check->add_option("file", file, "Geometry document")->required();
  check->add_option("--pipeline", pipeline, "Pipeline (defaults to the document run list)")
      ->check(CLI::IsMember({"cartan", "theorem-a", "transitive", "riemann", "poisson", "geometry"}));

  HolonomyRequest req;
  std::vector<std::string> plane;
  auto* holonomy = app.add_subcommand("holonomy", "Compare loop holonomy with curvature");
  holonomy->add_option("file", file, "Geometry document")->required();
  holonomy->add_option("--point", req.point, "Base point")->required()->expected(1, 16);
  holonomy->add_option("--plane", plane, "Two coordinates (names or indices)")->required()->expected(2);
  holonomy->add_option("--side", req.side, "Side of the square loop")->check(CLI::PositiveNumber);
  holonomy->add_option("--steps", req.steps, "RK4 steps per side")->check(CLI::Range(1, 1000000));
  holonomy->add_option("--connection", req.connection, "Connection name (default: Levi-Civita of the metric)");
  holonomy->add_option("--max-rel-error", req.max_relative_error, "Pass threshold on the relative defect");

  int forms = 10;
  auto* identities = app.add_subcommand("identities", "Run the duality, oracle and calculus identity battery");
  identities->add_option("file", file, "Geometry document")->required();
  identities->add_option("--forms", forms, "Random 1-forms per Cartan connection")->check(CLI::Range(0, 1000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunResult r;
  if (*validate) {
    r = run_validate(file, opts);
  } else if (*check) {
    r = run_check(file, pipeline, opts);
  } else if (*holonomy) {
    req.plane_i = plane[0];
    req.plane_j = plane[1];
    r = run_holonomy(file, req, opts);
  } else {
    r = run_identities(file, opts, forms);
  }
  std::cout << r.report.dump(pretty ? 2 : -1) << '\n';
  if (r.exit_code == 2 && r.report.contains("error")) {
    std::cerr << "error: " << r.report["error"]["message"].get<std::string>() << '\n';
  }
  return r.exit_code;
}
