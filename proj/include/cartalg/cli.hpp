#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cartalg/cartan.hpp"
#include "cartalg/errors.hpp"
#include "json.hpp"

namespace cartalg::cli {

inline constexpr const char* kToolName = "cartalg";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSpecVersion = 1;

/// Input error located by a JSON pointer into the document.
class SpecError : public Error {
public:
  SpecError(std::string pointer, const std::string& msg, std::optional<Witness> w = std::nullopt)
      : Error(pointer.empty() ? msg : pointer + ": " + msg), path(std::move(pointer)), witness(std::move(w)) {}
  std::string path;
  /// Set when a builder rejected the object at a sample point.
  std::optional<Witness> witness;
};

using StrMat = std::vector<std::vector<std::string>>;
using StrTensor3 = std::vector<StrMat>;

struct ChartSpec {
  std::vector<std::string> coordinates;
  /// [lo, hi] per coordinate, as rational literals.
  std::vector<std::pair<std::string, std::string>> box;
  friend bool operator==(const ChartSpec&, const ChartSpec&) = default;
};

struct AlgebroidSpec {
  StrMat anchor;        // [i][a]
  StrTensor3 structure;  // [a][b][c]
  friend bool operator==(const AlgebroidSpec&, const AlgebroidSpec&) = default;
};

struct ActionSpec {
  StrTensor3 lie_algebra;  // rational constants [a][b][c]
  StrMat fields;           // fields[a][i]
  friend bool operator==(const ActionSpec&, const ActionSpec&) = default;
};

struct ParallelismSpec {
  StrTensor3 model;  // rational constants [a][b][c]
  StrMat omega;      // [a][i]
  friend bool operator==(const ParallelismSpec&, const ParallelismSpec&) = default;
};

struct ConnectionSpec {
  std::string name;
  /// "algebroid" or "tangent".
  std::string on;
  StrTensor3 gamma;  // [i][a][b]
  friend bool operator==(const ConnectionSpec&, const ConnectionSpec&) = default;
};

/// The document as written; expressions are kept as text so serialization is exact.
struct GeometrySpec {
  std::string name;
  std::string description;
  std::optional<std::uint64_t> seed;
  ChartSpec chart;
  std::optional<AlgebroidSpec> algebroid;
  std::optional<ActionSpec> action;
  std::optional<StrMat> poisson;  // [i][j]
  std::optional<StrMat> metric;   // [i][j]
  std::optional<StrTensor3> h_frame;  // [k][l][m] = (E_k)^l_m
  std::optional<StrMat> foliation_frame;  // [a][i]
  std::optional<ParallelismSpec> parallelism;
  std::vector<ConnectionSpec> connections;
  std::vector<std::string> run;
  friend bool operator==(const GeometrySpec&, const GeometrySpec&) = default;
};

/// Throws SpecError with a JSON pointer on any structural, shape or expression error.
[[nodiscard]] GeometrySpec parse_spec(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json to_json(const GeometrySpec& spec);
/// Reads and parses a file; unreadable files and JSON syntax errors are SpecErrors with an empty path.
[[nodiscard]] GeometrySpec load_spec(const std::string& path);

struct NamedConnection {
  std::string name;
  std::string on;
  TMConnection nabla;
};

/// Built objects. The algebroid is the one named by the document, else the tangent algebroid.
struct Document {
  GeometrySpec spec;
  Chart chart;
  Algebroid g;
  std::string algebroid_source;
  std::optional<TensorField> poisson;
  std::optional<TensorField> metric;
  std::vector<ExprMat> h_frame;
  std::optional<Parallelism> parallelism;
  std::vector<NamedConnection> connections;
};

/// Builder failures (for example a non-Poisson tensor) are rethrown as SpecErrors at the offending object.
[[nodiscard]] Document instantiate(const GeometrySpec& spec, const ZeroTester& tester);

struct Options {
  std::uint64_t seed = 0;
  bool seed_given = false;
  int samples = 32;
  double tol = 1e-9;
  bool timing = false;
};

inline constexpr const char* kPipelines[] = {"cartan", "theorem-a", "transitive", "riemann", "poisson", "geometry"};

struct HolonomyRequest {
  std::vector<double> point;
  std::string plane_i;
  std::string plane_j;
  double side = 0.01;
  int steps = 64;
  std::string connection;
  double max_relative_error = 1e-2;
};

struct RunResult {
  int exit_code = 0;
  nlohmann::json report;
};

/// Exit code 0 iff every check passes, 1 on a failing or undecidable check, 2 on input errors.
[[nodiscard]] RunResult run_validate(const std::string& file, const Options& opts);
[[nodiscard]] RunResult run_check(const std::string& file, const std::optional<std::string>& pipeline,
                                  const Options& opts);
[[nodiscard]] RunResult run_holonomy(const std::string& file, const HolonomyRequest& req, const Options& opts);
[[nodiscard]] RunResult run_identities(const std::string& file, const Options& opts, int forms = 10);

/// Pipelines as plain verdict lists, for reuse outside the command layer.
[[nodiscard]] std::vector<Verdict> pipeline_checks(const Document& doc, const std::string& pipeline,
                                                   const ZeroTester& tester);
[[nodiscard]] std::vector<Verdict> identity_checks(const Document& doc, const ZeroTester& tester, std::uint64_t seed,
                                                   int forms);

[[nodiscard]] nlohmann::json verdict_json(const Verdict& v);

}  // namespace cartalg::cli
