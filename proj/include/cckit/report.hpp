#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cckit/domain.hpp"
#include "cckit/slice.hpp"

namespace cckit {

enum class ExperimentKind {
  classify,
  cconvex,
  peak,
  shadow,
  theorem4_pipeline,
  theorem5_pipeline,
};

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::classify;
  /// Builtin name ("ball:2", "perturbed_ball:3,0.1") or a JSON spec-file path.
  std::string domain_arg;
  std::string out_dir = "out";
  SolverSettings settings;  // seed lives here
  int samples = 0;          // 0 = kind default
  int resolution = 0;       // 0 = kind default
  std::optional<CVec> point;
  double radius = 0.0;  // 0 = kind default (classify: U radius)
};

/// Plot payloads produced alongside the verdict records; written by
/// emit_geometry, never serialized into report.json.
struct GeometryBundle {
  std::vector<std::pair<std::string, SliceMask>> masks;
  std::vector<std::pair<std::string, std::vector<Complex>>> polylines;
  std::vector<std::pair<std::string, std::vector<std::array<double, 3>>>> fields;
};

struct Report {
  nlohmann::ordered_json config;
  std::vector<nlohmann::ordered_json> records;
  int pass = 0;
  int fail = 0;
  int vacuous = 0;
  double elapsed_ms = 0.0;
  GeometryBundle geometry;

  /// Full document. The volatile parts (wall-clock time, duration) live under
  /// the single "timestamp" key so that stripping that one key restores
  /// byte-level determinism for fixed config and seed.
  nlohmann::ordered_json to_json(bool with_timestamp = true) const;
};

/// Parses "name", "name:p1,p2,..." or a path to a JSON domain spec.
DomainModel resolve_domain(const std::string& arg);

/// Runs the configured pipeline. Verdict failures are data (they set the fail
/// counter); only structural problems (bad config, solver hard failures)
/// throw.
Report run_experiment(const ExperimentConfig& config);

/// Writes report.json and summary.csv into out_dir (created if needed).
/// Returns the process exit code: 0 when no verdict failed, 2 otherwise.
/// I/O problems throw (the CLI maps those to exit code 1).
int emit_report(const Report& report, const std::string& out_dir);

/// Writes masks (PGM + SVG contour), polylines (SVG-ready CSV) and field
/// grids (CSV) into out_dir.
void emit_geometry(const GeometryBundle& bundle, const std::string& out_dir);

}  // namespace cckit
