#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fbx/tate.hpp"

namespace fbx {

using Json = nlohmann::ordered_json;

/// Job validation failed; carries every problem found, not just the first.
struct JobError : std::runtime_error {
  explicit JobError(std::vector<std::string> errs);
  std::vector<std::string> errors;
};

/// A parsed and validated computation request: the curve, the connection
/// matrix (kept as expression text so serialization round-trips exactly),
/// and numeric options.
struct JobSpec {
  CurveSpec curve;
  int rank = 0;
  std::vector<std::vector<std::string>> matrix_text;
  int truncation = 0;         // 0: stabilize automatically
  int max_truncation = 4096;  // doubling cap for local computations
  int depth = 6;              // tower depth for stage computations
  std::string format = "table";

  Connection connection() const;
  bool operator==(const JobSpec& o) const;
};

/// Parses and validates a job document; throws JobError listing every
/// malformed field, shape mismatch, duplicate point, or pole outside D.
JobSpec parse_job(const std::string& text);

Json job_to_json(const JobSpec& job);
std::string serialize_job(const JobSpec& job);

/// Per-command extras not part of the job document.
struct RunOptions {
  std::string point;      // boundary point filter ("2", "-1/3", "inf")
  std::string form;       // residues: global 1-form "<expr> dt"
  int twist = 0;          // tate: O(twist)
  int extra_doublings = 0;  // pre-enlarge global windows (determinism probe)
  bool verbose = false;
};

/// Executes one command ("cohomology", "boundary", "compact", "duality",
/// "tangent", "residues", "tate") and returns the full report. Keys are
/// fixed: {schema_version, job, h_X, h_boundary, h_c, pairings, euler, tate,
/// diagnostics}; sections a command does not compute are null. The output is
/// deterministic byte for byte.
Json run_job(const std::string& command, const JobSpec& job, const RunOptions& opts = {});

/// Renders a report as human-readable tables.
std::string report_tables(const Json& report);

/// Runs the bundled golden corpus; returns a list of failures (empty = pass).
std::vector<std::string> selftest();

}  // namespace fbx
