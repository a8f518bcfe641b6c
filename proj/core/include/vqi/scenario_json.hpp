#pragma once

#include <string>

#include "vqi/audit.hpp"
#include "vqi/scenarios.hpp"

namespace vqi {

// A scenario file: the protocol, the input family for audits, and the
// execution mode. JSON on disk; unknown keys are rejected and every range
// constraint is re-checked on load. Timestamps in the file are rationals
// written as strings ("3/2") or plain integers.
struct ScenarioFile {
  ScenarioSpec spec;
  InputFamily family;
  ExecutionMode mode = ExecutionMode::ensemble;
  SampledSettings sampled;
};

// Throws ParseError; parse failures carry line:column anchors, validation
// failures carry the offending key path.
ScenarioFile parse_scenario_json(const std::string& text, const std::string& origin);
ScenarioFile load_scenario_file(const std::string& path);

// FNV-1a 64 content digest, "fnv1a64:<16 hex digits>".
std::string text_digest_hex(const std::string& text);
std::string file_digest_hex(const std::string& path);

// ---------------------------------------------------------------------------
// Report files: a JSON mirror of AuditReport plus tool info and the digest
// of the input that produced it. Serialization is deterministic; the only
// run-dependent field is generated_at.

struct ReportMeta {
  std::string tool_name;
  std::string tool_version;
  std::string input_digest;
  std::string generated_at;  // ISO-8601 UTC, excluded from determinism checks
};

ReportMeta make_report_meta(const std::string& input_path);

// Numeric fields are written with 17 significant digits so the JSON
// round-trips losslessly.
std::string report_to_json(const AuditReport& report, const ReportMeta& meta);

struct ParsedReport {
  AuditReport report;
  ReportMeta meta;
};

ParsedReport report_from_json(const std::string& text);

}  // namespace vqi
