#include "vqi/scenario_json.hpp"

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vqi/version.hpp"

namespace vqi {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& path, const std::string& msg) {
  throw ParseError(origin + ": " + (path.empty() ? "" : path + ": ") + msg);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& origin, const std::string& path) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(origin, path, "unknown key '" + key + "'");
}

double require_number(const json& obj, const std::string& key, const std::string& origin,
                      const std::string& path) {
  if (!obj.contains(key)) fail(origin, path, "missing key '" + key + "'");
  if (!obj[key].is_number()) fail(origin, path + "." + key, "expected a number");
  return obj[key].get<double>();
}

Rational parse_time(const json& value, const std::string& origin, const std::string& path) {
  if (value.is_number_integer()) return Rational{value.get<std::int64_t>()};
  if (value.is_string()) {
    try {
      return Rational::parse(value.get<std::string>());
    } catch (const ParseError& e) {
      fail(origin, path, e.what());
    }
  }
  fail(origin, path, "times must be integers or rational strings like \"3/2\"");
}

InputFamily parse_family(const json& obj, ScenarioKind kind, const std::string& origin) {
  const std::string path = "family";
  if (!obj.is_object()) fail(origin, path, "expected an object");
  if (!obj.contains("kind")) fail(origin, path, "missing key 'kind'");
  const std::string fkind = obj["kind"].is_string() ? obj["kind"].get<std::string>() : "";

  const bool classical =
      kind == ScenarioKind::classical_teleport || kind == ScenarioKind::multiparty_classical;

  if (fkind == "default") {
    reject_unknown_keys(obj, {"kind"}, origin, path);
    return default_family(kind);
  }
  if (fkind == "grid") {
    reject_unknown_keys(obj, {"kind", "theta_steps", "phi_steps"}, origin, path);
    if (classical) fail(origin, path, "grid families apply to the quantum scenarios only");
    return family_grid(static_cast<int>(require_number(obj, "theta_steps", origin, path)),
                       static_cast<int>(require_number(obj, "phi_steps", origin, path)));
  }
  if (fkind == "random") {
    reject_unknown_keys(obj, {"kind", "count", "seed"}, origin, path);
    if (classical) fail(origin, path, "random families apply to the quantum scenarios only");
    return family_random(static_cast<int>(require_number(obj, "count", origin, path)),
                         static_cast<std::uint64_t>(require_number(obj, "seed", origin, path)));
  }
  if (fkind == "p_grid") {
    reject_unknown_keys(obj, {"kind", "steps"}, origin, path);
    if (!classical) fail(origin, path, "p_grid families apply to the classical scenarios only");
    return family_p_grid(static_cast<int>(require_number(obj, "steps", origin, path)));
  }
  fail(origin, path, "unknown family kind '" + fkind + "'");
}

std::set<std::string> allowed_params(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::std_teleport:
    case ScenarioKind::misrouted:
    case ScenarioKind::psi_pair_dist:
      return {"theta", "phi"};
    case ScenarioKind::classical_teleport:
      return {"p"};
    case ScenarioKind::multiparty_teleport:
      return {"theta", "phi", "n"};
    case ScenarioKind::multiparty_classical:
      return {"p", "n"};
  }
  return {};
}

}  // namespace

ScenarioFile parse_scenario_json(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // anchor the message to line:column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": JSON parse error: " + e.what());
  }
  if (!root.is_object()) fail(origin, "", "top level must be an object");
  reject_unknown_keys(root, {"kind", "params", "times", "relativity", "variants", "family", "mode"},
                      origin, "");

  ScenarioFile out;
  if (!root.contains("kind") || !root["kind"].is_string())
    fail(origin, "", "missing string key 'kind'");
  out.spec.kind = scenario_kind_from_string(root["kind"].get<std::string>());

  if (root.contains("params")) {
    const json& params = root["params"];
    if (!params.is_object()) fail(origin, "params", "expected an object");
    reject_unknown_keys(params, allowed_params(out.spec.kind), origin, "params");
    if (params.contains("theta")) out.spec.psi.theta = require_number(params, "theta", origin, "params");
    if (params.contains("phi")) out.spec.psi.phi = require_number(params, "phi", origin, "params");
    if (params.contains("p")) out.spec.p = require_number(params, "p", origin, "params");
    if (params.contains("n"))
      out.spec.n = static_cast<int>(require_number(params, "n", origin, "params"));
  }

  if (root.contains("times")) {
    const json& times = root["times"];
    if (!times.is_object()) fail(origin, "times", "expected an object");
    reject_unknown_keys(times, {"t1", "t_send", "t2", "t_arrive"}, origin, "times");
    if (times.contains("t1")) out.spec.times.t1 = parse_time(times["t1"], origin, "times.t1");
    if (times.contains("t_send"))
      out.spec.times.t_send = parse_time(times["t_send"], origin, "times.t_send");
    if (times.contains("t2")) out.spec.times.t2 = parse_time(times["t2"], origin, "times.t2");
    if (times.contains("t_arrive"))
      out.spec.times.t_arrive = parse_time(times["t_arrive"], origin, "times.t_arrive");
  }

  if (root.contains("relativity")) {
    const json& rel = root["relativity"];
    if (!rel.is_object()) fail(origin, "relativity", "expected an object");
    reject_unknown_keys(rel, {"enabled", "speed", "positions"}, origin, "relativity");
    if (rel.contains("enabled")) {
      if (!rel["enabled"].is_boolean()) fail(origin, "relativity.enabled", "expected a boolean");
      out.spec.relativity.enabled = rel["enabled"].get<bool>();
    }
    if (rel.contains("speed"))
      out.spec.relativity.speed = require_number(rel, "speed", origin, "relativity");
    if (rel.contains("positions")) {
      if (!rel["positions"].is_object()) fail(origin, "relativity.positions", "expected an object");
      for (const auto& [party, pos] : rel["positions"].items()) {
        if (!pos.is_number())
          fail(origin, "relativity.positions." + party, "expected a number");
        out.spec.relativity.positions[party] = pos.get<double>();
      }
    }
  }

  if (root.contains("variants")) {
    const json& var = root["variants"];
    if (!var.is_object()) fail(origin, "variants", "expected an object");
    reject_unknown_keys(var, {"discard_source", "mixed_input_p"}, origin, "variants");
    if (var.contains("discard_source")) {
      if (!var["discard_source"].is_boolean())
        fail(origin, "variants.discard_source", "expected a boolean");
      out.spec.variants.discard_source = var["discard_source"].get<bool>();
    }
    if (var.contains("mixed_input_p"))
      out.spec.variants.mixed_input_p = require_number(var, "mixed_input_p", origin, "variants");
  }

  if (root.contains("mode")) {
    const json& mode = root["mode"];
    if (mode.is_string() && mode.get<std::string>() == "ensemble") {
      out.mode = ExecutionMode::ensemble;
    } else if (mode.is_object()) {
      reject_unknown_keys(mode, {"sampled"}, origin, "mode");
      if (!mode.contains("sampled") || !mode["sampled"].is_object())
        fail(origin, "mode", "expected \"ensemble\" or {\"sampled\": {...}}");
      const json& sampled = mode["sampled"];
      reject_unknown_keys(sampled, {"seed", "shots"}, origin, "mode.sampled");
      out.mode = ExecutionMode::sampled;
      if (sampled.contains("seed"))
        out.sampled.seed =
            static_cast<std::uint64_t>(require_number(sampled, "seed", origin, "mode.sampled"));
      if (sampled.contains("shots"))
        out.sampled.shots =
            static_cast<std::size_t>(require_number(sampled, "shots", origin, "mode.sampled"));
      if (out.sampled.shots == 0) fail(origin, "mode.sampled.shots", "must be positive");
    } else {
      fail(origin, "mode", "expected \"ensemble\" or {\"sampled\": {...}}");
    }
  }

  try {
    out.spec.validate();
  } catch (const Error& e) {
    fail(origin, "", std::string("invalid scenario: ") + e.what());
  }

  if (root.contains("family")) {
    out.family = parse_family(root["family"], out.spec.kind, origin);
  } else {
    out.family = default_family(out.spec.kind);
  }
  return out;
}

ScenarioFile load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_json(buffer.str(), path);
}

std::string text_digest_hex(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= static_cast<std::uint64_t>(c);
    hash *= 1099511628211ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string file_digest_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return text_digest_hex(buffer.str());
}

ReportMeta make_report_meta(const std::string& input_path) {
  ReportMeta meta;
  meta.tool_name = kToolName;
  meta.tool_version = kToolVersion;
  meta.input_digest = file_digest_hex(input_path);
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
  meta.generated_at = buf;
  return meta;
}

// ---------------------------------------------------------------------------
// Deterministic report writer (17 significant digits for numerics).

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string quote_labels(const std::vector<Label>& labels) {
  std::string out = "[";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += quote(labels[i]);
  }
  return out + "]";
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string report_to_json(const AuditReport& report, const ReportMeta& meta) {
  std::ostringstream o;
  o << "{\n";
  o << "  \"tool\": {\"name\": " << quote(meta.tool_name) << ", \"version\": "
    << quote(meta.tool_version) << "},\n";
  o << "  \"input_digest\": " << quote(meta.input_digest) << ",\n";
  o << "  \"generated_at\": " << quote(meta.generated_at) << ",\n";
  o << "  \"report\": {\n";
  o << "    \"scenario_kind\": " << quote(report.scenario_kind) << ",\n";
  o << "    \"window\": {\"t1\": " << quote(report.t1.str()) << ", \"t2\": "
    << quote(report.t2.str()) << "},\n";
  o << "    \"family\": {\"description\": " << quote(report.family_description)
    << ", \"size\": " << report.family_size << "},\n";

  const ConditionIResult& ci = report.condition_i;
  o << "    \"condition_i\": {\n";
  o << "      \"tolerance\": " << fmt_double(ci.tolerance) << ",\n";
  o << "      \"probe_times\": [";
  for (std::size_t i = 0; i < ci.probe_times.size(); ++i) {
    if (i) o << ", ";
    o << quote(ci.probe_times[i].str());
  }
  o << "],\n";
  o << "      \"groupings\": [\n";
  for (std::size_t i = 0; i < ci.groupings.size(); ++i) {
    const GroupingResult& g = ci.groupings[i];
    o << "        {\"labels\": " << quote_labels(g.labels) << ", \"evaluated\": "
      << bool_str(g.evaluated) << ", \"max_pairwise_distance\": "
      << fmt_double(g.max_pairwise_distance) << ", \"pass\": " << bool_str(g.pass)
      << ", \"note\": " << quote(g.note) << "}" << (i + 1 < ci.groupings.size() ? "," : "")
      << "\n";
  }
  o << "      ],\n";
  o << "      \"pass\": " << bool_str(ci.pass) << "\n";
  o << "    },\n";

  const ConditionIIResult& cii = report.condition_ii;
  o << "    \"condition_ii\": {\n";
  o << "      \"cut\": [" << quote_labels(cii.cut.first) << ", " << quote_labels(cii.cut.second)
    << "],\n";
  o << "      \"profile\": {\n";
  o << "        \"mutual_information_bits\": " << fmt_double(cii.worst.mutual_information_bits)
    << ",\n";
  o << "        \"nearest_product_relent_bits\": "
    << fmt_double(cii.worst.nearest_product_relent_bits) << ",\n";
  o << "        \"negativity\": " << fmt_double(cii.worst.negativity) << ",\n";
  o << "        \"ppt\": " << bool_str(cii.worst.ppt) << ",\n";
  o << "        \"discord_bits\": " << fmt_double(cii.worst.discord_bits) << ",\n";
  o << "        \"discord_side\": " << quote(cii.worst.discord_side) << ",\n";
  o << "        \"discord_mode\": " << quote(cii.worst.discord_mode) << ",\n";
  o << "        \"classical_correlation_bits\": "
    << fmt_double(cii.worst.classical_correlation_bits) << "\n";
  o << "      },\n";
  o << "      \"bound_bits\": " << fmt_double(cii.bound_bits) << ",\n";
  o << "      \"family_size\": " << cii.family_size << ",\n";
  o << "      \"family_info\": " << quote(cii.family_info) << ",\n";
  o << "      \"applicable\": " << bool_str(cii.applicable) << ",\n";
  o << "      \"pass\": " << bool_str(cii.pass) << ",\n";
  o << "      \"note\": " << quote(cii.note) << "\n";
  o << "    },\n";

  const ConditionIIIResult& ciii = report.condition_iii;
  o << "    \"condition_iii\": {\n";
  o << "      \"retriever\": " << quote(ciii.retriever) << ",\n";
  o << "      \"metric\": " << quote(ciii.metric) << ",\n";
  o << "      \"min_fidelity\": " << fmt_double(ciii.min_fidelity) << ",\n";
  o << "      \"mean_fidelity\": " << fmt_double(ciii.mean_fidelity) << ",\n";
  o << "      \"max_trace_distance\": " << fmt_double(ciii.max_trace_distance) << ",\n";
  o << "      \"applicable\": " << bool_str(ciii.applicable) << ",\n";
  o << "      \"pass\": " << bool_str(ciii.pass) << "\n";
  o << "    },\n";

  o << "    \"exploratory\": " << bool_str(report.exploratory) << ",\n";
  o << "    \"overall\": " << quote(report.overall) << ",\n";
  o << "    \"pass\": " << bool_str(report.pass) << ",\n";
  o << "    \"notes\": [";
  for (std::size_t i = 0; i < report.notes.size(); ++i) {
    if (i) o << ", ";
    o << quote(report.notes[i]);
  }
  o << "]\n";
  o << "  }\n";
  o << "}\n";
  return o.str();
}

ParsedReport report_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report: JSON parse error: ") + e.what());
  }

  ParsedReport out;
  try {
    out.meta.tool_name = root.at("tool").at("name").get<std::string>();
    out.meta.tool_version = root.at("tool").at("version").get<std::string>();
    out.meta.input_digest = root.at("input_digest").get<std::string>();
    out.meta.generated_at = root.at("generated_at").get<std::string>();

    const json& r = root.at("report");
    AuditReport& rep = out.report;
    rep.scenario_kind = r.at("scenario_kind").get<std::string>();
    rep.t1 = Rational::parse(r.at("window").at("t1").get<std::string>());
    rep.t2 = Rational::parse(r.at("window").at("t2").get<std::string>());
    rep.family_description = r.at("family").at("description").get<std::string>();
    rep.family_size = r.at("family").at("size").get<std::size_t>();

    const json& ci = r.at("condition_i");
    rep.condition_i.tolerance = ci.at("tolerance").get<double>();
    for (const json& p : ci.at("probe_times"))
      rep.condition_i.probe_times.push_back(Rational::parse(p.get<std::string>()));
    for (const json& g : ci.at("groupings")) {
      GroupingResult gr;
      for (const json& l : g.at("labels")) gr.labels.push_back(l.get<std::string>());
      gr.evaluated = g.at("evaluated").get<bool>();
      gr.max_pairwise_distance = g.at("max_pairwise_distance").get<double>();
      gr.pass = g.at("pass").get<bool>();
      gr.note = g.at("note").get<std::string>();
      rep.condition_i.groupings.push_back(std::move(gr));
    }
    rep.condition_i.pass = ci.at("pass").get<bool>();

    const json& cii = r.at("condition_ii");
    for (const json& l : cii.at("cut").at(0)) rep.condition_ii.cut.first.push_back(l.get<std::string>());
    for (const json& l : cii.at("cut").at(1))
      rep.condition_ii.cut.second.push_back(l.get<std::string>());
    const json& prof = cii.at("profile");
    rep.condition_ii.worst.mutual_information_bits = prof.at("mutual_information_bits").get<double>();
    rep.condition_ii.worst.nearest_product_relent_bits =
        prof.at("nearest_product_relent_bits").get<double>();
    rep.condition_ii.worst.negativity = prof.at("negativity").get<double>();
    rep.condition_ii.worst.ppt = prof.at("ppt").get<bool>();
    rep.condition_ii.worst.discord_bits = prof.at("discord_bits").get<double>();
    rep.condition_ii.worst.discord_side = prof.at("discord_side").get<std::string>();
    rep.condition_ii.worst.discord_mode = prof.at("discord_mode").get<std::string>();
    rep.condition_ii.worst.classical_correlation_bits =
        prof.at("classical_correlation_bits").get<double>();
    rep.condition_ii.bound_bits = cii.at("bound_bits").get<double>();
    rep.condition_ii.family_size = cii.at("family_size").get<std::size_t>();
    rep.condition_ii.family_info = cii.at("family_info").get<std::string>();
    rep.condition_ii.applicable = cii.at("applicable").get<bool>();
    rep.condition_ii.pass = cii.at("pass").get<bool>();
    rep.condition_ii.note = cii.at("note").get<std::string>();

    const json& ciii = r.at("condition_iii");
    rep.condition_iii.retriever = ciii.at("retriever").get<std::string>();
    rep.condition_iii.metric = ciii.at("metric").get<std::string>();
    rep.condition_iii.min_fidelity = ciii.at("min_fidelity").get<double>();
    rep.condition_iii.mean_fidelity = ciii.at("mean_fidelity").get<double>();
    rep.condition_iii.max_trace_distance = ciii.at("max_trace_distance").get<double>();
    rep.condition_iii.applicable = ciii.at("applicable").get<bool>();
    rep.condition_iii.pass = ciii.at("pass").get<bool>();

    rep.exploratory = r.at("exploratory").get<bool>();
    rep.overall = r.at("overall").get<std::string>();
    rep.pass = r.at("pass").get<bool>();
    for (const json& n : r.at("notes")) rep.notes.push_back(n.get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: malformed document: ") + e.what());
  }
  return out;
}

}  // namespace vqi
