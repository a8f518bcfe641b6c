#include "vqi/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "vqi/measures.hpp"
#include "vqi/scenario_json.hpp"
#include "vqi/version.hpp"

namespace vqi::cli {

namespace {

int guard(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const LabelError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const CausalityError& e) {
    err << "causality error: " << e.what() << "\n";
    return kExitEngineError;
  } catch (const Error& e) {
    err << "execution error: " << e.what() << "\n";
    return kExitEngineError;
  } catch (const std::exception& e) {
    err << "execution error: " << e.what() << "\n";
    return kExitEngineError;
  }
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string render_records(const std::map<std::string, int>& records) {
  if (records.empty()) return "-";
  std::string out;
  for (const auto& [name, value] : records) {
    if (!out.empty()) out += " ";
    out += name + "=" + std::to_string(value);
  }
  return out;
}

// Party marginal entropies for one branch; parties with no live systems are
// skipped.
std::vector<std::pair<std::string, double>> party_entropies(const std::vector<Party>& parties,
                                                            const Branch& branch) {
  std::vector<std::pair<std::string, double>> out;
  for (const Party& party : parties) {
    std::vector<Label> live;
    for (const Label& l : party.systems)
      if (branch.state.dims().contains(l)) live.push_back(l);
    if (live.empty()) continue;
    out.emplace_back(party.name, von_neumann_entropy(partial_trace(branch.state, live)));
  }
  return out;
}

void print_matrix_magnitudes(std::ostream& out, const ComplexMatrix& m) {
  for (std::size_t r = 0; r < m.dim(); ++r) {
    out << "    ";
    for (std::size_t c = 0; c < m.dim(); ++c) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%7.4f", std::abs(m(r, c)));
      out << buf << (c + 1 < m.dim() ? " " : "");
    }
    out << "\n";
  }
}

std::string trajectory_to_json(const ScenarioFile& file, const Trajectory& traj,
                               const ReportMeta& meta) {
  std::ostringstream o;
  o << "{\n";
  o << "  \"tool\": {\"name\": \"" << meta.tool_name << "\", \"version\": \"" << meta.tool_version
    << "\"},\n";
  o << "  \"input_digest\": \"" << meta.input_digest << "\",\n";
  o << "  \"generated_at\": \"" << meta.generated_at << "\",\n";
  o << "  \"trajectory\": {\n";
  o << "    \"scenario_kind\": \"" << to_string(file.spec.kind) << "\",\n";
  o << "    \"mode\": \"" << (traj.mode == ExecutionMode::ensemble ? "ensemble" : "sampled")
    << "\",\n";
  o << "    \"checkpoints\": [\n";
  for (std::size_t c = 0; c < traj.checkpoints.size(); ++c) {
    const Checkpoint& cp = traj.checkpoints[c];
    o << "      {\"time\": \"" << cp.time.str() << "\", \"branches\": [\n";
    for (std::size_t b = 0; b < cp.branches.size(); ++b) {
      const Branch& branch = cp.branches[b];
      o << "        {\"probability\": " << fmt_double(branch.probability) << ", \"records\": {";
      bool first = true;
      for (const auto& [name, value] : branch.records) {
        if (!first) o << ", ";
        first = false;
        o << "\"" << name << "\": " << value;
      }
      o << "}, \"party_entropy_bits\": {";
      const auto entropies = party_entropies(traj.parties, branch);
      for (std::size_t e = 0; e < entropies.size(); ++e) {
        if (e) o << ", ";
        o << "\"" << entropies[e].first << "\": " << fmt_double(entropies[e].second);
      }
      o << "}}" << (b + 1 < cp.branches.size() ? "," : "") << "\n";
    }
    o << "      ]}" << (c + 1 < traj.checkpoints.size() ? "," : "") << "\n";
  }
  o << "    ]\n";
  o << "  }\n";
  o << "}\n";
  return o.str();
}

void write_file_or_throw(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open for writing");
  out << content;
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace

int cmd_run(const std::string& path, const RunOptions& options, std::ostream& out,
            std::ostream& err) {
  return guard(err, [&]() -> int {
    const ScenarioFile file = load_scenario_file(path);

    ExecutionMode mode = file.mode;
    if (options.mode) {
      if (*options.mode == "ensemble")
        mode = ExecutionMode::ensemble;
      else if (*options.mode == "sampled")
        mode = ExecutionMode::sampled;
      else
        throw ParseError("--mode must be 'ensemble' or 'sampled'");
    }

    const BuiltScenario built = build_scenario(file.spec);
    const Trajectory traj =
        execute(built.timeline, built.parties, mode, file.sampled, built.relativity);

    out << "scenario: " << to_string(file.spec.kind) << "\n";
    out << "mode: " << (mode == ExecutionMode::ensemble ? "ensemble" : "sampled");
    if (mode == ExecutionMode::sampled)
      out << " (seed " << file.sampled.seed << ", " << file.sampled.shots << " shots)";
    out << "\n";
    out << "window: (" << built.t1.str() << ", " << built.t2.str() << ")\n\n";

    out << "        t  probability   records           per-party entropy [bits]\n";
    for (const Checkpoint& cp : traj.checkpoints) {
      for (const Branch& branch : cp.branches) {
        char prob[32];
        std::snprintf(prob, sizeof(prob), "%.8f", branch.probability);
        char tbuf[16];
        std::snprintf(tbuf, sizeof(tbuf), "%9s", cp.time.str().c_str());
        out << tbuf << "  " << prob << "  ";
        char rec[20];
        std::snprintf(rec, sizeof(rec), "%-16s", render_records(branch.records).c_str());
        out << rec << "  ";
        const auto entropies = party_entropies(traj.parties, branch);
        for (std::size_t e = 0; e < entropies.size(); ++e) {
          char ebuf[64];
          std::snprintf(ebuf, sizeof(ebuf), "%s=%.4f", entropies[e].first.c_str(),
                        entropies[e].second);
          out << (e ? " " : "") << ebuf;
        }
        out << "\n";
      }
      // matrices above 8x8 are elided from text output
      const DensityOp avg = mixture_state(cp);
      if (avg.dim() <= 8 && avg.dim() > 1) {
        out << "  averaged state |entries| at t=" << cp.time.str() << ":\n";
        print_matrix_magnitudes(out, avg.matrix());
      }
    }

    if (!options.out_path.empty()) {
      const ReportMeta meta = make_report_meta(path);
      write_file_or_throw(options.out_path, trajectory_to_json(file, traj, meta));
      out << "\nwrote " << options.out_path << "\n";
    }
    return kExitOk;
  });
}

namespace {

std::string render_condition_i(const ConditionIResult& ci) {
  double max_dist = 0.0;
  bool any = false;
  for (const GroupingResult& g : ci.groupings)
    if (g.evaluated) {
      any = true;
      max_dist = std::max(max_dist, g.max_pairwise_distance);
    }
  std::ostringstream o;
  if (any) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max pairwise distance %.3e", max_dist);
    o << buf;
  } else {
    o << "all groupings discarded";
  }
  o << " over";
  for (const GroupingResult& g : ci.groupings) {
    o << " {";
    for (std::size_t i = 0; i < g.labels.size(); ++i) o << (i ? "," : "") << g.labels[i];
    o << "}";
  }
  return o.str();
}

std::string render_condition_ii(const ConditionIIResult& cii) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "MI %.6f bits (bound %.0f), negativity %.3e%s, discord %.3e bits",
                cii.worst.mutual_information_bits, cii.bound_bits, cii.worst.negativity,
                cii.worst.ppt ? " (PPT)" : " (NPT)", cii.worst.discord_bits);
  return buf;
}

std::string render_condition_iii(const ConditionIIIResult& ciii) {
  char buf[128];
  if (!ciii.applicable) return "no retrieval defined";
  if (ciii.metric == "fidelity")
    std::snprintf(buf, sizeof(buf), "min fidelity %.6f at %s", ciii.min_fidelity,
                  ciii.retriever.c_str());
  else
    std::snprintf(buf, sizeof(buf), "max trace distance %.3e at %s", ciii.max_trace_distance,
                  ciii.retriever.c_str());
  return buf;
}

const char* verdict(bool applicable, bool pass) {
  if (!applicable) return "N/A";
  return pass ? "PASS" : "FAIL";
}

}  // namespace

int cmd_audit(const std::string& path, const AuditOptions& options, std::ostream& out,
              std::ostream& err) {
  return guard(err, [&]() -> int {
    if (options.format != "text" && options.format != "json")
      throw ParseError("--format must be 'text' or 'json'");
    const ScenarioFile file = load_scenario_file(path);
    const AuditReport report = full_audit(file.spec, file.family);
    const ReportMeta meta = make_report_meta(path);
    const std::string json_text = report_to_json(report, meta);

    if (options.format == "json") {
      out << json_text;
    } else {
      out << "scenario: " << report.scenario_kind << "\n";
      out << "window: (" << report.t1.str() << ", " << report.t2.str() << ")   family: "
          << report.family_description << " [" << report.family_size << " samples]\n\n";
      out << "condition                           result" << std::string(44, ' ')
          << "verdict\n";
      const auto row = [&](const char* name, const std::string& value, const char* v) {
        char buf[224];
        std::snprintf(buf, sizeof(buf), "%-34s  %-84s %s", name, value.c_str(), v);
        out << buf << "\n";
      };
      row("(i)   input-independent windows", render_condition_i(report.condition_i),
          verdict(true, report.condition_i.pass));
      row("(ii)  correlations below capacity", render_condition_ii(report.condition_ii),
          verdict(report.condition_ii.applicable, report.condition_ii.pass));
      row("(iii) retrieval after the window", render_condition_iii(report.condition_iii),
          verdict(report.condition_iii.applicable, report.condition_iii.pass));
      if (!report.condition_ii.note.empty())
        out << "  note: " << report.condition_ii.note << "\n";
      out << "\noverall: " << report.overall << "\n";
      if (!report.notes.empty()) {
        out << "notes:\n";
        for (const std::string& n : report.notes) out << "  - " << n << "\n";
      }
    }

    if (!options.out_path.empty()) {
      write_file_or_throw(options.out_path, json_text);
      if (options.format == "text") out << "wrote " << options.out_path << "\n";
    }
    return report.pass ? kExitOk : kExitAuditFail;
  });
}

int cmd_list(std::ostream& out) {
  out << "available scenario kinds:\n";
  for (ScenarioKind kind : all_scenario_kinds()) {
    char buf[200];
    std::snprintf(buf, sizeof(buf), "  %-22s %s\n      example: scenarios/%s.json",
                  to_string(kind).c_str(), scenario_description(kind).c_str(),
                  to_string(kind).c_str());
    out << buf << "\n";
  }
  return kExitOk;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"timed LOCC protocol simulator and volatility auditor"};
  app.name(kToolName);

  std::string run_path;
  RunOptions run_options;
  std::string run_mode;
  CLI::App* run = app.add_subcommand("run", "execute a scenario file and print the branch table");
  run->add_option("file", run_path, "scenario JSON file")->required();
  run->add_option("--mode", run_mode, "override the execution mode (ensemble|sampled)");
  run->add_option("--out", run_options.out_path, "write a JSON trajectory summary");

  std::string audit_path;
  AuditOptions audit_options;
  CLI::App* audit =
      app.add_subcommand("audit", "evaluate the volatility conditions over the input family");
  audit->add_option("file", audit_path, "scenario JSON file")->required();
  audit->add_option("--format", audit_options.format, "stdout format (text|json)")
      ->default_val("text");
  audit->add_option("--out", audit_options.out_path, "write the JSON report");

  CLI::App* list = app.add_subcommand("list", "list scenario kinds and shipped example files");

  app.require_subcommand(1);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  if (run->parsed()) {
    if (!run_mode.empty()) run_options.mode = run_mode;
    return cmd_run(run_path, run_options, out, err);
  }
  if (audit->parsed()) return cmd_audit(audit_path, audit_options, out, err);
  if (list->parsed()) return cmd_list(out);
  err << "error: no subcommand\n";
  return kExitInputError;
}

}  // namespace vqi::cli
