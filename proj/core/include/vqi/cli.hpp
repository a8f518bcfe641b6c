#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vqi::cli {

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAuditFail = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitEngineError = 3;

struct RunOptions {
  std::optional<std::string> mode;  // "ensemble" | "sampled"; default from the file
  std::string out_path;             // write a JSON trajectory summary when set
};

struct AuditOptions {
  std::string format = "text";  // stdout rendering: "text" | "json"
  std::string out_path;         // write the JSON report when set
};

int cmd_run(const std::string& path, const RunOptions& options, std::ostream& out,
            std::ostream& err);
int cmd_audit(const std::string& path, const AuditOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_list(std::ostream& out);

// argv-style entry point used by the vqi binary and the tests.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vqi::cli
