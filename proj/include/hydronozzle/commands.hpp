#pragma once

// Subcommands behind the `hydronozzle` executable. Every command returns a
// process exit status:
//   0 success, 1 verification failure, 2 config error, 3 solver failure.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hydronozzle/config.hpp"
#include "hydronozzle/errors.hpp"
#include "hydronozzle/field.hpp"

namespace hydronozzle {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

/// Exit status an error maps to (input problems -> 2, numerical failures -> 3).
int exit_code_for(ErrorCode code);

/// In-memory result of the solve pipeline.
struct SolveOutcome {
  FlowField flow;
  std::optional<StreamFunctionField> field;
  nlohmann::json summary;
};

/// Assembles, reconstructs and summarizes without touching the filesystem.
SolveOutcome run_solve(const RunConfig& cfg);

struct CheckResult {
  std::string name;
  bool passed = true;
  /// False when the check does not apply (it then counts as passed).
  bool applicable = true;
  double value = 0.0;
  std::string detail;
};

/// Full invariant suite on a flow: flux, monotonicity, bounds, residual
/// order, shear on strips and far-field decay.
std::vector<CheckResult> verify_flow(const RunConfig& cfg, const FlowField& flow);

int cmd_solve(const RunConfig& cfg);
/// Verifies artifacts in `from` (field.csv, summary.json) or solves inline.
int cmd_verify(const RunConfig& cfg, const std::optional<std::filesystem::path>& from);
/// seeds: "x1,x2;x1,x2;..."; sampler: "slice" or "bilinear".
int cmd_trace(const RunConfig& cfg, const std::string& seeds, double t_max, double step, const std::string& sampler);
int cmd_slice(const RunConfig& cfg, double y1);
int cmd_farfield(const RunConfig& cfg);

/// Parses argv, applies HYDRONOZZLE_THREADS and dispatches.
int run_cli(int argc, char** argv);

}  // namespace hydronozzle
