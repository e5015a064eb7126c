#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "smallcal/cli/report.hpp"
#include "smallcal/errors.hpp"

namespace smallcal::cli {

/// Invalid flag combination; reported with exit code 1.
class UsageError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum ExitCode : int { kSuccess = 0, kInputError = 1, kInfeasible = 2 };

/// `--c-nom` alone selects the classic guarantee; `--c-min` with `--alpha`
/// selects the small-sample one.
struct GuaranteeFlags {
  std::optional<double> c_nom;
  std::optional<double> c_min;
  std::optional<double> alpha;
};

GuaranteeSpec resolve_guarantee(const GuaranteeFlags& flags);

struct CommandResult {
  ReportEnvelope report;
  /// The report was produced but a requested guarantee is unattainable
  /// (an unbounded predictor was returned).
  bool infeasible = false;
};

struct CalibrateArgs {
  GuaranteeFlags guarantee;
  bool grouped = false;
  std::vector<std::string> expected_groups;
  bool forbid_unbounded = false;
  std::string source = "<input>";
};
CommandResult cmd_calibrate(const CalibrateArgs& args, std::istream& csv);

struct SolveLevelArgs {
  std::int64_t n_cal = 0;
  double c_min = 0.0;
  double alpha = 0.0;
};
CommandResult cmd_solve_level(const SolveLevelArgs& args);

struct CMinArgs {
  std::int64_t n_cal = 0;
  std::optional<std::int64_t> m;
  std::optional<double> c_nom;
  double alpha = 0.0;
};
CommandResult cmd_cmin(const CMinArgs& args);

struct PlanArgs {
  double c_min = 0.0;
  double alpha = 0.0;
  double q_tilde = 0.0;
  std::optional<double> slack;
  std::int64_t max_n = 10'000'000;
};
CommandResult cmd_plan_n(const PlanArgs& args);

struct AuditArgs {
  double confidence = 0.95;
  std::string source = "<input>";
};
CommandResult cmd_audit(const AuditArgs& args, std::istream& csv);

struct SimulateArgs {
  std::int64_t n_cal = 100;
  std::int64_t n_mc = 10'000;
  std::uint64_t seed = 0;
  int bins = 20;
  GuaranteeFlags guarantee;
  unsigned threads = 0;
  std::optional<std::string> histogram_csv;
  std::optional<std::string> samples_csv;
};
CommandResult cmd_simulate(const SimulateArgs& args);

/// Parses `args` (without the program name), runs the subcommand and writes
/// the report to `out` and diagnostics to `err`. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smallcal::cli
