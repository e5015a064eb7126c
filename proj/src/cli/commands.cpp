#include "smallcal/cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <CLI11.hpp>

#include "smallcal/audit.hpp"
#include "smallcal/cli/csv.hpp"
#include "smallcal/coverage_law.hpp"
#include "smallcal/mc_harness.hpp"
#include "smallcal/small_sample.hpp"

namespace smallcal::cli {
namespace {

constexpr const char* kSignNote =
    "small-sample target enforced as F_C(c_min; m) <= alpha, i.e. P(C >= c_min) >= 1 - alpha";

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

bool is_small_sample(const GuaranteeSpec& spec) { return std::holds_alternative<SmallSampleGuarantee>(spec); }

void note_predictor(const ConformalPredictor& p, std::vector<std::string>& warnings) {
  const std::string who = p.group ? "group '" + *p.group + "'" : "predictor";
  if (p.unbounded) {
    warnings.push_back(who + ": the requested guarantee needs more than " + std::to_string(p.n_cal) +
                       " calibration scores; intervals are unbounded");
  } else if (p.correction < 0.0) {
    warnings.push_back(who + ": negative correction " + format_double(p.correction) +
                       "; intervals with u < " + format_double(-p.correction) + " are clamped to zero width");
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

GuaranteeSpec resolve_guarantee(const GuaranteeFlags& flags) {
  GuaranteeSpec spec;
  if (flags.c_nom) {
    if (flags.c_min || flags.alpha) throw UsageError("--c-nom cannot be combined with --c-min or --alpha");
    spec = ClassicGuarantee{*flags.c_nom};
  } else if (flags.c_min && flags.alpha) {
    spec = SmallSampleGuarantee{*flags.c_min, *flags.alpha};
  } else if (flags.c_min || flags.alpha) {
    throw UsageError("--c-min and --alpha must be given together");
  } else {
    throw UsageError("a guarantee is required: --c-nom, or --c-min with --alpha");
  }
  validate(spec);
  return spec;
}

CommandResult cmd_calibrate(const CalibrateArgs& args, std::istream& csv) {
  const GuaranteeSpec spec = resolve_guarantee(args.guarantee);
  const auto records = read_calibration_csv(csv, args.source);
  const auto policy = args.forbid_unbounded ? UnboundedPolicy::kForbid : UnboundedPolicy::kAllow;

  CommandResult out;
  ReportEnvelope& r = out.report;
  r.command = "calibrate";
  r.inputs = {{"source", args.source},
              {"n_records", records.size()},
              {"grouped", args.grouped},
              {"guarantee", guarantee_to_json(spec)}};
  if (!args.expected_groups.empty()) r.inputs["expected_groups"] = args.expected_groups;

  if (args.grouped) {
    const GroupedCalibration g = calibrate_grouped(records, spec, args.expected_groups, policy);
    Json predictors = Json::object();
    for (const auto& [label, p] : g.predictors) {
      predictors[label] = predictor_to_json(p);
      note_predictor(p, r.warnings);
      out.infeasible = out.infeasible || p.unbounded;
    }
    r.results = {{"predictors", predictors}, {"missing_groups", g.missing}};
    for (const auto& label : g.missing) r.warnings.push_back("group '" + label + "' has no calibration records");
  } else {
    std::set<std::optional<std::string>> labels;
    for (const auto& rec : records) labels.insert(rec.group);
    if (labels.size() > 1) throw UsageError("records carry several group labels; pass --grouped");
    const ConformalPredictor p = calibrate(records, spec, policy);
    r.results = {{"predictor", predictor_to_json(p)}};
    note_predictor(p, r.warnings);
    out.infeasible = p.unbounded;
  }
  if (is_small_sample(spec)) r.warnings.emplace_back(kSignNote);
  return out;
}

CommandResult cmd_solve_level(const SolveLevelArgs& args) {
  const SolveResult s = solve_level(args.n_cal, args.c_min, args.alpha);
  CommandResult out;
  out.report.command = "solve-level";
  out.report.inputs = {{"n_cal", args.n_cal}, {"c_min", args.c_min}, {"alpha", args.alpha}};
  out.report.results = {{"m", s.m},
                        {"m_bar", s.m_bar},
                        {"q_tilde", s.q_tilde},
                        {"achieved_confidence", s.achieved_confidence}};
  out.report.warnings.emplace_back(kSignNote);
  return out;
}

CommandResult cmd_cmin(const CMinArgs& args) {
  if (args.n_cal < 1) throw UsageError("--n-cal must be >= 1");
  if (args.m.has_value() == args.c_nom.has_value()) throw UsageError("exactly one of --m and --c-nom is required");
  CommandResult out;
  out.report.command = "cmin";
  out.report.inputs = {{"n_cal", args.n_cal}, {"alpha", args.alpha}};
  std::int64_t m = 0;
  if (args.m) {
    m = *args.m;
    out.report.inputs["m"] = m;
  } else {
    validate(ClassicGuarantee{*args.c_nom});
    out.report.inputs["c_nom"] = *args.c_nom;
    m = classic_order_index(args.n_cal, *args.c_nom);
    if (m > args.n_cal) {
      throw InfeasibleError("the classic level for c_nom " + format_double(*args.c_nom) + " needs order index " +
                            std::to_string(m) + " > n_cal = " + std::to_string(args.n_cal));
    }
  }
  const double c_min = c_min_of(args.n_cal, m, args.alpha);
  out.report.results = {{"m", m},
                        {"quantile_level", static_cast<double>(m) / static_cast<double>(args.n_cal)},
                        {"c_min", c_min}};
  out.report.warnings.emplace_back(kSignNote);
  return out;
}

CommandResult cmd_plan_n(const PlanArgs& args) {
  PlanOptions opts;
  opts.slack = args.slack;
  opts.max_n = args.max_n;
  const PlanResult p = min_calibration_size(args.c_min, args.q_tilde, args.alpha, opts);
  CommandResult out;
  out.report.command = "plan-n";
  out.report.inputs = {{"c_min", args.c_min},
                       {"alpha", args.alpha},
                       {"q_tilde", args.q_tilde},
                       {"slack", args.slack ? Json(*args.slack) : Json("0.5/n")},
                       {"max_n", args.max_n}};
  out.report.results = {{"n_inf", p.n_inf},
                        {"n_sup", p.n_sup},
                        {"n_min", p.n_min},
                        {"m_at_min", p.m_at_min},
                        {"q_achieved", p.q_achieved}};
  out.report.warnings.emplace_back(kSignNote);
  if (p.n_min > p.n_sup) {
    out.report.warnings.push_back("n_min exceeds n_sup: the slack is narrower than one order-statistic step");
  }
  return out;
}

CommandResult cmd_audit(const AuditArgs& args, std::istream& csv) {
  const auto rows = read_audit_csv(csv, args.source);
  const CoverageAudit a = audit_coverage(rows, args.confidence);
  CommandResult out;
  out.report.command = "audit";
  out.report.inputs = {{"source", args.source}, {"confidence", args.confidence}};
  out.report.results = {{"hits", a.hits},
                        {"n_test", a.n_test},
                        {"point_estimate", a.point_estimate},
                        {"ci_low", a.ci_low},
                        {"ci_high", a.ci_high}};
  return out;
}

CommandResult cmd_simulate(const SimulateArgs& args) {
  if (args.bins < 0) throw UsageError("--bins must be >= 0");
  ExperimentConfig cfg;
  cfg.n_cal = args.n_cal;
  cfg.n_mc = args.n_mc;
  cfg.guarantee = resolve_guarantee(args.guarantee);
  cfg.seed = args.seed;
  cfg.threads = args.threads;
  const CoverageSample sample = run_experiment(cfg);

  const std::int64_t m = *calibration_order_index(cfg.n_cal, cfg.guarantee);
  const CoverageLaw law(static_cast<double>(m), cfg.n_cal);
  const double target = std::visit(
      [](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, ClassicGuarantee>) {
          return g.c_nom;
        } else {
          return g.c_min;
        }
      },
      cfg.guarantee);
  const CoverageSummary summary = summarize(sample);

  CommandResult out;
  ReportEnvelope& r = out.report;
  r.command = "simulate";
  r.inputs = {{"n_cal", cfg.n_cal},
              {"n_mc", cfg.n_mc},
              {"seed", cfg.seed},
              {"bins", args.bins},
              {"error_model", "folded_std_normal"},
              {"guarantee", guarantee_to_json(cfg.guarantee)}};
  r.results = {{"m", m},
               {"quantile_level", static_cast<double>(m) / static_cast<double>(cfg.n_cal)},
               {"coverage_law", {{"a", law.alpha_param()}, {"b", law.beta_param()}}},
               {"summary",
                {{"mean", summary.mean}, {"variance", summary.variance}, {"min", summary.min}, {"max", summary.max}}},
               {"target_coverage", target},
               {"fraction_below_target", fraction_below(sample, target)},
               {"analytic_fraction_below_target", coverage_cdf(law, target)},
               {"expected_coverage", expected_coverage(law)},
               {"ks_distance", compare_to_law(sample, law)},
               {"ks_critical_99", 1.63 / std::sqrt(static_cast<double>(cfg.n_mc))}};

  if (args.bins > 0) {
    const auto bins = histogram(sample, args.bins);
    Json rows = Json::array();
    for (const auto& b : bins) rows.push_back({{"low", b.low}, {"high", b.high}, {"count", b.count}});
    r.results["histogram"] = rows;
    if (args.histogram_csv) {
      auto f = open_output(*args.histogram_csv);
      f << "bin_low,bin_high,count\n";
      for (const auto& b : bins) f << format_double(b.low) << ',' << format_double(b.high) << ',' << b.count << '\n';
      r.results["histogram_csv"] = *args.histogram_csv;
    }
  } else if (args.histogram_csv) {
    throw UsageError("--histogram-csv needs --bins > 0");
  }
  if (args.samples_csv) {
    auto f = open_output(*args.samples_csv);
    f << "realization,correction,coverage\n";
    for (std::size_t i = 0; i < sample.coverages.size(); ++i) {
      f << i << ',' << format_double(sample.corrections[i]) << ',' << format_double(sample.coverages[i]) << '\n';
    }
    r.results["samples_csv"] = *args.samples_csv;
  }
  if (is_small_sample(cfg.guarantee)) r.warnings.emplace_back(kSignNote);
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Split conformal calibration with small-sample coverage guarantees", "smallcal"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "Write the report as one JSON line");

  auto add_guarantee = [](CLI::App* cmd, GuaranteeFlags& g) {
    cmd->add_option("--c-nom", g.c_nom, "Nominal marginal coverage (classic guarantee)");
    cmd->add_option("--c-min", g.c_min, "Minimum coverage (small-sample guarantee)");
    cmd->add_option("--alpha", g.alpha, "Allowed probability of falling below --c-min");
  };

  std::string input;
  CalibrateArgs cal;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Calibrate a predictor from y_true,y_pred[,u][,group] rows");
  calibrate_cmd->add_option("input", input, "CSV file, or - for standard input")->required();
  add_guarantee(calibrate_cmd, cal.guarantee);
  calibrate_cmd->add_flag("--grouped", cal.grouped, "Calibrate each group label independently");
  calibrate_cmd->add_option("--groups", cal.expected_groups, "Expected group labels; absent ones are reported")
      ->delimiter(',');
  calibrate_cmd->add_flag("--forbid-unbounded", cal.forbid_unbounded, "Fail instead of returning unbounded predictors");

  SolveLevelArgs solve;
  auto* solve_cmd = app.add_subcommand("solve-level", "Smallest order index meeting P(C >= c_min) >= 1 - alpha");
  solve_cmd->add_option("--n-cal", solve.n_cal)->required();
  solve_cmd->add_option("--c-min", solve.c_min)->required();
  solve_cmd->add_option("--alpha", solve.alpha)->required();

  CMinArgs cmin;
  auto* cmin_cmd = app.add_subcommand("cmin", "Coverage reached with confidence 1 - alpha by a given predictor");
  cmin_cmd->add_option("--n-cal", cmin.n_cal)->required();
  auto* m_opt = cmin_cmd->add_option("--m", cmin.m, "Order index of the correction");
  auto* c_opt = cmin_cmd->add_option("--c-nom", cmin.c_nom, "Classic predictor of this nominal coverage");
  m_opt->excludes(c_opt);
  cmin_cmd->add_option("--alpha", cmin.alpha)->required();

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand("plan-n", "Calibration-set size needed for a minimum coverage");
  plan_cmd->add_option("--c-min", plan.c_min)->required();
  plan_cmd->add_option("--alpha", plan.alpha)->required();
  plan_cmd->add_option("--q-tilde", plan.q_tilde)->required();
  plan_cmd->add_option("--slack", plan.slack, "Allowed |m/n - q_tilde|; default half an order-statistic step");
  plan_cmd->add_option("--max-n", plan.max_n, "Largest calibration size searched");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Test-set coverage with a Clopper-Pearson interval");
  audit_cmd->add_option("input", input, "CSV file with y_true,lo,hi rows, or - for standard input")->required();
  audit_cmd->add_option("--confidence", audit.confidence, "Confidence of the interval");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo coverage distribution for folded normal errors");
  sim_cmd->add_option("--n-cal", sim.n_cal);
  sim_cmd->add_option("--n-mc", sim.n_mc);
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--bins", sim.bins, "Histogram bins; 0 disables the histogram");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads; 0 uses all cores");
  sim_cmd->add_option("--histogram-csv", sim.histogram_csv, "Write histogram rows to this CSV file");
  sim_cmd->add_option("--samples-csv", sim.samples_csv, "Write per-realization results to this CSV file");
  add_guarantee(sim_cmd, sim.guarantee);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kInputError;
  }

  auto with_input = [&](auto&& run) {
    if (input == "-") return run(std::cin, std::string("<stdin>"));
    std::ifstream f(input);
    if (!f) throw DomainError("cannot open '" + input + "'");
    return run(f, input);
  };

  try {
    CommandResult result;
    if (calibrate_cmd->parsed()) {
      result = with_input([&](std::istream& in, const std::string& name) {
        cal.source = name;
        return cmd_calibrate(cal, in);
      });
    } else if (solve_cmd->parsed()) {
      result = cmd_solve_level(solve);
    } else if (cmin_cmd->parsed()) {
      result = cmd_cmin(cmin);
    } else if (plan_cmd->parsed()) {
      result = cmd_plan_n(plan);
    } else if (audit_cmd->parsed()) {
      result = with_input([&](std::istream& in, const std::string& name) {
        audit.source = name;
        return cmd_audit(audit, in);
      });
    } else {
      result = cmd_simulate(sim);
    }
    out << (json ? render_json_line(result.report) : render_text(result.report));
    return result.infeasible ? kInfeasible : kSuccess;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace smallcal::cli
