#include "smallcal/conformal.hpp"

#include <cmath>
#include <limits>

#include "smallcal/coverage_law.hpp"
#include "smallcal/errors.hpp"
#include "smallcal/small_sample.hpp"

namespace smallcal {
namespace {

void check_level(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw DomainError(std::string(name) + " must lie in (0, 1)");
}

ConformalPredictor unbounded_predictor(std::int64_t required_m, std::int64_t n_cal,
                                       const GuaranteeSpec& spec) {
  ConformalPredictor p;
  p.m = required_m;
  p.n_cal = n_cal;
  p.quantile_level = 1.0;
  p.correction = std::numeric_limits<double>::infinity();
  p.unbounded = true;
  p.guarantee = spec;
  return p;
}

}  // namespace

void validate(const GuaranteeSpec& spec) {
  if (const auto* c = std::get_if<ClassicGuarantee>(&spec)) {
    check_level(c->c_nom, "c_nom");
  } else {
    const auto& s = std::get<SmallSampleGuarantee>(spec);
    check_level(s.c_min, "c_min");
    check_level(s.alpha, "alpha");
  }
}

ScoreSet scores(std::span<const CalibrationRecord> records) {
  if (records.empty()) throw DomainError("no calibration records");
  std::vector<double> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!std::isfinite(r.y_true) || !std::isfinite(r.y_pred) || !std::isfinite(r.u_heuristic)) {
      throw DomainError("record " + std::to_string(i) + " has a non-finite field");
    }
    if (r.u_heuristic < 0.0) {
      throw DomainError("record " + std::to_string(i) + " has a negative heuristic width");
    }
    out.push_back(std::abs(r.y_true - r.y_pred) - r.u_heuristic);
  }
  return ScoreSet(std::move(out));
}

std::optional<double> classic_level(std::int64_t n_cal, double c_nom) {
  const std::int64_t m = classic_order_index(n_cal, c_nom);
  if (m > n_cal) return std::nullopt;
  return static_cast<double>(m) / static_cast<double>(n_cal);
}

std::optional<std::int64_t> calibration_order_index(std::int64_t n_cal, const GuaranteeSpec& spec) {
  validate(spec);
  if (const auto* c = std::get_if<ClassicGuarantee>(&spec)) {
    const std::int64_t m = classic_order_index(n_cal, c->c_nom);
    if (m > n_cal) return std::nullopt;
    return m;
  }
  const auto& g = std::get<SmallSampleGuarantee>(spec);
  try {
    return solve_level(n_cal, g.c_min, g.alpha).m;
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

ConformalPredictor calibrate(std::span<const CalibrationRecord> records, const GuaranteeSpec& spec,
                             UnboundedPolicy policy) {
  validate(spec);
  const ScoreSet s = scores(records).sorted();
  const auto n_cal = static_cast<std::int64_t>(s.size());

  std::optional<std::string> group = records.front().group;
  for (const auto& r : records) {
    if (r.group != group) throw DomainError("calibrate: records span several groups");
  }

  const auto index = calibration_order_index(n_cal, spec);
  if (!index) {
    if (policy == UnboundedPolicy::kForbid) {
      throw InfeasibleError("the requested guarantee needs more than " + std::to_string(n_cal) +
                            " calibration scores");
    }
    const auto* c = std::get_if<ClassicGuarantee>(&spec);
    auto p = unbounded_predictor(c ? classic_order_index(n_cal, c->c_nom) : n_cal + 1, n_cal, spec);
    p.group = group;
    return p;
  }
  const std::int64_t m = *index;

  ConformalPredictor p;
  p.m = m;
  p.n_cal = n_cal;
  p.quantile_level = static_cast<double>(m) / static_cast<double>(n_cal);
  p.correction = order_statistic(s, m);
  p.guarantee = spec;
  p.group = group;
  return p;
}

GroupedCalibration calibrate_grouped(std::span<const CalibrationRecord> records,
                                     const GuaranteeSpec& spec,
                                     std::span<const std::string> expected_groups,
                                     UnboundedPolicy policy) {
  if (records.empty()) throw DomainError("no calibration records");
  std::map<std::string, std::vector<CalibrationRecord>> partition;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].group) {
      throw DomainError("record " + std::to_string(i) + " has no group label");
    }
    partition[*records[i].group].push_back(records[i]);
  }
  GroupedCalibration out;
  for (const auto& [label, rows] : partition) {
    out.predictors.emplace(label, calibrate(rows, spec, policy));
  }
  for (const auto& label : expected_groups) {
    if (!partition.contains(label)) out.missing.push_back(label);
  }
  return out;
}

PredictionInterval predict_interval(const ConformalPredictor& p, double y_pred, double u_heuristic) {
  if (!std::isfinite(y_pred)) throw DomainError("predict_interval: y_pred must be finite");
  if (!(u_heuristic >= 0.0) || !std::isfinite(u_heuristic)) {
    throw DomainError("predict_interval: heuristic width must be finite and >= 0");
  }
  if (p.unbounded) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {-inf, inf, false, true};
  }
  const double half = u_heuristic + p.correction;
  if (half < 0.0) return {y_pred, y_pred, true, false};
  return {y_pred - half, y_pred + half, false, false};
}

}  // namespace smallcal
