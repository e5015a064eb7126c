#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "smallcal/quantiles.hpp"

namespace smallcal {

/// One calibration observation: truth, surrogate prediction, and the
/// heuristic half-width U (0 for the null uncertainty model).
struct CalibrationRecord {
  double y_true = 0.0;
  double y_pred = 0.0;
  double u_heuristic = 0.0;
  std::optional<std::string> group;
};

/// Marginal guarantee: E[C] >= c_nom.
struct ClassicGuarantee {
  double c_nom;
  friend bool operator==(const ClassicGuarantee&, const ClassicGuarantee&) = default;
};

/// Small-sample guarantee: P(C >= c_min) >= 1 - alpha.
struct SmallSampleGuarantee {
  double c_min;
  double alpha;
  friend bool operator==(const SmallSampleGuarantee&, const SmallSampleGuarantee&) = default;
};

using GuaranteeSpec = std::variant<ClassicGuarantee, SmallSampleGuarantee>;

/// Throws DomainError unless every level lies strictly inside (0, 1).
void validate(const GuaranteeSpec& spec);

/// Calibrated correction for a (possibly grouped) uncertainty model.
///
/// When the requested level is infeasible for n_cal scores the predictor is
/// unbounded: m = n_cal + 1 conceptually, `correction` is +infinity and every
/// interval is the whole real line.
struct ConformalPredictor {
  std::int64_t m = 0;
  std::int64_t n_cal = 0;
  double quantile_level = 0.0;
  double correction = 0.0;
  bool unbounded = false;
  GuaranteeSpec guarantee = ClassicGuarantee{0.9};
  std::optional<std::string> group;

  friend bool operator==(const ConformalPredictor&, const ConformalPredictor&) = default;
};

/// s_i = |y_true_i - y_pred_i| - u_i. Throws DomainError on empty input or
/// invalid records (non-finite values, negative u).
ScoreSet scores(std::span<const CalibrationRecord> records);

/// Corrected level q* = ceil((n_cal + 1) c_nom) / n_cal, or nullopt when the
/// order index would exceed n_cal.
std::optional<double> classic_level(std::int64_t n_cal, double c_nom);

/// Order index a predictor calibrated on n_cal scores uses under `spec`, or
/// nullopt when the guarantee is infeasible at this size.
std::optional<std::int64_t> calibration_order_index(std::int64_t n_cal, const GuaranteeSpec& spec);

enum class UnboundedPolicy { kAllow, kForbid };

/// Split-conformal calibration of all records as one population.
/// With kForbid, an infeasible level throws InfeasibleError instead of
/// yielding an unbounded predictor. Records must all carry the same group
/// label or none.
ConformalPredictor calibrate(std::span<const CalibrationRecord> records, const GuaranteeSpec& spec,
                             UnboundedPolicy policy = UnboundedPolicy::kAllow);

struct GroupedCalibration {
  std::map<std::string, ConformalPredictor> predictors;
  /// Expected groups that had no records.
  std::vector<std::string> missing;
};

/// Calibrates each group independently. Every record must carry a group.
/// Labels in `expected_groups` with no records are listed in `missing`.
GroupedCalibration calibrate_grouped(std::span<const CalibrationRecord> records,
                                     const GuaranteeSpec& spec,
                                     std::span<const std::string> expected_groups = {},
                                     UnboundedPolicy policy = UnboundedPolicy::kAllow);

struct PredictionInterval {
  double lo;
  double hi;
  /// u + correction was negative and the width was clamped to zero.
  bool degenerate = false;
  bool unbounded = false;
};

/// [y_pred - u - Q, y_pred + u + Q]. A negative total half-width collapses
/// the interval onto y_pred and sets `degenerate`.
PredictionInterval predict_interval(const ConformalPredictor& p, double y_pred, double u_heuristic);

}  // namespace smallcal
