#pragma once

#include <cstdint>
#include <optional>

#include "smallcal/special_functions.hpp"

namespace smallcal {

/// Order index chosen so that P(C >= c_min) >= 1 - alpha.
struct SolveResult {
  std::int64_t m;
  double m_bar;                // continuous root, m = ceil(m_bar)
  double q_tilde;              // m / n_cal
  double achieved_confidence;  // P(C >= c_min) under the chosen m
};

/// Smallest m <= n_cal with coverage_cdf(Beta(m, n_cal - m + 1), c_min) <= alpha.
///
/// The continuous root m_bar of F(c_min; m_bar) = alpha is bracketed on
/// (0, n_cal] and bisected to 1e-9, then m = ceil(m_bar) is confirmed
/// against the integer law. Throws InfeasibleError when even m = n_cal
/// misses the target (c_min^n_cal > alpha).
SolveResult solve_level(std::int64_t n_cal, double c_min, double alpha);

/// Coverage reached with confidence 1 - alpha by the predictor that uses the
/// m-th order statistic of n_cal scores: the alpha-quantile of its law.
double c_min_of(std::int64_t n_cal, std::int64_t m, double alpha, const Tolerance& tol = {});

/// Signed constraint values at calibration size n_cal for quantile level
/// q_tilde. Each is F(c_min) - alpha, so a value <= 0 means the target is
/// met. `integer` uses m = ceil(n_cal q_tilde); `upper` and `lower` use the
/// relaxed m_bar = n_cal q_tilde with Beta(m_bar, n - m_bar + 1) and
/// Beta(m_bar + 1, n - m_bar) and sandwich it: lower <= integer <= upper.
struct GBounds {
  double lower;
  double integer;
  double upper;
};

GBounds g_bounds(std::int64_t n_cal, double q_tilde, double c_min, double alpha);

struct PlanOptions {
  /// Allowed distance of the achieved level m/n from q_tilde. Unset means
  /// half an order-statistic step, 0.5 / n, at each candidate n.
  std::optional<double> slack;
  std::int64_t max_n = 10'000'000;
};

/// Calibration-size bracket for a target minimum coverage.
///
/// No n < n_inf reaches the target with a level within one order-statistic
/// step of q_tilde; every n >= n_sup reaches it with m = ceil(n q_tilde).
/// n_min is the first n >= n_inf where some m with |m/n - q_tilde| <= slack
/// reaches the target, m_at_min the smallest such m.
struct PlanResult {
  std::int64_t n_inf;
  std::int64_t n_sup;
  std::int64_t n_min;
  std::int64_t m_at_min;
  double q_achieved;
};

/// Throws InfeasibleError if the target is unreachable for every
/// n <= opts.max_n (e.g. c_min >= q_tilde).
PlanResult min_calibration_size(double c_min, double q_tilde, double alpha,
                                const PlanOptions& opts = {});

}  // namespace smallcal
