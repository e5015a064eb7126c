#pragma once

#include <cstdint>

#include "smallcal/rational.hpp"
#include "smallcal/special_functions.hpp"

namespace smallcal {

/// Distribution of the coverage of a predictor built from the m-th order
/// statistic of n_cal exchangeable scores: Beta(m, n_cal - m + 1).
///
/// `m` is real so that the same type serves the integer order index and its
/// continuous relaxation.
struct CoverageLaw {
  double m;
  std::int64_t n_cal;

  /// Throws DomainError unless n_cal >= 1 and 0 < m <= n_cal.
  CoverageLaw(double m, std::int64_t n_cal);

  double alpha_param() const { return m; }
  double beta_param() const { return static_cast<double>(n_cal) - m + 1.0; }
};

/// P(C <= c).
double coverage_cdf(const CoverageLaw& law, double c);

/// P(C > c), computed directly rather than as 1 - cdf.
double coverage_survival(const CoverageLaw& law, double c);

/// Inverse of coverage_cdf.
double coverage_ppf(const CoverageLaw& law, double p, const Tolerance& tol = {});

/// E[C] = m / (n_cal + 1).
double expected_coverage(const CoverageLaw& law);

/// E[C] - c_nom for the uncorrected predictor m = ceil(n_cal c_nom), in exact
/// arithmetic. c_nom is read as the closest fraction with a small denominator
/// (0.9 is 9/10). Lies in [-1/(n_cal+1), 1/(n_cal+1)].
Rational marginal_gap_simple_exact(std::int64_t n_cal, double c_nom);
double marginal_gap_simple(std::int64_t n_cal, double c_nom);

/// E[C] - c_nom for the conformal predictor m = ceil((n_cal+1) c_nom).
/// Lies in [0, 1/(n_cal+1)]. Throws InfeasibleError when m > n_cal.
Rational marginal_gap_classic_exact(std::int64_t n_cal, double c_nom);
double marginal_gap_classic(std::int64_t n_cal, double c_nom);

/// ceil((n_cal + 1) c_nom) with the guarded ceiling; may exceed n_cal.
std::int64_t classic_order_index(std::int64_t n_cal, double c_nom);

}  // namespace smallcal
