#pragma once

#include <cstdint>
#include <vector>

#include "smallcal/conformal.hpp"
#include "smallcal/coverage_law.hpp"

namespace smallcal {

/// Distribution of the surrogate's absolute error in synthetic studies.
enum class ErrorModel {
  kFoldedStdNormal,  // |Z|, Z ~ N(0, 1)
};

struct ExperimentConfig {
  std::int64_t n_cal = 100;
  std::int64_t n_mc = 10'000;
  GuaranteeSpec guarantee = ClassicGuarantee{0.9};
  std::uint64_t seed = 0;
  ErrorModel error_model = ErrorModel::kFoldedStdNormal;
  /// Worker threads; 0 picks the hardware concurrency. Output does not
  /// depend on this value.
  unsigned threads = 0;
};

/// Exact coverage and correction of every Monte Carlo realization.
struct CoverageSample {
  std::vector<double> coverages;
  std::vector<double> corrections;
};

/// Repeats null-model calibration on fresh synthetic scores n_mc times.
///
/// Realization r draws its n_cal scores from the counter stream (seed, r)
/// and is evaluated with the analytic error CDF, so the output is a pure
/// function of the config. Throws InfeasibleError if the guarantee cannot
/// be met with n_cal scores.
CoverageSample run_experiment(const ExperimentConfig& cfg);

/// P(|error| <= x) under the model.
double error_cdf(ErrorModel model, double x);

/// Kolmogorov distance between the empirical CDF of the coverages and the
/// analytic coverage law.
double compare_to_law(const CoverageSample& sample, const CoverageLaw& law);

struct HistogramBin {
  double low;
  double high;
  std::int64_t count;
};

/// Equal-width bins over [0, 1]; a value of exactly 1 lands in the last bin.
std::vector<HistogramBin> histogram(const CoverageSample& sample, int bins);

struct CoverageSummary {
  double mean;
  double variance;  // unbiased
  double min;
  double max;
};

CoverageSummary summarize(const CoverageSample& sample);

/// Fraction of realizations with coverage strictly below c.
double fraction_below(const CoverageSample& sample, double c);

}  // namespace smallcal
