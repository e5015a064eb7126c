#include "smallcal/mc_harness.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "smallcal/errors.hpp"
#include "smallcal/random.hpp"
#include "smallcal/special_functions.hpp"

namespace smallcal {
namespace {

double draw_error(ErrorModel model, CounterStream& rng) {
  switch (model) {
    case ErrorModel::kFoldedStdNormal:
      return std::abs(rng.normal());
  }
  throw DomainError("unknown error model");
}

}  // namespace

double error_cdf(ErrorModel model, double x) {
  switch (model) {
    case ErrorModel::kFoldedStdNormal:
      return x <= 0.0 ? 0.0 : erf(x / std::sqrt(2.0));
  }
  throw DomainError("unknown error model");
}

CoverageSample run_experiment(const ExperimentConfig& cfg) {
  if (cfg.n_cal < 1) throw DomainError("experiment: n_cal must be >= 1");
  if (cfg.n_mc < 1) throw DomainError("experiment: n_mc must be >= 1");
  const auto m = calibration_order_index(cfg.n_cal, cfg.guarantee);
  if (!m) {
    throw InfeasibleError("guarantee cannot be met with " + std::to_string(cfg.n_cal) +
                          " calibration scores");
  }

  const auto n_mc = static_cast<std::size_t>(cfg.n_mc);
  CoverageSample out;
  out.coverages.resize(n_mc);
  out.corrections.resize(n_mc);

  // Each realization owns its output slot and its counter stream, so the
  // partition across workers cannot change the result.
  auto run_range = [&](std::size_t begin, std::size_t end) {
    std::vector<double> scores(static_cast<std::size_t>(cfg.n_cal));
    for (std::size_t r = begin; r < end; ++r) {
      CounterStream rng(cfg.seed, r);
      for (auto& s : scores) s = draw_error(cfg.error_model, rng);
      std::sort(scores.begin(), scores.end());
      const double correction = scores[static_cast<std::size_t>(*m - 1)];
      out.corrections[r] = correction;
      out.coverages[r] = error_cdf(cfg.error_model, correction);
    }
  };

  unsigned threads = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::min<std::size_t>(n_mc, 64)));
  if (threads == 1) {
    run_range(0, n_mc);
    return out;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (n_mc + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n_mc, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back(run_range, begin, end);
  }
  return out;
}

double compare_to_law(const CoverageSample& sample, const CoverageLaw& law) {
  if (sample.coverages.empty()) throw DomainError("compare_to_law: empty sample");
  std::vector<double> sorted = sample.coverages;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = coverage_cdf(law, std::clamp(sorted[i], 0.0, 1.0));
    const double i_d = static_cast<double>(i);
    d = std::max({d, f - i_d / n, (i_d + 1.0) / n - f});
  }
  return d;
}

std::vector<HistogramBin> histogram(const CoverageSample& sample, int bins) {
  if (bins < 1) throw DomainError("histogram: bins must be >= 1");
  std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
  const double width = 1.0 / bins;
  for (int b = 0; b < bins; ++b) {
    out[static_cast<std::size_t>(b)] = {b * width, b + 1 == bins ? 1.0 : (b + 1) * width, 0};
  }
  for (double c : sample.coverages) {
    const int b = std::clamp(static_cast<int>(std::floor(c * bins)), 0, bins - 1);
    ++out[static_cast<std::size_t>(b)].count;
  }
  return out;
}

CoverageSummary summarize(const CoverageSample& sample) {
  const auto& c = sample.coverages;
  if (c.empty()) throw DomainError("summarize: empty sample");
  const double n = static_cast<double>(c.size());
  double mean = 0.0;
  for (double v : c) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : c) ss += (v - mean) * (v - mean);
  const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  return {mean, c.size() > 1 ? ss / (n - 1.0) : 0.0, *lo, *hi};
}

double fraction_below(const CoverageSample& sample, double c) {
  if (sample.coverages.empty()) throw DomainError("fraction_below: empty sample");
  const auto below = std::count_if(sample.coverages.begin(), sample.coverages.end(),
                                   [c](double v) { return v < c; });
  return static_cast<double>(below) / static_cast<double>(sample.coverages.size());
}

}  // namespace smallcal
