#include "smallcal/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "smallcal/errors.hpp"
#include "smallcal/rational.hpp"

namespace smallcal {

ScoreSet::ScoreSet(std::vector<double> scores) : scores_(std::move(scores)) {
  if (scores_.empty()) throw DomainError("score set must not be empty");
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (!std::isfinite(scores_[i])) {
      throw DomainError("score " + std::to_string(i) + " is not finite");
    }
  }
  sorted_ = std::is_sorted(scores_.begin(), scores_.end());
}

ScoreSet ScoreSet::sorted() const {
  if (sorted_) return *this;
  std::vector<double> copy = scores_;
  std::sort(copy.begin(), copy.end());
  return ScoreSet(std::move(copy), true);
}

std::int64_t order_index(std::int64_t n, double q) {
  if (n < 1) throw DomainError("order_index: n must be >= 1");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("order_index: q must lie in (0, 1)");
  const std::int64_t m = guarded_ceil(static_cast<double>(n) * q);
  return std::clamp<std::int64_t>(m, 1, n);
}

double order_statistic(const ScoreSet& s, std::int64_t m) {
  const auto n = static_cast<std::int64_t>(s.size());
  if (m < 1 || m > n) {
    throw DomainError("order statistic " + std::to_string(m) + " outside 1.." + std::to_string(n));
  }
  if (s.is_sorted()) return s.values()[static_cast<std::size_t>(m - 1)];
  const ScoreSet sorted = s.sorted();
  return sorted.values()[static_cast<std::size_t>(m - 1)];
}

double sample_quantile(const ScoreSet& s, double q) {
  return order_statistic(s, order_index(static_cast<std::int64_t>(s.size()), q));
}

}  // namespace smallcal
