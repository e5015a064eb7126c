#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace smallcal {

/// A non-empty sample of finite conformity scores.
class ScoreSet {
 public:
  /// Throws DomainError if `scores` is empty or holds a non-finite value.
  explicit ScoreSet(std::vector<double> scores);

  std::span<const double> values() const { return scores_; }
  std::size_t size() const { return scores_.size(); }
  bool is_sorted() const { return sorted_; }

  /// Copy with the entries in non-decreasing order.
  ScoreSet sorted() const;

 private:
  ScoreSet(std::vector<double> scores, bool sorted) : scores_(std::move(scores)), sorted_(sorted) {}

  std::vector<double> scores_;
  bool sorted_ = false;
};

/// m = ceil(n q), the order statistic used as the level-q sample quantile.
/// Throws DomainError unless n >= 1 and 0 < q < 1.
std::int64_t order_index(std::int64_t n, double q);

/// The m-th smallest score with m = order_index(|s|, q).
double sample_quantile(const ScoreSet& s, double q);

/// The m-th smallest score (1-based). Throws DomainError unless 1 <= m <= |s|.
double order_statistic(const ScoreSet& s, std::int64_t m);

}  // namespace smallcal
