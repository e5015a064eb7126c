#pragma once

#include <cstdint>
#include <span>

namespace smallcal {

/// A test-set observation and the closed interval predicted for it.
struct AuditRow {
  double y_true;
  double lo;
  double hi;
};

struct HitCount {
  std::int64_t hits;
  std::int64_t n_test;
};

/// Counts rows with lo <= y_true <= hi. Throws DomainError on empty input.
HitCount count_hits(std::span<const AuditRow> rows);

struct ConfidenceInterval {
  double low;
  double high;
};

/// Two-sided Clopper-Pearson interval for a binomial proportion.
ConfidenceInterval clopper_pearson(std::int64_t hits, std::int64_t n_test, double confidence);

struct CoverageAudit {
  std::int64_t hits;
  std::int64_t n_test;
  double point_estimate;
  double ci_low;
  double ci_high;
  double confidence;
};

CoverageAudit audit_coverage(std::span<const AuditRow> rows, double confidence);

}  // namespace smallcal
