#include "smallcal/audit.hpp"

#include <cmath>
#include <string>

#include "smallcal/errors.hpp"
#include "smallcal/special_functions.hpp"

namespace smallcal {

HitCount count_hits(std::span<const AuditRow> rows) {
  if (rows.empty()) throw DomainError("audit: no test rows");
  std::int64_t hits = 0;
  for (const auto& r : rows) {
    if (r.lo <= r.y_true && r.y_true <= r.hi) ++hits;
  }
  return {hits, static_cast<std::int64_t>(rows.size())};
}

ConfidenceInterval clopper_pearson(std::int64_t hits, std::int64_t n_test, double confidence) {
  if (n_test < 1) throw DomainError("clopper_pearson: n_test must be >= 1");
  if (hits < 0 || hits > n_test) {
    throw DomainError("clopper_pearson: hits " + std::to_string(hits) + " outside 0.." +
                      std::to_string(n_test));
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw DomainError("clopper_pearson: confidence must lie in (0, 1)");
  }
  const double tail = 0.5 * (1.0 - confidence);
  const double k = static_cast<double>(hits);
  const double n = static_cast<double>(n_test);
  const double low = hits == 0 ? 0.0 : inv_reg_inc_beta(tail, k, n - k + 1.0);
  const double high = hits == n_test ? 1.0 : inv_reg_inc_beta(1.0 - tail, k + 1.0, n - k);
  return {low, high};
}

CoverageAudit audit_coverage(std::span<const AuditRow> rows, double confidence) {
  const HitCount hc = count_hits(rows);
  const ConfidenceInterval ci = clopper_pearson(hc.hits, hc.n_test, confidence);
  const double point = static_cast<double>(hc.hits) / static_cast<double>(hc.n_test);
  return {hc.hits, hc.n_test, point, ci.low, ci.high, confidence};
}

}  // namespace smallcal
