#include "smallcal/small_sample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "smallcal/coverage_law.hpp"
#include "smallcal/errors.hpp"
#include "smallcal/rational.hpp"

namespace smallcal {
namespace {

constexpr double kRootTol = 1e-9;

void check_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) throw DomainError(std::string(name) + " must lie in (0, 1)");
}

double cdf_at(double m, std::int64_t n, double c) {
  return coverage_cdf(CoverageLaw(m, n), c);
}

std::int64_t guarded_floor(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::floor(x));
}

// m = ceil(n q) and its relaxation m_bar = n q. When n q is an integer up to
// rounding, m_bar is snapped onto it so the two laws coincide exactly.
struct RelaxedIndex {
  std::int64_t m;
  double m_bar;
};

RelaxedIndex relaxed_index(std::int64_t n, double q) {
  const double product = static_cast<double>(n) * q;
  const std::int64_t m = std::clamp<std::int64_t>(guarded_ceil(product), 1, n);
  const double nearest = std::round(product);
  const bool snapped = std::abs(product - nearest) <= 1e-9 * std::max(1.0, product);
  return {m, snapped ? nearest : product};
}

// First n in [1, cap] with satisfied(n), assuming the predicate is monotone
// (false then true) from n = prefix onwards. Below prefix every n is tried.
template <typename Pred>
std::optional<std::int64_t> first_satisfying(Pred satisfied, std::int64_t prefix,
                                             std::int64_t cap) {
  const std::int64_t linear_end = std::min(prefix, cap);
  for (std::int64_t n = 1; n <= linear_end; ++n) {
    if (satisfied(n)) return n;
  }
  if (linear_end >= cap) return std::nullopt;
  std::int64_t bad = linear_end;
  std::int64_t good = std::max<std::int64_t>(2 * bad, 1);
  while (!satisfied(std::min(good, cap))) {
    if (good >= cap) return std::nullopt;
    bad = good;
    good *= 2;
  }
  good = std::min(good, cap);
  while (good - bad > 1) {
    const std::int64_t mid = bad + (good - bad) / 2;
    if (satisfied(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  return good;
}

}  // namespace

SolveResult solve_level(std::int64_t n_cal, double c_min, double alpha) {
  if (n_cal < 1) throw DomainError("solve_level: calibration size must be >= 1");
  check_open_unit(c_min, "solve_level: c_min");
  check_open_unit(alpha, "solve_level: alpha");

  const double n = static_cast<double>(n_cal);
  // P(C >= c_min) >= 1 - alpha  <=>  F(c_min; m) <= alpha.
  auto meets = [&](double m) { return cdf_at(m, n_cal, c_min) <= alpha; };

  if (!meets(n)) {
    throw InfeasibleError("no order statistic of " + std::to_string(n_cal) +
                          " scores reaches coverage " + std::to_string(c_min) +
                          " with confidence " + std::to_string(1.0 - alpha) +
                          "; more calibration data is needed");
  }

  // F(c_min; m) tends to 1 as m -> 0, so the root lies in (0, n].
  double lo = 0.0;
  double hi = n;
  while (hi - lo > kRootTol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (meets(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double m_bar = hi;

  auto m = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::ceil(m_bar)), 1, n_cal);
  // The bisection tolerance can straddle an integer; settle on the integer law.
  while (m > 1 && meets(static_cast<double>(m - 1))) --m;
  while (!meets(static_cast<double>(m))) ++m;
  if (static_cast<std::int64_t>(std::ceil(m_bar)) != m) m_bar = static_cast<double>(m);

  const CoverageLaw law(static_cast<double>(m), n_cal);
  return {m, m_bar, static_cast<double>(m) / n, coverage_survival(law, c_min)};
}

double c_min_of(std::int64_t n_cal, std::int64_t m, double alpha, const Tolerance& tol) {
  check_open_unit(alpha, "c_min_of: alpha");
  if (m < 1 || m > n_cal) {
    throw DomainError("c_min_of: order index must lie in 1.." + std::to_string(n_cal));
  }
  const CoverageLaw law(static_cast<double>(m), n_cal);
  double c = coverage_ppf(law, alpha, tol);
  // Round toward the conservative side: the returned level must itself
  // satisfy F(c) <= alpha, so solve_level(n, c, alpha) accepts m.
  double step = std::numeric_limits<double>::epsilon() * std::max(c, 1e-300);
  while (c > 0.0 && coverage_cdf(law, c) > alpha) {
    c = std::max(0.0, c - step);
    step *= 2.0;
  }
  return c;
}

GBounds g_bounds(std::int64_t n_cal, double q_tilde, double c_min, double alpha) {
  if (n_cal < 1) throw DomainError("g_bounds: calibration size must be >= 1");
  if (!(q_tilde > 0.0 && q_tilde <= 1.0)) throw DomainError("g_bounds: q_tilde must lie in (0, 1]");
  check_open_unit(c_min, "g_bounds: c_min");
  check_open_unit(alpha, "g_bounds: alpha");

  const RelaxedIndex idx = relaxed_index(n_cal, q_tilde);
  const double n = static_cast<double>(n_cal);
  const double integer = cdf_at(static_cast<double>(idx.m), n_cal, c_min) - alpha;
  const double upper = reg_inc_beta(c_min, idx.m_bar, n - idx.m_bar + 1.0) - alpha;
  // Beta(m_bar + 1, n - m_bar) degenerates to a point mass at 1 when m_bar = n.
  const double rest = n - idx.m_bar;
  const double lower = (rest > 0.0 ? reg_inc_beta(c_min, idx.m_bar + 1.0, rest) : 0.0) - alpha;
  return {lower, integer, upper};
}

PlanResult min_calibration_size(double c_min, double q_tilde, double alpha,
                                const PlanOptions& opts) {
  check_open_unit(c_min, "plan: c_min");
  check_open_unit(q_tilde, "plan: q_tilde");
  check_open_unit(alpha, "plan: alpha");
  if (opts.slack && !(*opts.slack > 0.0)) throw DomainError("plan: slack must be > 0");
  if (opts.max_n < 1) throw DomainError("plan: max_n must be >= 1");

  const std::int64_t cap = opts.max_n;
  auto unreachable = [&] {
    return InfeasibleError("coverage " + std::to_string(c_min) + " with confidence " +
                           std::to_string(1.0 - alpha) + " at quantile level " +
                           std::to_string(q_tilde) + " is not reachable with n <= " +
                           std::to_string(cap));
  };

  // The upper curve decreases in n throughout. The lower one uses
  // Beta(m_bar + 1, n - m_bar), whose second parameter is below 1 for the
  // first few n; it rises there before decreasing, so that stretch is
  // scanned exhaustively.
  const auto upper_ok = [&](std::int64_t n) { return g_bounds(n, q_tilde, c_min, alpha).upper <= 0.0; };
  const auto lower_ok = [&](std::int64_t n) { return g_bounds(n, q_tilde, c_min, alpha).lower <= 0.0; };

  const auto n_sup = first_satisfying(upper_ok, 1, cap);
  if (!n_sup) throw unreachable();
  const double rising = std::ceil(2.0 / (1.0 - q_tilde)) + 1.0;
  const auto prefix = static_cast<std::int64_t>(std::min(rising, static_cast<double>(*n_sup)));
  const auto n_inf = first_satisfying(lower_ok, std::max<std::int64_t>(prefix, 16), *n_sup);
  if (!n_inf) throw unreachable();

  for (std::int64_t n = *n_inf; n <= cap; ++n) {
    const double nd = static_cast<double>(n);
    const double slack = opts.slack.value_or(0.5 / nd);
    const std::int64_t m_lo = std::max<std::int64_t>(1, guarded_ceil(nd * (q_tilde - slack)));
    const std::int64_t m_hi = std::min<std::int64_t>(n, guarded_floor(nd * (q_tilde + slack)));
    if (m_lo > m_hi) continue;
    auto meets = [&](std::int64_t m) { return cdf_at(static_cast<double>(m), n, c_min) <= alpha; };
    if (!meets(m_hi)) continue;
    std::int64_t bad = m_lo - 1;
    std::int64_t good = m_hi;
    while (good - bad > 1) {
      const std::int64_t mid = bad + (good - bad) / 2;
      if (meets(mid)) {
        good = mid;
      } else {
        bad = mid;
      }
    }
    return {*n_inf, *n_sup, n, good, static_cast<double>(good) / nd};
  }
  throw unreachable();
}

}  // namespace smallcal
