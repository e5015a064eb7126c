#include "smallcal/coverage_law.hpp"

#include <string>

#include "smallcal/errors.hpp"

namespace smallcal {
namespace {

void check_level(double c_nom) {
  if (!(c_nom > 0.0 && c_nom < 1.0)) throw DomainError("nominal coverage must lie in (0, 1)");
}

void check_n(std::int64_t n_cal) {
  if (n_cal < 1) throw DomainError("calibration size must be >= 1");
}

void check_unit(double c, const char* what) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

CoverageLaw::CoverageLaw(double m_, std::int64_t n_cal_) : m(m_), n_cal(n_cal_) {
  check_n(n_cal);
  if (!(m > 0.0 && m <= static_cast<double>(n_cal))) {
    throw DomainError("coverage law: order index " + std::to_string(m) + " outside (0, " +
                      std::to_string(n_cal) + "]");
  }
}

double coverage_cdf(const CoverageLaw& law, double c) {
  check_unit(c, "coverage");
  return reg_inc_beta_tails(c, law.alpha_param(), law.beta_param()).lower;
}

double coverage_survival(const CoverageLaw& law, double c) {
  check_unit(c, "coverage");
  return reg_inc_beta_tails(c, law.alpha_param(), law.beta_param()).upper;
}

double coverage_ppf(const CoverageLaw& law, double p, const Tolerance& tol) {
  check_unit(p, "probability");
  return inv_reg_inc_beta(p, law.alpha_param(), law.beta_param(), tol);
}

double expected_coverage(const CoverageLaw& law) {
  return law.m / (static_cast<double>(law.n_cal) + 1.0);
}

Rational marginal_gap_simple_exact(std::int64_t n_cal, double c_nom) {
  check_n(n_cal);
  check_level(c_nom);
  const Rational level = rationalize(c_nom);
  const std::int64_t m = (Rational(n_cal, 1) * level).ceil();
  return Rational(m, n_cal + 1) - level;
}

double marginal_gap_simple(std::int64_t n_cal, double c_nom) {
  return marginal_gap_simple_exact(n_cal, c_nom).to_double();
}

Rational marginal_gap_classic_exact(std::int64_t n_cal, double c_nom) {
  check_n(n_cal);
  check_level(c_nom);
  const Rational level = rationalize(c_nom);
  const std::int64_t m = (Rational(n_cal + 1, 1) * level).ceil();
  if (m > n_cal) {
    throw InfeasibleError("classic correction needs order statistic " + std::to_string(m) +
                          " of only " + std::to_string(n_cal) + " scores");
  }
  return Rational(m, n_cal + 1) - level;
}

double marginal_gap_classic(std::int64_t n_cal, double c_nom) {
  return marginal_gap_classic_exact(n_cal, c_nom).to_double();
}

std::int64_t classic_order_index(std::int64_t n_cal, double c_nom) {
  check_n(n_cal);
  check_level(c_nom);
  return guarded_ceil(static_cast<double>(n_cal + 1) * c_nom);
}

}  // namespace smallcal
