#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's special functions; the beta CDF oracle normalizes by
// quadrature, so it does not share the log-beta or continued-fraction paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace smallcal::oracle {

/// Adaptive 7/15-point Gauss-Kronrod quadrature on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-15, int depth = 0) {
  static constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                   0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * wgk[7];
  double gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = h * xgk[j];
    const double s = f(c - x) + f(c + x);
    kronrod += wgk[j] * s;
    if (j % 2 == 1) gauss += wg[j / 2] * s;
  }
  kronrod *= h;
  gauss *= h;
  // Stop at the requested accuracy or once the estimate reaches the noise
  // floor of the integrand relative to this panel's mass (log-space Beta
  // kernels with shapes ~1e3 carry ~1e-13 relative rounding noise).
  const double err = std::abs(kronrod - gauss);
  if (err <= abs_tol || err <= 1e-12 * std::abs(kronrod) || depth >= 40 || h < 1e-14) return kronrod;
  return integrate(f, a, c, 0.5 * abs_tol, depth + 1) + integrate(f, c, b, 0.5 * abs_tol, depth + 1);
}

/// Beta(a, b) density scaled by its value at the mode (or at an endpoint
/// for a, b < 1), so large parameters do not underflow.
struct ScaledBetaDensity {
  double a, b, log_peak;
  ScaledBetaDensity(double a_, double b_) : a(a_), b(b_) {
    double mode = 0.5;
    if (a >= 1.0 && b >= 1.0 && a + b > 2.0) mode = (a - 1.0) / (a + b - 2.0);
    log_peak = log_kernel(std::clamp(mode, 1e-300, 1.0 - 1e-16));
  }
  double log_kernel(double t) const { return (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t); }
  double operator()(double t) const {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(log_kernel(t) - log_peak);
  }
};

/// Mass of the scaled density on [0, x]; substitutes t = s^(1/a) near 0 when
/// a < 1 so the integrand stays bounded.
inline double mass_from_zero(const ScaledBetaDensity& d, double x) {
  if (x <= 0.0) return 0.0;
  if (d.a < 1.0) {
    auto g = [&](double s) {
      const double t = std::pow(s, 1.0 / d.a);
      return std::exp((d.b - 1.0) * std::log1p(-t) - d.log_peak) / d.a;
    };
    return integrate(g, 0.0, std::pow(x, d.a), 1e-17);
  }
  // Split at the mode region so the peak is never missed by the first panel.
  std::vector<double> knots{0.0};
  const double mode = (d.a + d.b > 2.0) ? (d.a - 1.0) / (d.a + d.b - 2.0) : 0.5;
  const double sd = std::sqrt(d.a * d.b / ((d.a + d.b) * (d.a + d.b) * (d.a + d.b + 1.0)));
  for (double k : {-12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0}) {
    const double t = mode + k * sd;
    if (t > 0.0 && t < x) knots.push_back(t);
  }
  knots.push_back(x);
  std::sort(knots.begin(), knots.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    total += integrate(std::ref(d), knots[i], knots[i + 1], 1e-17);
  }
  return total;
}

/// I_x(a, b) by quadrature of the density, normalized by quadrature.
inline double beta_cdf(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const ScaledBetaDensity d(a, b);
  const ScaledBetaDensity mirrored(b, a);
  // Integrate the part nearer each endpoint from that endpoint, using the
  // mirrored density for the right-hand part.
  const double split = 0.5;
  const double left_total = mass_from_zero(d, split);
  // Mirror's log_peak differs; rescale to the same reference.
  const double rescale = std::exp(mirrored.log_peak - d.log_peak);
  const double right_total = mass_from_zero(mirrored, 1.0 - split) * rescale;
  const double total = left_total + right_total;
  if (x <= split) return mass_from_zero(d, x) / total;
  return 1.0 - mass_from_zero(mirrored, 1.0 - x) * rescale / total;
}

/// Bisection of a non-decreasing function to the root of f(x) = target.
inline double bisect(const std::function<double(double)>& f, double target, double lo, double hi,
                     int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// erf by its Maclaurin series (accurate for |x| <= 3).
inline double erf_series(double x) {
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-18) break;
  }
  return 2.0 / std::sqrt(3.14159265358979323846) * sum;
}

/// Smallest m in 1..n with F(c; m) <= alpha, scanning every m; 0 if none.
inline std::int64_t scan_min_index(std::int64_t n, double c, double alpha,
                                   const std::function<double(double, std::int64_t, double)>& cdf) {
  for (std::int64_t m = 1; m <= n; ++m) {
    if (cdf(static_cast<double>(m), n, c) <= alpha) return m;
  }
  return 0;
}

/// Empirical CDF sup-distance of `sample` against `cdf`.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace smallcal::oracle
