#pragma once

// Special functions backing every distribution computation in the toolkit:
// log-gamma, the regularized incomplete beta function and its inverse, and
// the error function.

namespace smallcal {

/// Stopping rule for iterative inversions.
struct Tolerance {
  double abs_tol = 1e-12;
  int max_iter = 200;

  /// Throws DomainError unless abs_tol > 0 and max_iter >= 1.
  void validate() const;
};

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln B(a, b) for a, b > 0, computed without cancellation for large arguments.
double log_beta(double a, double b);

/// Both tails of the regularized incomplete beta function.
/// `lower` is I_x(a, b) and `upper` is 1 - I_x(a, b); whichever tail is
/// small is computed directly so it keeps full relative accuracy.
struct BetaTails {
  double lower;
  double upper;
};

BetaTails reg_inc_beta_tails(double x, double a, double b);

/// I_x(a, b). Requires 0 <= x <= 1 and a, b > 0.
double reg_inc_beta(double x, double a, double b);

/// Density of Beta(a, b) at x.
double beta_pdf(double x, double a, double b);

/// Returns x with |I_x(a, b) - p| <= tol.abs_tol.
///
/// Newton iteration inside a shrinking bracket, with bisection whenever the
/// Newton step leaves the bracket. If the bracket collapses to adjacent
/// doubles first, the closer endpoint is the exact answer at double
/// precision and is returned. Throws ConvergenceError after tol.max_iter
/// iterations.
double inv_reg_inc_beta(double p, double a, double b, const Tolerance& tol = {});

/// Error function; throws DomainError on non-finite input.
double erf(double x);

}  // namespace smallcal
