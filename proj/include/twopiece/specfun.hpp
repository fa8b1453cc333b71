#pragma once

// Special functions needed by the quantization conditions of the three wells:
//
//   Ai(y), Ai'(y)              triangular well
//   J_nu(x), dJ_nu/dx          convergent exponential well (real order nu >= 0)
//   K_{i nu}(x), dK_{i nu}/dx  divergent exponential well (purely imaginary order)
//
// Every routine returns the value together with an absolute error estimate.
// All functions are pure and thread-safe.

namespace twopiece::specfun {

struct EvalResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
};

/// Airy function Ai(y), or Ai'(y) when `derivative` is set. Any finite y.
///
/// Regions: Maclaurin series in extended precision for -9 <= y <= 3, a
/// steepest-descent integral for 3 < y < 9, and the Poincare asymptotic
/// expansions beyond |y| = 9.
EvalResult airy_ai(double y, bool derivative = false);

/// Bessel function of the first kind J_nu(x) or dJ_nu/dx.
/// Domain: 0 <= nu <= 50, 0 < x <= 100.
EvalResult bessel_j(double nu, double x, bool derivative = false);

/// Modified Bessel function of imaginary order K_{i nu}(x), or its
/// x-derivative. The function is real and even in nu.
///
/// Evaluated from K_{i nu}(x) = int_0^inf exp(-x cosh t) cos(nu t) dt with the
/// trapezoidal rule, which converges double-exponentially for this integrand.
/// When nu > x the integration line is shifted to Im t = theta < pi/2 so the
/// exp(-pi nu / 2) magnitude is factored out instead of produced by
/// cancellation. Domain: x > 0; accuracy is characterized for |nu| <= 20,
/// x <= 60.
EvalResult bessel_k_imag(double nu, double x, bool derivative = false);

/// exp(pi |nu| / 2) * K_{i nu}(x): the same function with its order-dependent
/// magnitude removed, O(1) in the oscillatory region x < nu.
EvalResult bessel_k_imag_scaled(double nu, double x, bool derivative = false);

}  // namespace twopiece::specfun
