#include <cmath>
#include <limits>
#include <numbers>

#include "twopiece/errors.hpp"
#include "twopiece/specfun.hpp"

namespace twopiece::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

// Integration line Im t = theta for K_{i nu}(x) = 1/2 int exp(-x cosh t + i nu t) dt.
// The saddle points sit on Im t = pi/2 once nu > x; moving towards them
// extracts exp(-nu theta) analytically. Stopping short of pi/2 by delta keeps
// exp(-x sin(delta) cosh s) decay along the line, at the price of a
// cancellation factor of about exp(nu delta).
double contour_height(double nu, double x) {
  if (nu * kPi / 2 - x <= 3.0) return 0.0;
  const double delta = std::min(kPi / 2, 2.5 / nu);
  return kPi / 2 - delta;
}

struct TrapezoidResult {
  double value;
  double error;
};

// Returns exp(+nu theta) * K (or K') i.e. the integral without its prefactor,
TrapezoidResult shifted_trapezoid(double nu, double x, double theta, bool derivative) {
  const double ct = std::cos(theta), st = std::sin(theta);
  const double decay = x * ct;
  // Tail cut where exp(-x cos(theta) cosh s) < e^-40 relative to the result,
  // whose size relative to the peak integrand is about exp(-nu (pi/2 - theta)).
  const double needed = 40.0 + nu * (kPi / 2 - theta);
  const double s_max = std::acosh(std::max(1.0, (needed + x) / decay)) + 0.5;

  auto integrand = [&](double s) {
    const double ch = std::cosh(s), sh = std::sinh(s);
    const double env = std::exp(-decay * ch);
    const double phase = nu * s - x * st * sh;
    if (!derivative) return env * std::cos(phase);
    return -env * (ct * ch * std::cos(phase) - st * sh * std::sin(phase));
  };

  // Successive halving reuses every previous node.
  int n = 32;
  double h = s_max / n;
  double sum = 0.5 * integrand(0.0);
  double abs_sum = std::fabs(sum);
  for (int k = 1; k <= n; ++k) {
    const double v = integrand(k * h);
    sum += v;
    abs_sum += std::fabs(v);
  }
  double estimate = h * sum;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int level = 0; level < 18; ++level) {
    double added = 0;
    for (int k = 0; k < n; ++k) {
      const double v = integrand((2 * k + 1) * h / 2);
      added += v;
      abs_sum += std::fabs(v);
    }
    sum += added;
    n *= 2;
    h /= 2;
    const double refined = h * sum;
    const double diff = std::fabs(refined - estimate);
    const double roundoff = 16 * eps * h * abs_sum;
    estimate = refined;
    // Trapezoid errors fall doubly exponentially once the oscillation is
    // resolved, so a small change between levels bounds the finer result.
    if (level >= 2 && diff <= std::max(1e-15 * std::fabs(refined), roundoff)) {
      return {refined, diff + roundoff};
    }
  }
  throw AccuracyError("bessel_k_imag: trapezoidal rule did not converge", std::fabs(estimate));
}

EvalResult evaluate(double nu, double x, bool derivative, bool scaled) {
  if (!std::isfinite(nu)) throw DomainError("bessel_k_imag: order must be finite");
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("bessel_k_imag: argument must be positive");
  nu = std::fabs(nu);
  const double theta = contour_height(nu, x);
  const TrapezoidResult r = shifted_trapezoid(nu, x, theta, derivative);
  // prefactor exp(-nu theta), optionally times exp(nu pi / 2)
  const double log_pre = scaled ? nu * (kPi / 2 - theta) : -nu * theta;
  const double pre = std::exp(log_pre);
  return {pre * r.value, pre * r.error};
}

}  // namespace

EvalResult bessel_k_imag(double nu, double x, bool derivative) { return evaluate(nu, x, derivative, false); }

EvalResult bessel_k_imag_scaled(double nu, double x, bool derivative) { return evaluate(nu, x, derivative, true); }

}  // namespace twopiece::specfun
