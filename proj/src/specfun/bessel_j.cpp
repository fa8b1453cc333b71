#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "twopiece/errors.hpp"
#include "twopiece/specfun.hpp"

namespace twopiece::specfun {
namespace {

using ld = long double;

constexpr double kMaxOrder = 50.0;
constexpr double kMaxArgument = 100.0;

// The ascending series loses roughly log10(I_nu(x) / |J_nu(x)|) digits to
// cancellation; in long double that stays below 1e-12 relative in this region.
bool use_series(double nu, double x) { return x <= 12.0 || x <= 0.8 * nu; }

EvalResult ascending_series(double nu, double x, bool derivative) {
  const ld half = static_cast<ld>(x) / 2;
  const ld q = -half * half;
  const ld eps = std::numeric_limits<ld>::epsilon();
  // (x/2)^nu / Gamma(nu + 1)
  ld term = std::exp(static_cast<ld>(nu) * std::log(half) - std::lgamma(static_cast<ld>(nu) + 1));
  ld sum = 0, abs_sum = 0, last = 0;
  for (int k = 0; k < 400; ++k) {
    if (k > 0) term *= q / (static_cast<ld>(k) * (static_cast<ld>(nu) + k));
    // d/dx (x/2)^{nu+2k} = (nu + 2k)/x (x/2)^{nu+2k}
    const ld contribution = derivative ? term * (static_cast<ld>(nu) + 2 * k) / x : term;
    sum += contribution;
    abs_sum += std::fabs(contribution);
    last = std::fabs(contribution);
    // terms decrease monotonically once k(k+nu) > x^2/4
    if (static_cast<ld>(k) * (k + nu) > -q && last <= eps * std::fabs(sum) * 1e-2L) break;
    if (sum == 0 && term == 0) break;
  }
  const ld err = 8 * eps * abs_sum + last;
  return {static_cast<double>(sum), static_cast<double>(err)};
}

// Schlafli's integral, valid for Re x > 0 and real nu:
//   J_nu(x) = 1/pi int_0^pi cos(nu t - x sin t) dt
//           - sin(nu pi)/pi int_0^inf exp(-x sinh t - nu t) dt.
// Used only where J_nu is not exponentially small (x > 0.8 nu), so the O(1)
// integrand costs no relative accuracy.
EvalResult schlafli(double nu, double x, bool derivative) {
  using boost::math::quadrature::gauss;
  constexpr double pi = std::numbers::pi;

  auto oscillatory = [&](double t) {
    const double phase = nu * t - x * std::sin(t);
    return derivative ? std::sin(t) * std::sin(phase) : std::cos(phase);
  };
  auto decaying = [&](double t) {
    const double e = std::exp(-x * std::sinh(t) - nu * t);
    return derivative ? -std::sinh(t) * e : e;
  };
  auto composite = [](auto&& f, double lo, double hi, int panels) {
    const double width = (hi - lo) / panels;
    double sum = 0;
    for (int i = 0; i < panels; ++i) {
      sum += gauss<double, 20>::integrate(f, lo + i * width, lo + (i + 1) * width);
    }
    return sum;
  };

  // ~1.5 panels per oscillation of the phase nu t - x sin t
  const int panels = 4 + static_cast<int>((nu + x) / 4.0);
  const double osc_fine = composite(oscillatory, 0.0, pi, 2 * panels);
  const double osc_coarse = composite(oscillatory, 0.0, pi, panels);

  double tail_fine = 0, tail_coarse = 0;
  const double s = std::sin(nu * pi);
  if (s != 0.0) {
    const double upper = std::asinh(45.0 / x);
    tail_fine = composite(decaying, 0.0, upper, 16);
    tail_coarse = composite(decaying, 0.0, upper, 8);
  }
  const double value = osc_fine / pi - s / pi * tail_fine;
  const double err = std::fabs(osc_fine - osc_coarse) / pi + std::fabs(s) / pi * std::fabs(tail_fine - tail_coarse) +
                     16 * std::numeric_limits<double>::epsilon();
  return {value, err};
}

}  // namespace

EvalResult bessel_j(double nu, double x, bool derivative) {
  if (!(nu >= 0.0 && nu <= kMaxOrder)) throw DomainError("bessel_j: order outside [0, 50]");
  if (!(x > 0.0 && x <= kMaxArgument)) throw DomainError("bessel_j: argument outside (0, 100]");
  return use_series(nu, x) ? ascending_series(nu, x, derivative) : schlafli(nu, x, derivative);
}

}  // namespace twopiece::specfun
