#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "twopiece/errors.hpp"
#include "twopiece/specfun.hpp"

namespace twopiece::specfun {
namespace {

using ld = long double;

constexpr double kPi = std::numbers::pi;
// Ai(0) and -Ai'(0).
constexpr ld kAi0 = 0.355028053887817239260063186004183176L;
constexpr ld kMinusAip0 = 0.258819403792806798405183560189203963L;

constexpr double kSeriesUpper = 3.0;
constexpr double kAsymptoticAbs = 9.0;

// Ai(y) = c1 f(y) - c2 g(y) with the two Maclaurin solutions
//   f = sum 3^k (1/3)_k y^{3k} / (3k)!,  g = sum 3^k (2/3)_k y^{3k+1} / (3k+1)!.
EvalResult maclaurin(double y, bool derivative) {
  const ld t = y;
  const ld t3 = t * t * t;
  const ld eps = std::numeric_limits<ld>::epsilon();

  ld f_sum = 0, g_sum = 0, f_abs = 0, g_abs = 0, last = 0;
  if (!derivative) {
    ld f = 1, g = t;
    f_sum = f;
    g_sum = g;
    f_abs = 1;
    g_abs = std::fabs(g);
    for (int k = 1; k < 200; ++k) {
      f *= t3 / ((3 * k - 1) * (3 * k));
      g *= t3 / ((3 * k) * (3 * k + 1));
      f_sum += f;
      g_sum += g;
      f_abs += std::fabs(f);
      g_abs += std::fabs(g);
      last = kAi0 * std::fabs(f) + kMinusAip0 * std::fabs(g);
      if (last <= eps * (kAi0 * f_abs + kMinusAip0 * g_abs) * 1e-3L) break;
    }
  } else {
    // f' = sum_{k>=1} 3k f_k / y,  g' = sum_{k>=0} (3k+1) g_k / y, built by
    // recurrences that never divide by y.
    ld fp = t * t / 2, gp = 1;
    f_sum = fp;
    g_sum = gp;
    f_abs = std::fabs(fp);
    g_abs = 1;
    for (int k = 1; k < 200; ++k) {
      fp *= t3 / ((3 * k) * (3 * k + 2));
      gp *= t3 / ((3 * k) * (3 * k - 2));
      f_sum += fp;
      g_sum += gp;
      f_abs += std::fabs(fp);
      g_abs += std::fabs(gp);
      last = kAi0 * std::fabs(fp) + kMinusAip0 * std::fabs(gp);
      if (last <= eps * (kAi0 * f_abs + kMinusAip0 * g_abs) * 1e-3L) break;
    }
  }
  const ld value = kAi0 * f_sum - kMinusAip0 * g_sum;
  const ld err = 8 * eps * (kAi0 * f_abs + kMinusAip0 * g_abs) + last;
  return {static_cast<double>(value), static_cast<double>(err)};
}

// Ai(y) = exp(-zeta)/pi * int_0^inf exp(-sqrt(y) s^2) cos(s^3/3) ds, y > 0,
// and the matching representation of Ai'(y); obtained by moving the Airy
// contour through the saddle at t = i sqrt(y).
EvalResult saddle_integral(double y, bool derivative) {
  const double root = std::sqrt(y);
  const double zeta = 2.0 / 3.0 * y * root;
  const double upper = std::sqrt(45.0 / root);
  auto integrand = [&](double s) {
    const double gauss = std::exp(-root * s * s);
    const double phase = s * s * s / 3.0;
    if (!derivative) return gauss * std::cos(phase);
    return gauss * (-root * std::cos(phase) - s * std::sin(phase));
  };
  auto composite = [&](int panels) {
    const double width = upper / panels;
    double sum = 0;
    for (int i = 0; i < panels; ++i) {
      sum += boost::math::quadrature::gauss<double, 20>::integrate(
          integrand, i * width, (i + 1) * width);
    }
    return sum;
  };
  const double fine = composite(12);
  const double coarse = composite(8);
  const double scale = std::exp(-zeta) / kPi;
  const double err = scale * (std::fabs(fine - coarse) +
                              8 * std::numeric_limits<double>::epsilon() * std::fabs(fine));
  return {scale * fine, err};
}

// Poincare expansions in 1/zeta. u_k drives Ai, v_k = -(6k+1)/(6k-1) u_k drives Ai'.
// Terms are summed until they stop decreasing; the first omitted term is the
// error estimate.
struct AsymptoticSums {
  double even = 0;  // sum (-1)^k c_{2k} / zeta^{2k}
  double odd = 0;   // sum (-1)^k c_{2k+1} / zeta^{2k+1}
  double all = 0;   // sum (-1)^k c_k / zeta^k
  double tail = 0;
};

AsymptoticSums asymptotic_sums(double zeta, bool derivative) {
  AsymptoticSums out;
  double u = 1.0;
  double power = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 120; ++k) {
    if (k > 0) {
      u *= static_cast<double>((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) /
           (static_cast<double>(2 * k - 1) * 216.0 * k);
      power /= zeta;
    }
    const double c = derivative && k > 0 ? -(6.0 * k + 1) / (6.0 * k - 1) * u : u;
    const double term = c * power;
    if (std::fabs(term) >= prev) {
      out.tail = std::fabs(term);
      return out;
    }
    prev = std::fabs(term);
    const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
    out.all += sign_k * term;
    if (k % 2 == 0) {
      out.even += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      out.odd += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (std::fabs(term) < 1e-18 * std::fabs(out.all)) {
      out.tail = std::fabs(term);
      return out;
    }
  }
  out.tail = prev;
  return out;
}

EvalResult asymptotic_positive(double y, bool derivative) {
  const double zeta = 2.0 / 3.0 * y * std::sqrt(y);
  const AsymptoticSums s = asymptotic_sums(zeta, derivative);
  const double q = std::pow(y, 0.25);
  const double pre = std::exp(-zeta) / (2.0 * std::sqrt(kPi));
  if (!derivative) {
    const double scale = pre / q;
    return {scale * s.all, scale * (s.tail + 4e-16 * std::fabs(s.all))};
  }
  const double scale = -pre * q;
  return {scale * s.all, std::fabs(scale) * (s.tail + 4e-16 * std::fabs(s.all))};
}

EvalResult asymptotic_negative(double y, bool derivative) {
  const double x = -y;
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const AsymptoticSums s = asymptotic_sums(zeta, derivative);
  const double q = std::pow(x, 0.25);
  const double phase = zeta - kPi / 4;
  const double c = std::cos(phase), sn = std::sin(phase);
  // Phase errors from reducing a large zeta dominate the roundoff budget.
  const double phase_err = 4e-16 * zeta;
  if (!derivative) {
    const double scale = 1.0 / (std::sqrt(kPi) * q);
    const double value = scale * (c * s.even + sn * s.odd);
    return {value, scale * (s.tail + phase_err + 4e-16)};
  }
  const double scale = q / std::sqrt(kPi);
  const double value = scale * (sn * s.even - c * s.odd);
  return {value, scale * (s.tail + phase_err + 4e-16)};
}

}  // namespace

EvalResult airy_ai(double y, bool derivative) {
  if (!std::isfinite(y)) throw DomainError("airy_ai: argument must be finite");
  if (y >= kAsymptoticAbs) {
    // exp(-zeta) underflows long before the expansion loses accuracy
    if (y > 100.0) return {0.0, 0.0};
    return asymptotic_positive(y, derivative);
  }
  if (y > kSeriesUpper) return saddle_integral(y, derivative);
  if (y >= -kAsymptoticAbs) return maclaurin(y, derivative);
  return asymptotic_negative(y, derivative);
}

}  // namespace twopiece::specfun
