#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "doctest.h"
#include "twopiece/errors.hpp"
#include "twopiece/specfun.hpp"

using namespace twopiece;
using specfun::airy_ai;
using specfun::bessel_j;
using specfun::bessel_k_imag;
using specfun::bessel_k_imag_scaled;

namespace {

constexpr double kPi = std::numbers::pi;

// Plain double-precision Maclaurin series for Ai', written independently of
// the library (no recurrences shared with it).
double series_airy_prime(double y) {
  const double c1 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
  const double c2 = std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
  double fp = 0, gp = 0;
  for (int k = 0; k < 60; ++k) {
    // f = sum 3^k (1/3)_k y^{3k}/(3k)!, g = sum 3^k (2/3)_k y^{3k+1}/(3k+1)!
    double poch1 = 1, poch2 = 1;
    for (int i = 0; i < k; ++i) {
      poch1 *= 3 * (1.0 / 3.0 + i);
      poch2 *= 3 * (2.0 / 3.0 + i);
    }
    if (k > 0) fp += poch1 * 3 * k * std::pow(y, 3 * k - 1) / std::tgamma(3 * k + 1.0);
    gp += poch2 * (3 * k + 1) * std::pow(y, 3 * k) / std::tgamma(3 * k + 2.0);
  }
  return c1 * fp - c2 * gp;
}

// J_0 by its textbook series, used only to bracket the first zero.
double series_j0(double x) {
  double sum = 0, term = 1;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) term *= -(x * x / 4) / (k * k);
    sum += term;
  }
  return sum;
}

template <class F>
double bisect(F f, double lo, double hi) {
  double f_lo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (f_lo < 0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Fourth-order central second difference.
template <class F>
double second_difference(F f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

template <class F>
double first_difference(F f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// Brute-force K_{i nu}(x) by exp-sinh quadrature of the real-axis integral.
double k_imag_brute(double nu, double x) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate([&](double t) { return std::exp(-x * std::cosh(t)) * std::cos(nu * t); }, 1e-13);
}

// Step resolving the local rate sqrt(|nu^2 - x^2|)/x of Bessel-type functions.
double local_step(double nu, double x) {
  const double rate = std::max(1.0, (1.0 + std::sqrt(std::fabs(nu * nu - x * x))) / x);
  return 0.01 / rate;
}

double airy_envelope(double y, bool derivative) {
  if (y >= 0) return 0.0;
  const double q = std::pow(-y, 0.25);
  return (derivative ? q : 1.0 / q) / std::sqrt(kPi);
}

}  // namespace

TEST_SUITE("airy") {
  TEST_CASE("value at the origin matches the closed form") {
    const double closed = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
    CHECK(airy_ai(0.0).value == doctest::Approx(closed).epsilon(1e-15));
    CHECK(airy_ai(0.0).value == doctest::Approx(0.3550280539).epsilon(1e-10));
  }

  TEST_CASE("decays for large positive argument") {
    const auto r = airy_ai(30.0);
    CHECK(r.value > 0.0);
    CHECK(r.value < 1e-12);
    CHECK(airy_ai(200.0).value == 0.0);
  }

  TEST_CASE("first zero of Ai' from an independent bisection") {
    const double zero = bisect(series_airy_prime, -1.2, -0.8);
    CHECK(zero == doctest::Approx(-1.0187930).epsilon(1e-7));
    CHECK(std::fabs(airy_ai(zero, true).value) < 1e-12);
    CHECK(std::fabs(airy_ai(-1.0187930, true).value) < 1e-6);
  }

  TEST_CASE("agrees with Boost to 1e-10 relative for |y| <= 30") {
    for (double y = -30.0; y <= 30.0; y += 0.0137) {
      const double ref = boost::math::airy_ai(y);
      const double ref_d = boost::math::airy_ai_prime(y);
      const double scale = std::max(std::fabs(ref), airy_envelope(y, false));
      const double scale_d = std::max(std::fabs(ref_d), airy_envelope(y, true));
      INFO("y = " << y);
      CHECK(std::fabs(airy_ai(y).value - ref) <= 1e-10 * scale);
      CHECK(std::fabs(airy_ai(y, true).value - ref_d) <= 1e-10 * scale_d);
    }
  }

  TEST_CASE("error estimates are finite, nonnegative and honest") {
    for (double y = -40.0; y <= 40.0; y += 0.173) {
      for (bool d : {false, true}) {
        const auto r = airy_ai(y, d);
        REQUIRE(std::isfinite(r.value));
        REQUIRE(r.abs_error_estimate >= 0.0);
        REQUIRE(std::isfinite(r.abs_error_estimate));
        CHECK(r.abs_error_estimate < 1e-11 * std::max(1.0, std::fabs(y)));
      }
    }
  }

  TEST_CASE("satisfies Ai'' = y Ai") {
    auto ai = [](double y) { return airy_ai(y).value; };
    for (double y = -10.0; y <= 5.0; y += 0.05) {
      INFO("y = " << y);
      CHECK(std::fabs(second_difference(ai, y, 1e-2) - y * ai(y)) <= 1e-7);
    }
  }

  TEST_CASE("derivative matches finite differences") {
    auto ai = [](double y) { return airy_ai(y).value; };
    for (double y = -10.0; y <= 8.0; y += 0.09) {
      const double d = airy_ai(y, true).value;
      const double scale = std::max(std::fabs(d), airy_envelope(y, true));
      INFO("y = " << y);
      CHECK(std::fabs(first_difference(ai, y, 1e-3) - d) <= 1e-6 * scale);
    }
  }

  TEST_CASE("rejects non-finite input") {
    CHECK_THROWS_AS(airy_ai(std::nan("")), DomainError);
    CHECK_THROWS_AS(airy_ai(INFINITY), DomainError);
  }
}

TEST_SUITE("bessel_j") {
  TEST_CASE("small argument limit") {
    CHECK(bessel_j(0.0, 1e-12).value == doctest::Approx(1.0).epsilon(1e-15));
    // J_nu(w) ~ w^nu / Gamma(1 + nu)
    const double nu = 2.7, w = 1e-4;
    CHECK(bessel_j(nu, w).value == doctest::Approx(std::pow(w, nu) / std::pow(2.0, nu) / std::tgamma(1 + nu)).epsilon(1e-7));
  }

  TEST_CASE("half-integer order closed form") {
    CHECK(std::fabs(bessel_j(0.5, kPi).value) < 1e-9);
    for (double x = 0.1; x < 100.0; x += 0.37) {
      const double closed = std::sqrt(2 / (kPi * x)) * std::sin(x);
      CHECK(std::fabs(bessel_j(0.5, x).value - closed) < 1e-12);
    }
  }

  TEST_CASE("first zero of J0 from an independent bisection") {
    const double zero = bisect(series_j0, 2.0, 3.0);
    CHECK(zero == doctest::Approx(2.4048256).epsilon(1e-7));
    CHECK(std::fabs(bessel_j(0.0, 2.4048256).value) < 1e-7);
  }

  TEST_CASE("agrees with Boost to 1e-9 relative away from zeros") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> order(0.0, 50.0), arg(1e-3, 100.0);
    for (int i = 0; i < 4000; ++i) {
      const double nu = order(rng), x = arg(rng);
      const double ref = boost::math::cyl_bessel_j(nu, x);
      const double ref_d = boost::math::cyl_bessel_j_prime(nu, x);
      // oscillation envelope where J_nu oscillates, the value itself where it is monotone
      const double env = x > nu ? 0.3 * std::sqrt(2 / (kPi * x)) : 0.0;
      INFO("nu = " << nu << ", x = " << x);
      CHECK(std::fabs(bessel_j(nu, x).value - ref) <= 1e-9 * std::max(std::fabs(ref), env));
      CHECK(std::fabs(bessel_j(nu, x, true).value - ref_d) <= 1e-9 * std::max(std::fabs(ref_d), env));
    }
  }

  TEST_CASE("satisfies Bessel's equation") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> order(0.0, 50.0), arg(0.5, 99.0);
    for (int i = 0; i < 400; ++i) {
      const double nu = order(rng), x = arg(rng);
      auto j = [&](double t) { return bessel_j(nu, t).value; };
      const double h = local_step(nu, x);
      const double res = x * x * second_difference(j, x, h) + x * first_difference(j, x, h) + (x * x - nu * nu) * j(x);
      const double scale = (x * x + nu * nu) * std::max(std::fabs(j(x)), x > nu ? 0.3 * std::sqrt(2 / (kPi * x)) : 0.0);
      INFO("nu = " << nu << ", x = " << x);
      CHECK(std::fabs(res) <= 1e-7 * std::max(scale, 1e-300));
    }
  }

  TEST_CASE("derivative matches finite differences") {
    for (double nu : {0.0, 0.3, 1.0, 2.71, 7.5, 20.0, 45.0}) {
      for (double x = 0.2; x < 100.0; x += 1.13) {
        auto j = [&](double t) { return bessel_j(nu, t).value; };
        const double d = bessel_j(nu, x, true).value;
        const double scale = std::max(std::fabs(d), x > nu ? 0.3 * std::sqrt(2 / (kPi * x)) : 0.0);
        INFO("nu = " << nu << ", x = " << x);
        CHECK(std::fabs(first_difference(j, x, local_step(nu, x)) - d) <= 1e-6 * std::max(scale, 1e-300));
      }
    }
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(bessel_j(-0.1, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(50.5, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_j(1.0, -2.0), DomainError);
    CHECK_THROWS_AS(bessel_j(1.0, 100.5), DomainError);
  }
}

TEST_SUITE("bessel_k_imag") {
  TEST_CASE("zero order reduces to the real-order K0") {
    for (double x : {0.01, 0.1, 0.5, 1.0, 2.236, 5.0, 13.0, 40.0, 60.0}) {
      CHECK(bessel_k_imag(0.0, x).value == doctest::Approx(boost::math::cyl_bessel_k(0.0, x)).epsilon(1e-12));
      CHECK(bessel_k_imag(0.0, x, true).value == doctest::Approx(-boost::math::cyl_bessel_k(1.0, x)).epsilon(1e-12));
    }
  }

  TEST_CASE("even in the order") {
    for (double nu : {0.3, 2.0, 7.7, 19.0}) {
      CHECK(bessel_k_imag(-nu, 1.7).value == bessel_k_imag(nu, 1.7).value);
    }
  }

  TEST_CASE("large-argument behaviour at nu = 1, x = 10") {
    const double brute = k_imag_brute(1.0, 10.0);
    const double value = bessel_k_imag(1.0, 10.0).value;
    CHECK(value == doctest::Approx(brute).epsilon(1e-12));
    // Hankel expansion with mu = 4 (i nu)^2 = -4: 1 - 5/80 + 65/12800
    const double leading = std::sqrt(kPi / 20) * std::exp(-10.0);
    CHECK(value / leading == doctest::Approx(1 - 5.0 / 80 + 65.0 / 12800).epsilon(1e-3));
    CHECK(value / leading == doctest::Approx(0.94204888350).epsilon(1e-10));
  }

  TEST_CASE("matches high-precision reference values in the cancellation regime") {
    struct Ref {
      double nu, x, value, derivative;
    };
    const double q = 2.2360679774997896964;
    // mpmath besselk(1j*nu, x) at 40 digits
    const Ref refs[] = {
        {5, 1, 0.00038046182799756372805, -0.0010707509809951375891},
        {10, q, 2.9379144737742991204e-8, -5.1136204328805303559e-7},
        {15, q, -1.2069045601705419415e-11, -2.3961685183529583799e-10},
        {20, 0.5, -8.1056068347248340901e-15, -3.9259601673721721315e-13},
        {3.386, q, 0.0074573250398173900198, 4.0072314812308172485e-7},
        {20, 10, -4.9508444413020093005e-15, 2.2011492123615295551e-14},
        {1, 10, 0.000016950735948481493804, -0.000017701358059356588452},
        {8, 30, 7.4224914093283892077e-15, -7.2853746797325102373e-15},
        {0.5, 0.01, 1.1098860905451278987, 61.209423026940459077},
    };
    for (const Ref& r : refs) {
      INFO("nu = " << r.nu << ", x = " << r.x);
      CHECK(bessel_k_imag(r.nu, r.x).value == doctest::Approx(r.value).epsilon(1e-8));
      CHECK(bessel_k_imag(r.nu, r.x, true).value == doctest::Approx(r.derivative).epsilon(1e-8));
    }
  }

  TEST_CASE("agrees with brute-force quadrature where the real-axis integral is benign") {
    for (double nu = 0.0; nu <= 20.0; nu += 1.3) {
      for (double x = nu + 0.5; x <= 60.0; x += 3.1) {
        INFO("nu = " << nu << ", x = " << x);
        CHECK(bessel_k_imag(nu, x).value == doctest::Approx(k_imag_brute(nu, x)).epsilon(1e-8));
      }
    }
  }

  TEST_CASE("satisfies z^2 K'' + z K' + (nu^2 - z^2) K = 0") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> order(0.0, 20.0), arg(0.2, 59.0);
    for (int i = 0; i < 300; ++i) {
      const double nu = order(rng), x = arg(rng);
      auto k = [&](double t) { return bessel_k_imag_scaled(nu, t).value; };
      const double h = local_step(nu, x);
      const double res = x * x * second_difference(k, x, h) + x * first_difference(k, x, h) + (nu * nu - x * x) * k(x);
      const double local = std::max({std::fabs(k(x)), std::fabs(k(x - 2 * h)), std::fabs(k(x + 2 * h))});
      INFO("nu = " << nu << ", x = " << x);
      CHECK(std::fabs(res) <= 1e-7 * (x * x + nu * nu) * std::max(local, 1e-300));
    }
  }

  TEST_CASE("derivative matches finite differences") {
    for (double nu : {0.0, 1.0, 3.386, 4.747, 10.0, 20.0}) {
      for (double x = 0.3; x < 60.0; x += 0.71) {
        auto k = [&](double t) { return bessel_k_imag_scaled(nu, t).value; };
        const double d = bessel_k_imag_scaled(nu, x, true).value;
        const double h = local_step(nu, x);
        // scale: |K'| or the local oscillation amplitude of K'
        const double amp = std::max(std::fabs(d), std::fabs((k(x + h) - k(x - h)) / (2 * h)));
        const double scale = std::max(amp, nu > x ? std::sqrt(nu * nu - x * x) / x * std::fabs(k(x)) : 0.0);
        INFO("nu = " << nu << ", x = " << x);
        CHECK(std::fabs(first_difference(k, x, h) - d) <= 1e-6 * std::max(scale, 1e-300));
      }
    }
  }

  TEST_CASE("monotone decay beyond the turning point") {
    for (double nu : {0.0, 2.0, 5.0, 12.0, 20.0}) {
      double prev = bessel_k_imag(nu, nu + 1e-3).value;
      for (double x = nu + 0.25; x <= 60.0; x += 0.25) {
        const double v = bessel_k_imag(nu, x).value;
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
      }
    }
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(bessel_k_imag(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_k_imag(1.0, -1.0), DomainError);
  }
}
