#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "twopiece/errors.hpp"
#include "twopiece/quadrature.hpp"

using namespace twopiece;

TEST_CASE("scalar adaptive integration") {
  const auto e = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(e.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.error < 1e-12);
  // Short intervals far from the origin keep full relative accuracy.
  const auto tiny = quad::integrate([](double x) { return 21 + 1e6 * x; }, 1e-8, 1e-7);
  CHECK(tiny.value == doctest::Approx(9e-8 * 21 + 0.5e6 * (1e-14 - 1e-16)).epsilon(1e-14));
}

TEST_CASE("vector integrator shares nodes across components") {
  quad::VectorIntegrator<4> vi([](double x) { return std::array<double, 4>{1.0, x, x * x, std::exp(x)}; }, 1e-13, 0);
  const auto r = vi(0.0, 1.0);
  CHECK(r.value[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.value[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.value[2] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(r.value[3] == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-15));
  quad::VectorIntegrator<1> bad([](double x) { return std::array<double, 1>{std::sin(1 / x)}; }, 1e-14, 0, 5);
  CHECK_THROWS_AS(bad(0.0, 1.0), AccuracyError);
}

TEST_CASE("Wynn epsilon accelerates alternating series") {
  std::vector<double> partial;
  double s = 0;
  for (int k = 1; k <= 20; ++k) {
    s += (k % 2 ? 1.0 : -1.0) / k;
    partial.push_back(s);
  }
  const auto w = quad::wynn_epsilon(partial);
  CHECK(w.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::fabs(partial.back() - std::log(2.0)) > 1e-2);
  CHECK(quad::wynn_epsilon(std::vector<double>{}).value == 0.0);
}

TEST_CASE("semi-infinite Fourier integrals") {
  const auto dirichlet = quad::fourier_integral([](double x) { return 1 / x; }, 1.0, quad::Trig::sine, 0.0,
                                                std::numeric_limits<double>::infinity());
  CHECK(dirichlet.value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
  const auto damped = quad::fourier_integral([](double x) { return std::exp(-x); }, 2.0, quad::Trig::cosine, 0.0,
                                             std::numeric_limits<double>::infinity());
  CHECK(damped.value == doctest::Approx(0.2).epsilon(1e-13));
}

TEST_CASE("finite Fourier integrals") {
  const auto e = quad::fourier_integral([](double x) { return x; }, 3.0, quad::Trig::cosine, 0.0, 10.0);
  CHECK(e.value == doctest::Approx((std::cos(30.0) - 1) / 9 + 10 * std::sin(30.0) / 3).epsilon(1e-14));
  const std::vector<double> breaks{0.5, 2.5};
  const auto g = quad::fourier_integral([](double x) { return std::fabs(x - 2.5); }, 0.0, quad::Trig::cosine, 0.0, 5.0, breaks);
  CHECK(g.value == doctest::Approx(6.25).epsilon(1e-14));
  CHECK(quad::fourier_integral([](double) { return 1.0; }, 0.0, quad::Trig::sine, 0.0, 1.0).value == 0.0);
  CHECK_THROWS_AS(quad::fourier_integral([](double) { return 1.0; }, -1.0, quad::Trig::sine, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(quad::fourier_integral([](double) { return 1.0; }, 1.0, quad::Trig::sine, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(quad::fourier_integral([](double) { return 1.0; }, 1e9, quad::Trig::sine, 0.0, 10.0), AccuracyError);
}

TEST_CASE("piecewise Chebyshev interpolation") {
  const auto f = [](double x) { return std::exp(-x * x) * std::cos(3 * x); };
  const quad::PiecewiseChebyshev c(f, 0.0, 6.0, 0.5);
  double worst = 0;
  for (int i = 0; i <= 3001; ++i) {
    const double x = 6.0 * i / 3001;
    worst = std::max(worst, std::fabs(c(x) - f(x)));
  }
  CHECK(worst < 1e-14);
  CHECK(c.lower() == 0.0);
  CHECK(c.upper() == 6.0);
  CHECK(c.panels() >= 12);
  CHECK(c.edges().size() == c.panels() + 1);
  CHECK(c(7.0) == 0.0);
  CHECK(c.truncation_bound() < 1e-15);
  CHECK_THROWS_AS(quad::PiecewiseChebyshev(f, 1.0, 0.0, 0.5), DomainError);
}
