#pragma once

// Quadrature building blocks shared by the spectral and momentum modules.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "twopiece/errors.hpp"

namespace twopiece::quad {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 21-point Gauss-Kronrod for a vector-valued integrand
/// f: double -> std::array<double, M>. Every component shares the nodes; a
/// panel is split until each component meets its tolerance.
template <std::size_t M>
class VectorIntegrator {
 public:
  using Vec = std::array<double, M>;
  using Fn = std::function<Vec(double)>;

  VectorIntegrator(Fn f, double rel_tol, double abs_tol, int max_depth = 24)
      : f_(std::move(f)), rel_tol_(rel_tol), abs_tol_(abs_tol), max_depth_(max_depth) {}

  struct Result {
    Vec value{};
    Vec error{};
  };

  Result operator()(double a, double b) const {
    Result out{};
    recurse(a, b, max_depth_, out);
    return out;
  }

 private:
  void panel(double a, double b, Vec& kronrod, Vec& gauss_part, Vec& l1) const {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& x = GK::abscissa();
    const auto& w = GK::weights();
    const auto& gw = G::weights();
    const double mid = (a + b) / 2, half = (b - a) / 2;
    kronrod.fill(0);
    gauss_part.fill(0);
    l1.fill(0);
    const Vec c = f_(mid);
    for (std::size_t m = 0; m < M; ++m) {
      kronrod[m] = c[m] * w[0];
      l1[m] = std::fabs(c[m]) * w[0];
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
      const Vec fp = f_(mid + half * x[i]);
      const Vec fm = f_(mid - half * x[i]);
      for (std::size_t m = 0; m < M; ++m) {
        kronrod[m] += (fp[m] + fm[m]) * w[i];
        l1[m] += (std::fabs(fp[m]) + std::fabs(fm[m])) * w[i];
        if (i % 2 == 1) gauss_part[m] += (fp[m] + fm[m]) * gw[i / 2];
      }
    }
    for (std::size_t m = 0; m < M; ++m) {
      kronrod[m] *= half;
      gauss_part[m] *= half;
      l1[m] *= half;
    }
  }

  void recurse(double a, double b, int depth, Result& out) const {
    Vec k{}, g{}, l1{};
    panel(a, b, k, g, l1);
    bool ok = true;
    for (std::size_t m = 0; m < M; ++m) {
      const double err = std::fabs(k[m] - g[m]);
      if (err > std::max(rel_tol_ * l1[m], abs_tol_)) ok = false;
    }
    if (ok || depth == 0) {
      if (!ok) throw AccuracyError("vector quadrature: maximum subdivision depth reached", std::fabs(k[0] - g[0]));
      for (std::size_t m = 0; m < M; ++m) {
        out.value[m] += k[m];
        out.error[m] += std::max(std::fabs(k[m] - g[m]), 2 * std::numeric_limits<double>::epsilon() * l1[m]);
      }
      return;
    }
    const double mid = (a + b) / 2;
    recurse(a, mid, depth - 1, out);
    recurse(mid, b, depth - 1, out);
  }

  Fn f_;
  double rel_tol_;
  double abs_tol_;
  int max_depth_;
};

/// Adaptive 21-point Gauss-Kronrod on a finite interval; every panel must
/// meet max(rel_tol * panel L1, abs_tol). Throws AccuracyError when the
/// subdivision depth runs out.
template <class F>
Estimate integrate(F&& f, double a, double b, double rel_tol = 1e-13, double abs_tol = 0.0) {
  VectorIntegrator<1> vi([&f](double x) { return std::array<double, 1>{f(x)}; }, rel_tol, abs_tol, 30);
  const auto r = vi(a, b);
  if (!std::isfinite(r.value[0])) throw AccuracyError("adaptive quadrature produced a non-finite value", r.error[0]);
  return {r.value[0], r.error[0]};
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums; returns
/// the last fully formed even-column entry and an error estimate from the
/// difference of the last two such entries.
Estimate wynn_epsilon(std::span<const double> partial_sums);

/// Piecewise Chebyshev interpolant of a smooth function on [a, b]. Panels are
/// bisected until the trailing coefficients fall below `rel_tol` times the
/// global magnitude of the function.
class PiecewiseChebyshev {
 public:
  PiecewiseChebyshev() = default;
  PiecewiseChebyshev(const std::function<double(double)>& f, double a, double b, double initial_width,
                     int degree = 24, double rel_tol = 1e-16);

  double operator()(double x) const;
  double lower() const { return edges_.front(); }
  double upper() const { return edges_.back(); }
  std::span<const double> edges() const { return edges_; }
  /// Largest trailing-coefficient magnitude over all panels.
  double truncation_bound() const { return truncation_; }
  std::size_t panels() const { return coeffs_.size(); }

 private:
  void fit(const std::function<double(double)>& f, double lo, double hi, double scale, int depth);

  int degree_ = 24;
  double rel_tol_ = 1e-16;
  std::vector<double> edges_;
  std::vector<std::vector<double>> coeffs_;
  double truncation_ = 0.0;
};

enum class Trig { cosine, sine };

/// int_a^b f(x) trig(omega x) dx by decomposition at the zeros of trig(omega x)
/// (plus any caller-supplied smoothness breakpoints), 20-point Gauss-Legendre
/// on every panel. With b = +inf, panel sums are accumulated until they fall
/// below `abs_tol` and the alternating partial sums are then extrapolated
/// with Wynn's epsilon algorithm.
Estimate fourier_integral(const std::function<double(double)>& f, double omega, Trig kind, double a, double b,
                          std::span<const double> extra_breaks = {}, double abs_tol = 1e-17,
                          std::size_t max_panels = 200000);

}  // namespace twopiece::quad
