#include "twopiece/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace twopiece::quad {

Estimate wynn_epsilon(std::span<const double> s) {
  if (s.empty()) return {};
  if (s.size() < 3) return {s.back(), s.size() == 2 ? std::fabs(s[1] - s[0]) : 0.0};

  // prev = column j-1, cur = column j; column -1 is all zeros
  std::vector<double> prev(s.size() + 1, 0.0);
  std::vector<double> cur(s.begin(), s.end());
  double best = s.back();
  double previous_best = s[s.size() - 2];
  for (int col = 1; cur.size() > 1; ++col) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
      const double diff = cur[k + 1] - cur[k];
      if (diff == 0.0) {
        // the sequence has converged exactly at this column
        return {cur[k + 1], std::fabs(best - cur[k + 1])};
      }
      next[k] = prev[k + 1] + 1.0 / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (col % 2 == 0 && !cur.empty()) {
      previous_best = best;
      best = cur.back();
    }
  }
  return {best, std::fabs(best - previous_best)};
}

PiecewiseChebyshev::PiecewiseChebyshev(const std::function<double(double)>& f, double a, double b,
                                       double initial_width, int degree, double rel_tol)
    : degree_(degree), rel_tol_(rel_tol) {
  if (!(b > a) || !(initial_width > 0)) throw DomainError("PiecewiseChebyshev: empty interval");
  double scale = 0.0;
  constexpr int kProbe = 400;
  for (int i = 0; i <= kProbe; ++i) scale = std::max(scale, std::fabs(f(a + (b - a) * i / kProbe)));
  if (scale == 0.0) scale = 1.0;

  const int count = std::max(1, static_cast<int>(std::ceil((b - a) / initial_width)));
  edges_.push_back(a);
  for (int i = 0; i < count; ++i) {
    const double lo = a + (b - a) * i / count;
    const double hi = i + 1 == count ? b : a + (b - a) * (i + 1) / count;
    fit(f, lo, hi, scale, 20);
  }
}

void PiecewiseChebyshev::fit(const std::function<double(double)>& f, double lo, double hi, double scale,
                             int depth) {
  const int n = degree_ + 1;
  std::vector<double> samples(n);
  double local = 0.0;
  for (int j = 0; j < n; ++j) {
    const double t = std::cos(std::numbers::pi * (j + 0.5) / n);
    samples[j] = f(0.5 * (lo + hi) + 0.5 * (hi - lo) * t);
    local = std::max(local, std::fabs(samples[j]));
  }
  std::vector<double> c(n);
  for (int k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += samples[j] * std::cos(std::numbers::pi * k * (j + 0.5) / n);
    c[k] = 2.0 * sum / n;
  }
  c[0] /= 2;
  const double tail = std::max({std::fabs(c[n - 1]), std::fabs(c[n - 2]), std::fabs(c[n - 3])});
  const double tol = std::max(rel_tol_ * scale, 16 * std::numeric_limits<double>::epsilon() * local);
  if (tail > tol && depth > 0) {
    const double mid = 0.5 * (lo + hi);
    fit(f, lo, mid, scale, depth - 1);
    fit(f, mid, hi, scale, depth - 1);
    return;
  }
  truncation_ = std::max(truncation_, tail);
  coeffs_.push_back(std::move(c));
  edges_.push_back(hi);
}

double PiecewiseChebyshev::operator()(double x) const {
  if (coeffs_.empty() || x < edges_.front() || x > edges_.back()) return 0.0;
  auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - edges_.begin());
  i = std::min(std::max<std::size_t>(i, 1), coeffs_.size()) - 1;
  const double lo = edges_[i], hi = edges_[i + 1];
  const double t = (2 * x - lo - hi) / (hi - lo);
  const auto& c = coeffs_[i];
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    const double b0 = 2 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

struct PanelSum {
  double value;
  double l1;
};

PanelSum panel(const std::function<double(double)>& f, double omega, Trig kind, double lo, double hi) {
  double l1 = 0.0;
  const double v = GL::integrate(
      [&](double x) {
        const double w = kind == Trig::cosine ? std::cos(omega * x) : std::sin(omega * x);
        const double r = f(x) * w;
        l1 += std::fabs(r);
        return r;
      },
      lo, hi);
  // l1 is an unweighted node sum; rescale to the panel's measure
  return {v, l1 * (hi - lo) / 20.0};
}

}  // namespace

Estimate fourier_integral(const std::function<double(double)>& f, double omega, Trig kind, double a, double b,
                          std::span<const double> extra_breaks, double abs_tol, std::size_t max_panels) {
  if (!(omega >= 0)) throw DomainError("fourier_integral: frequency must be nonnegative");
  if (!(b > a)) throw DomainError("fourier_integral: empty interval");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (omega == 0.0 && kind == Trig::sine) return {0.0, 0.0};

  const double half = omega > 0 ? std::numbers::pi / omega : std::numeric_limits<double>::infinity();
  const double offset = kind == Trig::cosine ? 0.5 * half : 0.0;
  auto zero = [&](long long k) { return offset + static_cast<double>(k) * half; };
  long long k = omega > 0 ? static_cast<long long>(std::floor((a - offset) / half)) + 1 : 0;

  if (std::isfinite(b)) {
    std::vector<double> breaks{a, b};
    if (omega > 0) {
      for (long long z = k; zero(z) < b; ++z) {
        if (zero(z) > a) breaks.push_back(zero(z));
        if (breaks.size() > max_panels) throw AccuracyError("fourier_integral: too many panels", 0.0);
      }
    }
    for (double e : extra_breaks) {
      if (e > a && e < b) breaks.push_back(e);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    double sum = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const PanelSum p = panel(f, omega, kind, breaks[i], breaks[i + 1]);
      sum += p.value;
      l1 += p.l1;
    }
    return {sum, 4 * eps * l1};
  }

  if (omega == 0.0) throw DomainError("fourier_integral: infinite range requires omega > 0");

  // Semi-infinite: walk the half-periods, extrapolate the alternating tail.
  std::vector<double> partial;
  double sum = 0.0, l1 = 0.0, lo = a;
  int small_run = 0;
  double last_extrapolated = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n = 0; n < max_panels; ++n, ++k) {
    const double hi = zero(k);
    const PanelSum p = panel(f, omega, kind, lo, hi);
    sum += p.value;
    l1 += p.l1;
    partial.push_back(sum);
    lo = hi;
    small_run = std::fabs(p.value) < abs_tol ? small_run + 1 : 0;
    if (small_run >= 3) return {sum, 4 * eps * l1 + abs_tol};
    if (partial.size() >= 24 && partial.size() % 8 == 0) {
      const std::size_t window = std::min<std::size_t>(partial.size(), 40);
      const Estimate w = wynn_epsilon(std::span<const double>(partial).last(window));
      if (std::fabs(w.value - last_extrapolated) <= std::max(abs_tol, 1e-14 * std::fabs(w.value))) {
        return {w.value, std::fabs(w.value - last_extrapolated) + w.error + 4 * eps * l1};
      }
      last_extrapolated = w.value;
    }
  }
  throw AccuracyError("fourier_integral: alternating tail did not converge", std::fabs(partial.back() - last_extrapolated));
}

}  // namespace twopiece::quad
