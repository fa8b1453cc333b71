#include <algorithm>
#include <cmath>

#include "twopiece/errors.hpp"
#include "twopiece/momentum.hpp"

namespace twopiece {

std::vector<TailWindow> default_tail_windows(const WellSpec& well) {
  return {{20 / well.a, 35 / well.a}, {25 / well.a, 42 / well.a}, {30 / well.a, 50 / well.a}};
}

TailFit tail_fit(const MomentumDistribution& dist, std::span<const TailWindow> windows) {
  if (dist.j != 0) throw DomainError("tail_fit: distribution must be computed with j = 0");
  if (windows.empty()) throw DomainError("tail_fit: no windows");
  if (dist.p.empty()) throw DomainError("tail_fit: empty distribution");

  TailFit fit;
  for (const auto& w : windows) {
    if (!(w.hi > w.lo) || w.lo < dist.p.front() || w.hi > dist.p.back() * (1 + 1e-12)) {
      throw DomainError("tail_fit: window outside the sampled range");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < dist.p.size(); ++i) {
      if (dist.p[i] < w.lo || dist.p[i] > w.hi) continue;
      if (!(dist.density[i] > 0)) throw DomainError("tail_fit: nonpositive density inside a window");
      const double x = std::log(dist.p[i]), y = std::log(dist.density[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      syy += y * y;
      ++n;
    }
    if (n < 8) throw DomainError("tail_fit: window holds fewer than 8 samples");
    const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, cyy = syy - sy * sy / n;
    const double slope = cxy / cxx;
    const double r2 = cyy > 0 ? cxy * cxy / (cxx * cyy) : 1.0;
    fit.windows.push_back({w.lo, w.hi, -slope, r2, n});
  }

  std::vector<double> s;
  for (const auto& w : fit.windows) s.push_back(w.exponent);
  std::sort(s.begin(), s.end());
  const std::size_t m = s.size();
  fit.exponent = m % 2 ? s[m / 2] : 0.5 * (s[m / 2 - 1] + s[m / 2]);
  fit.r_squared = 1.0;
  for (const auto& w : fit.windows) {
    fit.stability = std::max(fit.stability, std::fabs(w.exponent - fit.exponent));
    fit.r_squared = std::min(fit.r_squared, w.r_squared);
  }
  return fit;
}

}  // namespace twopiece
