#include "twopiece/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>

#include "twopiece/errors.hpp"

namespace twopiece {
namespace {

const double kNorm = std::sqrt(2.0 / std::numbers::pi);

// Runs body(i) for i in [0, n) on up to `threads` workers, each owning a
// contiguous block, so results never depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, int threads, Body body) {
  const std::size_t workers = std::clamp<std::size_t>(threads > 0 ? threads : 1, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = n * w / workers; i < n * (w + 1) / workers; ++i) body(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

// Full Gauss-Legendre rule on [-1, 1] from Boost's half-rule tables.
template <unsigned N>
std::vector<std::pair<double, double>> gauss_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  std::vector<std::pair<double, double>> rule;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      rule.emplace_back(0.0, w[i]);
    } else {
      rule.emplace_back(x[i], w[i]);
      rule.emplace_back(-x[i], w[i]);
    }
  }
  return rule;
}

void check_cutoffs(std::span<const double> cutoffs) {
  if (cutoffs.size() < 5) throw DomainError("moment: at least 5 cutoffs are required");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 0) || !std::isfinite(cutoffs[i])) throw DomainError("moment: cutoffs must be positive and finite");
    if (i > 0 && !(cutoffs[i] > cutoffs[i - 1])) throw DomainError("moment: cutoffs must be increasing");
  }
  if (cutoffs.back() < 100 * cutoffs.front()) throw DomainError("moment: cutoffs must span at least two decades");
}

// Partial integrals 2 int_0^P p^{2j} I dp for j = 0..3 at every cutoff, by
// fixed Gauss-Legendre panels (20 points, 10-point companion for the error)
// on a grid that is uniform near the origin and geometric in the tail.
struct Ladder {
  std::vector<double> cutoffs;
  std::vector<std::array<double, 4>> partial;
  std::vector<std::array<double, 4>> error;
};

Ladder ladder(const MomentumTransform& t, std::vector<double> cutoffs, int threads) {
  const double a = t.state().state.well.a;
  const double top = cutoffs.back();
  std::vector<double> edges{0.0};
  for (int i = 1; i * 0.25 / a < std::min(4.0 / a, top); ++i) edges.push_back(i * 0.25 / a);
  for (double p = 4.0 / a; p < top; p *= 1.25) edges.push_back(p);
  edges.insert(edges.end(), cutoffs.begin(), cutoffs.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges.erase(std::upper_bound(edges.begin(), edges.end(), top), edges.end());

  static const auto g20 = gauss_rule<20>();
  static const auto g10 = gauss_rule<10>();
  const std::size_t per_panel = g20.size() + g10.size();
  const std::size_t panels = edges.size() - 1;
  std::vector<double> nodes(panels * per_panel);
  for (std::size_t k = 0; k < panels; ++k) {
    const double mid = 0.5 * (edges[k] + edges[k + 1]), half = 0.5 * (edges[k + 1] - edges[k]);
    for (std::size_t i = 0; i < g20.size(); ++i) nodes[k * per_panel + i] = mid + half * g20[i].first;
    for (std::size_t i = 0; i < g10.size(); ++i) nodes[k * per_panel + g20.size() + i] = mid + half * g10[i].first;
  }
  std::vector<double> dens(nodes.size()), noise(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t i) {
    const auto v = t.evaluate(nodes[i]);
    const double amp = t.parity() == Parity::even ? v.cos_part : v.sin_part;
    dens[i] = amp * amp;
    noise[i] = 2 * std::fabs(amp) * v.error + v.error * v.error;
  });

  Ladder out;
  out.cutoffs = std::move(cutoffs);
  std::array<double, 4> sum{}, err{};
  std::size_t next = 0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double half = 0.5 * (edges[k + 1] - edges[k]);
    std::array<double, 4> hi{}, lo{}, prop{};
    for (std::size_t i = 0; i < per_panel; ++i) {
      const bool fine = i < g20.size();
      const double w = (fine ? g20[i].second : g10[i - g20.size()].second) * half;
      const double p2 = nodes[k * per_panel + i] * nodes[k * per_panel + i];
      double pw = 1.0;
      for (int j = 0; j < 4; ++j) {
        (fine ? hi : lo)[j] += 2 * w * pw * dens[k * per_panel + i];
        if (fine) prop[j] += 2 * w * pw * noise[k * per_panel + i];
        pw *= p2;
      }
    }
    for (int j = 0; j < 4; ++j) {
      sum[j] += hi[j];
      err[j] += std::fabs(hi[j] - lo[j]) + prop[j] + 4 * std::numeric_limits<double>::epsilon() * std::fabs(hi[j]);
    }
    while (next < out.cutoffs.size() && out.cutoffs[next] <= edges[k + 1]) {
      out.partial.push_back(sum);
      out.error.push_back(err);
      ++next;
    }
  }
  return out;
}

MomentReport report(const Ladder& l, int j) {
  MomentReport r;
  r.j = j;
  const std::size_t m = l.cutoffs.size();
  for (std::size_t i = 0; i < m; ++i) r.cutoff_values.push_back({l.cutoffs[i], l.partial[i][j]});
  const double s_last = l.partial[m - 1][j];
  const double d_b = s_last - l.partial[m - 2][j];
  const double d_a = l.partial[m - 2][j] - l.partial[m - 3][j];
  const double floor = std::max(1e-11 * std::fabs(s_last), 10 * l.error[m - 1][j]);
  const double decades = 0.5 * std::log10(l.cutoffs[m - 1] / l.cutoffs[m - 3]);

  if (d_b <= floor) {
    r.at_noise_floor = true;
    r.decade_ratio = d_a > floor ? std::pow(std::max(d_b, 0.0) / d_a, 1 / decades) : 0.0;
    r.verdict = Verdict::converged;
    r.value = s_last;
    return r;
  }
  const double rho = d_a > 0 ? d_b / d_a : std::numeric_limits<double>::infinity();
  r.decade_ratio = std::pow(rho, 1 / decades);
  if (rho >= 1) {
    r.verdict = Verdict::diverging;
  } else if (r.decade_ratio < 0.5) {
    r.verdict = Verdict::converged;
    r.value = s_last + d_b * rho / (1 - rho);
  } else {
    r.verdict = Verdict::marginal;
  }
  return r;
}

}  // namespace

MomentumTransform::MomentumTransform(const NormalizedState& ns) : ns_(ns) {
  const EigenState& s = ns_.state;
  psi_ = quad::PiecewiseChebyshev([&s](double x) { return eigenfunction(s, x); }, 0.0, ns_.support, 0.25 * s.well.a);
  // Trailing Chebyshev coefficients bound the pointwise interpolation error.
  interpolation_error_ = 4 * psi_.truncation_bound() * ns_.support;
}

TransformValue MomentumTransform::evaluate(double p) const {
  if (!std::isfinite(p)) throw DomainError("transform: p must be finite");
  const bool odd = ns_.state.parity == Parity::odd;
  const double q = std::fabs(p);
  const auto f = [this](double x) { return psi_(x); };
  const auto est = quad::fourier_integral(f, q, odd ? quad::Trig::sine : quad::Trig::cosine, 0.0, ns_.support,
                                          psi_.edges());
  TransformValue out;
  const double value = kNorm * est.value;
  out.error = kNorm * (est.error + interpolation_error_);
  if (odd) {
    out.sin_part = p < 0 ? -value : value;
  } else {
    out.cos_part = value;
  }
  if (out.error > 1e-9) throw AccuracyError("transform: error estimate above 1e-9", out.error);
  return out;
}

double MomentumTransform::amplitude(double p) const {
  const auto v = evaluate(p);
  return ns_.state.parity == Parity::even ? v.cos_part : v.sin_part;
}

double MomentumTransform::density(double p) const {
  const double v = amplitude(p);
  return v * v;
}

double transform(const NormalizedState& ns, double p) { return MomentumTransform(ns).amplitude(p); }

MomentumDistribution distribution(const MomentumTransform& t, double p_max, int n_points, int j, int threads) {
  if (!(p_max > 0) || !std::isfinite(p_max)) throw DomainError("distribution: p_max must be positive");
  if (n_points < 2) throw DomainError("distribution: at least 2 points are required");
  if (j < 0 || j > 3) throw DomainError("distribution: j must be 0, 1, 2 or 3");
  const double p_min = std::min(0.05 / t.state().state.well.a, p_max / 1000);

  MomentumDistribution d;
  d.j = j;
  d.parity = t.parity();
  d.p.resize(n_points);
  d.density.resize(n_points);
  d.weighted.resize(n_points);
  d.quad_error.resize(n_points);
  const double step = std::log(p_max / p_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) d.p[i] = i + 1 == n_points ? p_max : p_min * std::exp(step * i);
  parallel_for(d.p.size(), threads, [&](std::size_t i) {
    const auto v = t.evaluate(d.p[i]);
    const double amp = d.parity == Parity::even ? v.cos_part : v.sin_part;
    const double scale = std::pow(d.p[i], 2 * j);
    d.density[i] = amp * amp;
    d.weighted[i] = scale * d.density[i];
    d.quad_error[i] = scale * (2 * std::fabs(amp) * v.error + v.error * v.error);
  });
  return d;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::converged:
      return "Converged";
    case Verdict::diverging:
      return "Diverging";
    case Verdict::marginal:
      return "Marginal";
  }
  return "Marginal";
}

std::vector<double> default_cutoffs(const WellSpec& well) {
  std::vector<double> out;
  for (double p = 4; p <= 512; p *= 2) out.push_back(p / well.a);
  return out;
}

std::array<MomentReport, 3> moments(const MomentumTransform& t, std::span<const double> cutoffs, int threads) {
  check_cutoffs(cutoffs);
  const Ladder l = ladder(t, std::vector<double>(cutoffs.begin(), cutoffs.end()), threads);
  std::array<MomentReport, 3> out;
  for (int j = 1; j <= 3; ++j) {
    out[j - 1] = report(l, j);
    out[j - 1].position_value = position_moment(t.state(), j).value;
  }
  return out;
}

MomentReport moment(const MomentumTransform& t, int j, std::span<const double> cutoffs, int threads) {
  if (j < 1 || j > 3) throw DomainError("moment: j must be 1, 2 or 3");
  check_cutoffs(cutoffs);
  const Ladder l = ladder(t, std::vector<double>(cutoffs.begin(), cutoffs.end()), threads);
  MomentReport r = report(l, j);
  r.position_value = position_moment(t.state(), j).value;
  return r;
}

quad::Estimate parseval_norm(const MomentumTransform& t, int threads) {
  const double top = 512 / t.state().state.well.a;
  const Ladder l = ladder(t, {top}, threads);
  // I ~ p^-8 or faster beyond the last cutoff.
  const double tail = 2 * t.density(top) * top / 7;
  return {l.partial.back()[0] + tail, l.error.back()[0] + tail};
}

}  // namespace twopiece
