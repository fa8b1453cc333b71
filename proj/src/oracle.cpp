#include "twopiece/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "twopiece/errors.hpp"

namespace twopiece::oracle {
namespace {

struct Shot {
  std::vector<double> psi;  // psi[i] at x = i h, arbitrary scale
  double mismatch = 0.0;
};

// Inward Numerov march for psi'' = (V - E) psi. The ghost value psi(-h) comes
// from the analytic continuation of the right branch, so the one-sided
// solution keeps fourth-order accuracy at the origin despite the kink of V.
Shot shoot(const WellSpec& well, Parity parity, double energy, double h, double length, bool keep) {
  const auto n = static_cast<std::size_t>(std::llround(length / h));
  const double c = h * h / 12.0;
  auto f = [&](double x) { return branch_potential(well, x) - energy; };

  Shot shot;
  std::vector<double> psi(n + 1, 0.0);
  psi[n] = 0.0;
  psi[n - 1] = 1e-30;
  double f_next = f(n * h), f_cur = f((n - 1) * h);
  double peak = 1e-30;
  for (std::size_t i = n - 1; i >= 1; --i) {
    const double f_prev = f((i - 1) * h);
    psi[i - 1] = ((2 + 10 * c * f_cur) * psi[i] - (1 - c * f_next) * psi[i + 1]) / (1 - c * f_prev);
    peak = std::max(peak, std::fabs(psi[i - 1]));
    if (peak > 1e200) {
      for (std::size_t k = i - 1; k <= n; ++k) psi[k] *= 1e-200;
      peak *= 1e-200;
    }
    f_next = f_cur;
    f_cur = f_prev;
  }

  if (parity == Parity::odd) {
    shot.mismatch = psi[0] / peak;
  } else {
    const double f0 = f(0.0), f1 = f(h), fm = f(-h);
    const double ghost = ((2 + 10 * c * f0) * psi[0] - (1 - c * f1) * psi[1]) / (1 - c * fm);
    const double slope = (psi[1] - ghost) / (2 * h) - h * h * branch_potential(well, 0.0, 1) * psi[0] / 6;
    shot.mismatch = slope * well.a / peak;
  }
  if (keep) shot.psi = std::move(psi);
  return shot;
}

double solve_energy(const WellSpec& well, Parity parity, Interval bracket, double h, double length) {
  if (!(bracket.hi > bracket.lo)) throw DomainError("numerov: empty energy bracket");
  if (!(h > 0) || !(length > 2 * h)) throw DomainError("numerov: invalid grid");
  auto mismatch = [&](double e) { return shoot(well, parity, e, h, length, false).mismatch; };
  const double m_lo = mismatch(bracket.lo), m_hi = mismatch(bracket.hi);
  if ((m_lo < 0) == (m_hi < 0)) throw RootError("numerov: boundary mismatch has no sign change in the bracket");
  std::uintmax_t iterations = 200;
  const auto root = boost::math::tools::toms748_solve(mismatch, bracket.lo, bracket.hi, m_lo, m_hi,
                                                      boost::math::tools::eps_tolerance<double>(52), iterations);
  return 0.5 * (root.first + root.second);
}

}  // namespace

double default_length(const WellSpec& well, double energy) {
  const EigenState probe{well, 0, Parity::even, energy, 1.0};
  const double tp = turning_point(probe);
  switch (well.kind) {
    case WellKind::triangular:
      return tp + 12 * well.a;
    case WellKind::conv_exp:
      return tp + std::max(12 * well.a, 25.0 / std::sqrt(-energy));
    case WellKind::div_exp:
      return tp + 4 * well.a;
  }
  return tp + 12 * well.a;
}

double numerov_energy(const WellSpec& well, Parity parity, Interval bracket, double step, double length) {
  return solve_energy(well, parity, bracket, step, length);
}

GridSolution numerov_solve(const WellSpec& well, Parity parity, Interval bracket, double step, double length) {
  if (!(step > 0) || step > 1e-3 * well.a * (1 + 1e-12)) throw DomainError("numerov: step must satisfy 0 < h <= 1e-3 a");

  GridSolution out;
  out.step = step;
  out.length = length;
  out.parity = parity;
  out.energy = solve_energy(well, parity, bracket, step, length);
  out.energy_half_step = solve_energy(well, parity, bracket, step / 2, length);
  if (std::fabs(out.energy - out.energy_half_step) >= 1e-4) {
    throw AccuracyError("numerov: energy not converged under step halving", std::fabs(out.energy - out.energy_half_step));
  }

  Shot shot = shoot(well, parity, out.energy, step, length, true);
  out.boundary_mismatch = shot.mismatch;
  if (std::fabs(shot.mismatch) > 1e-10) {
    throw AccuracyError("numerov: boundary condition not met", std::fabs(shot.mismatch));
  }
  const std::size_t n = shot.psi.size();
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    norm += w * shot.psi[i] * shot.psi[i];
  }
  norm = std::sqrt(2 * norm * step);
  out.x.resize(n);
  out.psi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.x[i] = i * step;
    out.psi[i] = shot.psi[i] / norm;
  }
  return out;
}

}  // namespace twopiece::oracle
