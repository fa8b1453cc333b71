#include "twopiece/wells.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twopiece/errors.hpp"
#include "twopiece/specfun.hpp"

namespace twopiece {
namespace {

// K_{i nu} is characterized for nu <= 20; the scan stops there.
constexpr double kMaxImaginaryOrder = 20.0;

struct BranchValue {
  double f = 0.0;
  double df = 0.0;
};

double cube_root_slope(const WellSpec& w) { return std::cbrt(w.v0 / w.a); }

void check_energy(const WellSpec& well, double energy) {
  switch (well.kind) {
    case WellKind::triangular:
    case WellKind::div_exp:
      if (!(energy > 0.0) || !std::isfinite(energy)) {
        throw DomainError("energy must be positive for a well with minimum V = 0");
      }
      break;
    case WellKind::conv_exp:
      if (!(energy > -well.v0 && energy < 0.0)) {
        throw DomainError("energy must lie in (-v0, 0) for the convergent exponential well");
      }
      break;
  }
}

// Radial branch f(r) and df/dr for r >= 0 with the given energy.
BranchValue branch(const WellSpec& well, double energy, double r, bool with_derivative) {
  BranchValue out;
  switch (well.kind) {
    case WellKind::triangular: {
      const double g = cube_root_slope(well);
      const double y = g * r - energy / (g * g);
      out.f = specfun::airy_ai(y).value;
      if (with_derivative) out.df = g * specfun::airy_ai(y, true).value;
      break;
    }
    case WellKind::conv_exp: {
      const double nu = well.a * std::sqrt(-energy);
      const double w = std::sqrt(well.v0) * well.a * std::exp(-r / well.a);
      if (w < 1e-300) break;
      out.f = specfun::bessel_j(nu, w).value;
      if (with_derivative) out.df = -(w / well.a) * specfun::bessel_j(nu, w, true).value;
      break;
    }
    case WellKind::div_exp: {
      const double nu = well.a * std::sqrt(energy + well.v0);
      const double z = std::sqrt(well.v0) * well.a * std::exp(r / well.a);
      if (z > 700.0) break;
      out.f = specfun::bessel_k_imag_scaled(nu, z).value;
      if (with_derivative) out.df = (z / well.a) * specfun::bessel_k_imag_scaled(nu, z, true).value;
      break;
    }
  }
  return out;
}

double refine_root(const WellSpec& well, Parity parity, double lo, double hi, double r_lo, double tol) {
  auto residual = [&](double e) { return quantization_residual(well, parity, e); };
  while (hi - lo > tol * std::max(1.0, std::fabs(lo))) {
    const double mid = 0.5 * (lo + hi);
    const double r_mid = residual(mid);
    if (r_mid == 0.0) return mid;
    if ((r_mid < 0) == (r_lo < 0)) {
      lo = mid;
      r_lo = r_mid;
    } else {
      hi = mid;
    }
  }
  // One Newton step with a central-difference slope.
  const double e = 0.5 * (lo + hi);
  const double r = residual(e);
  const double delta = 1e-7 * std::max(1.0, std::fabs(e));
  const double slope = (residual(e + delta) - residual(e - delta)) / (2 * delta);
  if (slope != 0.0 && std::isfinite(slope)) {
    const double polished = e - r / slope;
    if (polished > lo - tol && polished < hi + tol && std::fabs(residual(polished)) <= std::fabs(r)) {
      return polished;
    }
  }
  return e;
}

struct Root {
  double energy;
  Parity parity;
};

std::vector<Root> scan(const WellSpec& well, const EnergyWindow& window, int cells, double tol) {
  std::vector<Root> roots;
  const double span = window.hi - window.lo;
  const double nudge = 1e-10 * span;
  for (Parity parity : {Parity::even, Parity::odd}) {
    std::vector<double> energies(cells + 1), values(cells + 1);
    for (int i = 0; i <= cells; ++i) {
      double e = window.lo + span * i / cells;
      if (i == 0) e += nudge;
      if (i == cells) e -= nudge;
      energies[i] = e;
      values[i] = quantization_residual(well, parity, e);
    }
    for (int i = 0; i <= cells; ++i) {
      if (values[i] == 0.0) {
        roots.push_back({energies[i], parity});
        continue;
      }
      if (i < cells && values[i + 1] != 0.0 && (values[i] < 0) != (values[i + 1] < 0)) {
        roots.push_back({refine_root(well, parity, energies[i], energies[i + 1], values[i], tol), parity});
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return x.energy < y.energy; });
  return roots;
}

bool interlaced(const std::vector<Root>& roots) {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const Parity expected = i % 2 == 0 ? Parity::even : Parity::odd;
    if (roots[i].parity != expected) return false;
    if (i > 0 && !(roots[i].energy > roots[i - 1].energy)) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(WellKind kind) {
  switch (kind) {
    case WellKind::triangular:
      return "triangular";
    case WellKind::conv_exp:
      return "convexp";
    case WellKind::div_exp:
      return "divexp";
  }
  return "unknown";
}

std::string_view to_string(Parity parity) { return parity == Parity::even ? "even" : "odd"; }

WellKind parse_well_kind(std::string_view name) {
  if (name == "triangular") return WellKind::triangular;
  if (name == "convexp") return WellKind::conv_exp;
  if (name == "divexp") return WellKind::div_exp;
  throw DomainError("unknown well kind '" + std::string(name) + "'");
}

WellSpec WellSpec::make(WellKind kind, double v0, double a) {
  if (!(v0 > 0.0) || !std::isfinite(v0)) throw DomainError("well depth v0 must be positive");
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("well width a must be positive");
  return WellSpec{kind, v0, a};
}

double branch_potential(const WellSpec& well, double r, int order) {
  const double v0 = well.v0, a = well.a;
  switch (well.kind) {
    case WellKind::triangular:
      if (order == 0) return v0 * r / a;
      return order == 1 ? v0 / a : 0.0;
    case WellKind::conv_exp:
      return -v0 * std::pow(-2.0 / a, order) * std::exp(-2.0 * r / a);
    case WellKind::div_exp: {
      const double e = std::exp(2.0 * r / a);
      if (order == 0) return v0 * (e - 1.0);
      return v0 * std::pow(2.0 / a, order) * e;
    }
  }
  return 0.0;
}

double potential(const WellSpec& well, double x) { return branch_potential(well, std::fabs(x)); }

double potential_slope(const WellSpec& well, double x) {
  if (x == 0.0) return 0.0;
  const double slope = branch_potential(well, std::fabs(x), 1);
  return x > 0 ? slope : -slope;
}

EnergyWindow admissible_window(const WellSpec& well, double e_max_scan) {
  if (e_max_scan <= 0.0) e_max_scan = 40.0 * well.v0;
  switch (well.kind) {
    case WellKind::triangular:
      return {0.0, e_max_scan};
    case WellKind::conv_exp:
      return {-well.v0, 0.0};
    case WellKind::div_exp: {
      const double ceiling = std::pow(kMaxImaginaryOrder / well.a, 2) - well.v0;
      if (ceiling <= 0.0) throw DomainError("divergent exponential well too deep for the K_{i nu} order range");
      return {0.0, std::min(e_max_scan, ceiling)};
    }
  }
  return {0.0, e_max_scan};
}

double quantization_residual(const WellSpec& well, Parity parity, double energy) {
  check_energy(well, energy);
  const bool deriv = parity == Parity::even;
  switch (well.kind) {
    case WellKind::triangular: {
      const double g = cube_root_slope(well);
      return specfun::airy_ai(-energy / (g * g), deriv).value;
    }
    case WellKind::conv_exp: {
      const double nu = well.a * std::sqrt(-energy);
      return specfun::bessel_j(nu, std::sqrt(well.v0) * well.a, deriv).value;
    }
    case WellKind::div_exp: {
      const double nu = well.a * std::sqrt(energy + well.v0);
      return specfun::bessel_k_imag_scaled(nu, std::sqrt(well.v0) * well.a, deriv).value;
    }
  }
  return 0.0;
}

std::vector<EigenState> solve_spectrum(const WellSpec& well, int max_states, const SolveOptions& options) {
  if (max_states < 1) throw DomainError("max_states must be at least 1");
  if (options.cells < 2) throw DomainError("scan needs at least two cells");
  const EnergyWindow window = admissible_window(well, options.e_max_scan);

  for (int attempt = 0; attempt <= options.max_refinements; ++attempt) {
    const std::vector<Root> roots = scan(well, window, options.cells << attempt, options.bisection_tol);
    if (!interlaced(roots)) continue;
    std::vector<EigenState> states;
    for (std::size_t i = 0; i < roots.size() && static_cast<int>(i) < max_states; ++i) {
      states.push_back(EigenState{well, static_cast<int>(i), roots[i].parity, roots[i].energy, 1.0});
    }
    return states;
  }
  throw RootError("quantization scan could not separate neighbouring roots; even and odd levels fail to interlace");
}

double eigenfunction(const EigenState& state, double x) {
  if (state.parity == Parity::odd && x == 0.0) return 0.0;
  const double sign = (state.parity == Parity::odd && x < 0) ? -1.0 : 1.0;
  return state.norm_const * sign * branch(state.well, state.energy, std::fabs(x), false).f;
}

double eigenfunction_derivative(const EigenState& state, double x) {
  if (state.parity == Parity::even && x == 0.0) return 0.0;
  const double sign = (state.parity == Parity::even && x < 0) ? -1.0 : 1.0;
  return state.norm_const * sign * branch(state.well, state.energy, std::fabs(x), true).df;
}

double turning_point(const EigenState& state) {
  const WellSpec& w = state.well;
  switch (w.kind) {
    case WellKind::triangular:
      return std::max(0.0, state.energy * w.a / w.v0);
    case WellKind::conv_exp:
      return std::max(0.0, 0.5 * w.a * std::log(w.v0 / -state.energy));
    case WellKind::div_exp:
      return std::max(0.0, 0.5 * w.a * std::log1p(state.energy / w.v0));
  }
  return 0.0;
}

double decay_radius(const EigenState& state, double rel) {
  const double tp = turning_point(state);
  const double a = state.well.a;
  auto f = [&](double r) { return std::fabs(branch(state.well, state.energy, r, false).f); };
  double peak = 0.0;
  for (int i = 0; i <= 64; ++i) peak = std::max(peak, f((tp + a) * i / 64.0));
  double r = tp + a;
  int below = 0;
  for (int step = 0; step < 200000; ++step) {
    if (f(r) < rel * peak) {
      if (++below == 2) return r;
    } else {
      below = 0;
    }
    r += a / 8;
  }
  throw AccuracyError("decay_radius: eigenfunction does not decay", r);
}

}  // namespace twopiece
