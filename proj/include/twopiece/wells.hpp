#pragma once

// Continuous two-piece symmetric potential wells, their closed-form
// eigenfunction branches and parity-resolved quantization conditions.
//
// Units: 2m = 1, hbar = 1, so the Schrodinger equation reads
//   psi''(x) = (V(x) - E) psi(x).

#include <string>
#include <string_view>
#include <vector>

namespace twopiece {

enum class WellKind { triangular, conv_exp, div_exp };
enum class Parity { even, odd };

std::string_view to_string(WellKind kind);
std::string_view to_string(Parity parity);
/// Parses "triangular", "convexp" or "divexp"; throws DomainError otherwise.
WellKind parse_well_kind(std::string_view name);

/// V(x) = v0 |x| / a                (triangular)
/// V(x) = -v0 exp(-2|x|/a)          (convergent exponential)
/// V(x) = v0 (exp(2|x|/a) - 1)      (divergent exponential)
struct WellSpec {
  WellKind kind = WellKind::triangular;
  double v0 = 1.0;
  double a = 1.0;

  /// Validating constructor; v0 > 0 and a > 0 (DomainError otherwise).
  static WellSpec make(WellKind kind, double v0, double a);
};

struct EigenState {
  WellSpec well;
  int index = 0;
  Parity parity = Parity::even;
  double energy = 0.0;
  double norm_const = 1.0;
};

double potential(const WellSpec& well, double x);

/// dV/dx for x != 0; at x = 0 returns 0 (the one-sided slopes are +-v'(0+)).
double potential_slope(const WellSpec& well, double x);

/// k-th derivative of the right branch v(r), r >= 0, continued analytically
/// to r < 0. V(x) = v(|x|).
double branch_potential(const WellSpec& well, double r, int order = 0);

/// Open interval of admissible energies (lo, hi). For the confining wells the
/// upper end is the scan ceiling `e_max_scan` (clipped to the special
/// function domain); for the convergent exponential it is 0.
struct EnergyWindow {
  double lo;
  double hi;
};
EnergyWindow admissible_window(const WellSpec& well, double e_max_scan);

/// Left-hand side of the quantization condition for the given parity:
/// (even condition / odd condition):
///   triangular  Ai'(y0) / Ai(y0),                 y0 = -E/g^2, g = (v0/a)^(1/3)
///   conv_exp    J'_{ka}(qa) / J_{ka}(qa),         k = sqrt(-E), q = sqrt(v0)
///   div_exp     e^{pi ka/2} K'_{i ka}(qa) / e^{pi ka/2} K_{i ka}(qa),  k = sqrt(E + v0)
/// For the exponential wells the energy enters through the Bessel order.
/// The divergent case is reported in the exponentially scaled form so the
/// residual is O(1). Throws DomainError for E outside the physical range.
double quantization_residual(const WellSpec& well, Parity parity, double energy);

struct SolveOptions {
  int cells = 400;
  /// 0 selects the default ceiling of 40 v0.
  double e_max_scan = 0.0;
  double bisection_tol = 1e-12;
  int max_refinements = 3;
};

/// Bound states ordered by energy, parities alternating from even, at most
/// `max_states` of them. Returns an empty list when none exist. Throws
/// RootError if interlacing fails even after refining the scan.
/// Returned states carry the provisional norm_const = 1.
std::vector<EigenState> solve_spectrum(const WellSpec& well, int max_states, const SolveOptions& options = {});

/// psi(x) = C * s(x) * f(|x|) with s = 1 (even) or sgn(x) (odd) and f the
/// decaying special-function branch.
double eigenfunction(const EigenState& state, double x);

/// d psi / dx from the special-function derivatives; at x = 0 returns the
/// right derivative (0 for even states).
double eigenfunction_derivative(const EigenState& state, double x);

/// Classical turning point r > 0 where v(r) = E.
double turning_point(const EigenState& state);

/// Radius beyond which |psi| < rel * max|psi|.
double decay_radius(const EigenState& state, double rel = 1e-17);

}  // namespace twopiece
