#pragma once

// Normalization, analytic derivatives and position-space moments <p^{2j}>.

#include <array>
#include <optional>
#include <vector>

#include "twopiece/wells.hpp"

namespace twopiece {

struct NormalizedState {
  EigenState state;
  /// Quadrature error estimate of the norm integral.
  double accuracy = 0.0;
  /// Half-width beyond which |psi| < 1e-17 max|psi|.
  double support = 0.0;
};

/// Fixes norm_const so that 2 int_0^inf psi^2 dx = 1. Throws AccuracyError if
/// the quadrature error exceeds 1e-10.
NormalizedState normalize(const EigenState& state);

/// psi''(x) = (V - E) psi, continuous at 0.
double second_derivative(const EigenState& state, double x);

/// psi'''(x) = V'(x) psi + (V - E) psi' on each open half-line. At x = 0 the
/// right limit is returned.
double third_derivative(const EigenState& state, double x);

/// <V> = int V psi^2 dx.
double expectation_potential(const NormalizedState& ns);

/// <(E - V)^j> = int psi (E - V)^j psi dx.
double energy_gap_moment(const NormalizedState& ns, int j);

struct CutoffPoint {
  double cutoff = 0.0;
  double value = 0.0;
};

struct PositionMoment {
  int j = 1;
  /// Empty when the cutoff study does not plateau.
  std::optional<double> value;
  double error = 0.0;
  /// <(E - V)^j>.
  double ev_term = 0.0;
  /// j = 3 only: 2 int_eps^inf (psi''')^2 for shrinking eps.
  std::vector<CutoffPoint> cutoff_study;
};

/// j = 1: int psi (E - V) psi.
/// j = 2: int (psi'')^2 with psi'' = (V - E) psi, which equals <(E - V)^2>.
/// j = 3: int (psi''')^2 over x != 0, the self-adjoint quadratic form; the
///        origin is excluded and approached through an eps-cutoff study.
PositionMoment position_moment(const NormalizedState& ns, int j);

struct PositionMoments {
  double p2 = 0.0;
  double p4 = 0.0;
  std::optional<double> p6_quadratic_form;
  /// <(E - V)^j> for j = 1, 2, 3 at indices 0, 1, 2.
  std::array<double, 3> ev_terms{};
  std::vector<CutoffPoint> p6_cutoff_study;
};

PositionMoments position_moments(const NormalizedState& ns);

struct OriginJump {
  /// psi(0) (the A coefficient for even states).
  double psi0 = 0.0;
  /// psi'(0+) (the B coefficient for odd states).
  double slope0 = 0.0;
  double third_right = 0.0;
  double third_left = 0.0;
  /// psi'''(0+) - psi'''(0-); equals 2 V'(0+) psi(0).
  double jump = 0.0;
};

OriginJump third_derivative_jump(const NormalizedState& ns);

}  // namespace twopiece
