#pragma once

// Independent Numerov shooting solver on a truncated half-line [0, L], used
// to cross-check the closed-form spectra. Not a production eigensolver.

#include <vector>

#include "twopiece/wells.hpp"

namespace twopiece::oracle {

struct Interval {
  double lo;
  double hi;
};

struct GridSolution {
  double step = 0.0;
  double length = 0.0;
  std::vector<double> x;
  /// Normalized so that 2 * trapezoid(psi^2) = 1; positive in the decaying tail.
  std::vector<double> psi;
  double energy = 0.0;
  Parity parity = Parity::even;
  /// Parity boundary condition at x = 0 at the returned energy (dimensionless).
  double boundary_mismatch = 0.0;
  /// Energy recomputed with step / 2.
  double energy_half_step = 0.0;
};

/// Half-domain length used when the caller has no better choice:
///   triangular  turning point + 12a
///   conv_exp    turning point + max(12a, 25/k), k = sqrt(-E)
///   div_exp     turning point + 4a
double default_length(const WellSpec& well, double energy);

/// Shoots inward from x = L (psi(L) = 0) and tunes E inside `bracket` until
/// psi'(0) = 0 (even) or psi(0) = 0 (odd) holds to 1e-10. Requires
/// step <= 1e-3 a. Throws RootError when the bracket holds no sign change of
/// the mismatch, AccuracyError if halving the step moves E by 1e-4 or more.
GridSolution numerov_solve(const WellSpec& well, Parity parity, Interval bracket, double step, double length);

/// The eigenvalue alone, without the step-size precondition; used for
/// convergence-order studies.
double numerov_energy(const WellSpec& well, Parity parity, Interval bracket, double step, double length);

}  // namespace twopiece::oracle
