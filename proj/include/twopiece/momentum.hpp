#pragma once

// Momentum-space wavefunctions, distributions p^{2j} I(p), cutoff studies of
// the moments <p^{2j}> and power-law tail fits.
//
// Phase convention: phi(p) = cos_part - i sin_part with
//   cos_part = sqrt(2/pi) int_0^inf psi(x) cos(px) dx   (even states)
//   sin_part = sqrt(2/pi) int_0^inf psi(x) sin(px) dx   (odd states)
// so exactly one part is nonzero and I(p) = cos_part^2 + sin_part^2.

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "twopiece/quadrature.hpp"
#include "twopiece/spectral.hpp"

namespace twopiece {

struct TransformValue {
  double cos_part = 0.0;
  double sin_part = 0.0;
  double error = 0.0;
};

/// Caches a Chebyshev interpolant of psi on [0, support] so that repeated
/// evaluations at many p stay cheap. Immutable after construction; safe to
/// share between threads.
class MomentumTransform {
 public:
  explicit MomentumTransform(const NormalizedState& ns);

  /// Throws AccuracyError when the error estimate exceeds 1e-9 or the
  /// oscillation count is beyond what the panel budget resolves.
  TransformValue evaluate(double p) const;
  /// The nonzero real part: cos_part for even states, sin_part for odd ones.
  double amplitude(double p) const;
  /// I(p) = |phi(p)|^2.
  double density(double p) const;

  const NormalizedState& state() const { return ns_; }
  Parity parity() const { return ns_.state.parity; }

 private:
  NormalizedState ns_;
  quad::PiecewiseChebyshev psi_;
  double interpolation_error_ = 0.0;
};

/// One-shot amplitude (see MomentumTransform::amplitude).
double transform(const NormalizedState& ns, double p);

struct MomentumDistribution {
  int j = 0;
  Parity parity = Parity::even;
  std::vector<double> p;
  /// I(p).
  std::vector<double> density;
  /// p^{2j} I(p).
  std::vector<double> weighted;
  /// Error estimate of each weighted sample.
  std::vector<double> quad_error;
};

/// Log-spaced grid from p_min = min(0.05/a, p_max/1000) to p_max. Samples
/// are computed in parallel over `threads` workers with identical results.
MomentumDistribution distribution(const MomentumTransform& t, double p_max, int n_points, int j, int threads = 1);

enum class Verdict { converged, diverging, marginal };
std::string_view to_string(Verdict v);

struct MomentReport {
  int j = 1;
  /// (P, 2 int_0^P p^{2j} I dp).
  std::vector<CutoffPoint> cutoff_values;
  Verdict verdict = Verdict::marginal;
  /// Extrapolated limit; present for Converged verdicts.
  std::optional<double> value;
  /// Ratio of the last two increments normalized to one decade of P.
  double decade_ratio = 0.0;
  /// True when the last increment is below the quadrature noise floor.
  bool at_noise_floor = false;
  /// Position-space companion (empty when flagged nonconvergent).
  std::optional<double> position_value;
};

/// 1/a times {4, 8, ..., 512}.
std::vector<double> default_cutoffs(const WellSpec& well);

/// Verdict rule: with increments D_k of the partial integrals and r the
/// ratio of the last two increments scaled to one decade of P,
///   Converged  if r < 0.5 or the last increment is below the noise floor,
///   Diverging  if the last increment is not smaller than the one before,
///   Marginal   otherwise.
/// Converged values are extrapolated geometrically from the last increment.
MomentReport moment(const MomentumTransform& t, int j, std::span<const double> cutoffs, int threads = 1);

/// Reports for j = 1, 2, 3 from a single pass over the p-axis.
std::array<MomentReport, 3> moments(const MomentumTransform& t, std::span<const double> cutoffs, int threads = 1);

/// int_{-inf}^{inf} I(p) dp.
quad::Estimate parseval_norm(const MomentumTransform& t, int threads = 1);

struct TailWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct WindowFit {
  double lo = 0.0;
  double hi = 0.0;
  double exponent = 0.0;
  double r_squared = 0.0;
  std::size_t samples = 0;
};

struct TailFit {
  /// Median of the window exponents; I(p) ~ p^{-exponent}.
  double exponent = 0.0;
  std::vector<WindowFit> windows;
  /// max |window exponent - median|.
  double stability = 0.0;
  /// Smallest r^2 over the windows.
  double r_squared = 0.0;
};

/// Windows {20, 35}, {25, 42}, {30, 50} in units of 1/a.
std::vector<TailWindow> default_tail_windows(const WellSpec& well);

/// Least-squares slope of ln I against ln p in each window. Requires a j = 0
/// distribution, windows inside the sampled range, at least 8 samples per
/// window and I > 0 there (DomainError otherwise).
TailFit tail_fit(const MomentumDistribution& dist, std::span<const TailWindow> windows);

}  // namespace twopiece
