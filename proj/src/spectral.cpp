#include "twopiece/spectral.hpp"

#include <cmath>
#include <functional>

#include "twopiece/errors.hpp"
#include "twopiece/quadrature.hpp"

namespace twopiece {
namespace {

// 2 int_lo^hi g(x) dx, split at the turning point where the eigenfunction
// changes character.
quad::Estimate half_line(const EigenState& s, double lo, double hi, const std::function<double(double)>& g,
                         double rel_tol = 1e-12) {
  const double tp = turning_point(s);
  quad::Estimate total{};
  auto add = [&](double a, double b) {
    if (b <= a) return;
    const auto e = quad::integrate(g, a, b, rel_tol, 1e-300);
    total.value += 2 * e.value;
    total.error += 2 * e.error;
  };
  if (tp > lo && tp < hi) {
    add(lo, tp);
    add(tp, hi);
  } else {
    add(lo, hi);
  }
  return total;
}

}  // namespace

NormalizedState normalize(const EigenState& state) {
  EigenState s = state;
  const double support = decay_radius(s, 1e-17);
  const auto norm = half_line(s, 0.0, support, [&](double x) {
    const double v = eigenfunction(s, x);
    return v * v;
  });
  if (!(norm.value > 0) || norm.error > 1e-10 * norm.value) {
    throw AccuracyError("normalize: norm integral not resolved", norm.error / norm.value);
  }
  s.norm_const /= std::sqrt(norm.value);
  return {s, norm.error / norm.value, support};
}

double second_derivative(const EigenState& state, double x) {
  return (potential(state.well, x) - state.energy) * eigenfunction(state, x);
}

double third_derivative(const EigenState& state, double x) {
  const double r = std::fabs(x);
  const double sign = x < 0 ? -1.0 : 1.0;
  // psi(x) = s(x) f(|x|); on x < 0 the third derivative of an even function is odd and vice versa.
  const double parity_sign = state.parity == Parity::even ? sign : 1.0;
  const double f = eigenfunction(state, r);
  const double df = eigenfunction_derivative(state, r);
  const double third = branch_potential(state.well, r, 1) * f + (branch_potential(state.well, r) - state.energy) * df;
  return parity_sign * third;
}

double expectation_potential(const NormalizedState& ns) {
  const auto& s = ns.state;
  return half_line(s, 0.0, ns.support, [&](double x) {
           const double v = eigenfunction(s, x);
           return potential(s.well, x) * v * v;
         })
      .value;
}

double energy_gap_moment(const NormalizedState& ns, int j) {
  const auto& s = ns.state;
  return half_line(s, 0.0, ns.support, [&](double x) {
           const double v = eigenfunction(s, x);
           return std::pow(s.energy - potential(s.well, x), j) * v * v;
         })
      .value;
}

PositionMoment position_moment(const NormalizedState& ns, int j) {
  if (j < 1 || j > 3) throw DomainError("position_moment: j must be 1, 2 or 3");
  const auto& s = ns.state;
  PositionMoment out;
  out.j = j;
  out.ev_term = energy_gap_moment(ns, j);

  if (j == 1 || j == 2) {
    const auto e = half_line(s, 0.0, ns.support, [&](double x) {
      const double v = eigenfunction(s, x);
      if (j == 1) return v * (s.energy - potential(s.well, x)) * v;
      const double d2 = second_derivative(s, x);
      return d2 * d2;
    });
    out.value = e.value;
    out.error = e.error;
    return out;
  }

  auto g = [&](double x) {
    const double d3 = third_derivative(s, x);
    return d3 * d3;
  };
  // Integrate from the outside in so every cutoff reuses the outer part.
  constexpr double outer = 1e-1;
  auto acc = half_line(s, outer * s.well.a, ns.support, g);
  out.cutoff_study.push_back({outer * s.well.a, acc.value});
  double last_increment = 0.0, prev_increment = 0.0;
  for (double eps = outer / 10; eps >= 1e-8; eps /= 10) {
    const auto piece = half_line(s, eps * s.well.a, eps * 10 * s.well.a, g);
    acc.value += piece.value;
    acc.error += piece.error;
    prev_increment = last_increment;
    last_increment = piece.value;
    out.cutoff_study.push_back({eps * s.well.a, acc.value});
  }
  // A bounded integrand near the origin makes each decade's increment ten
  // times smaller than the previous one; anything slower is not a plateau.
  const bool plateau = last_increment <= 1e-6 * acc.value || last_increment <= 0.5 * prev_increment;
  const auto head = half_line(s, 0.0, 1e-8 * s.well.a, g);
  out.error = acc.error + head.error;
  if (plateau) out.value = acc.value + head.value;
  return out;
}

PositionMoments position_moments(const NormalizedState& ns) {
  PositionMoments out;
  const auto m1 = position_moment(ns, 1);
  const auto m2 = position_moment(ns, 2);
  const auto m3 = position_moment(ns, 3);
  out.p2 = *m1.value;
  out.p4 = *m2.value;
  out.p6_quadratic_form = m3.value;
  out.ev_terms = {m1.ev_term, m2.ev_term, m3.ev_term};
  out.p6_cutoff_study = m3.cutoff_study;
  return out;
}

OriginJump third_derivative_jump(const NormalizedState& ns) {
  const auto& s = ns.state;
  OriginJump out;
  out.psi0 = eigenfunction(s, 0.0);
  out.slope0 = eigenfunction_derivative(s, 0.0);
  out.third_right = third_derivative(s, 0.0);
  const double sign = s.parity == Parity::even ? -1.0 : 1.0;
  out.third_left = sign * out.third_right;
  out.jump = out.third_right - out.third_left;
  return out;
}

}  // namespace twopiece
