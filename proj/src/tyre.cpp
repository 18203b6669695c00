#include "turntable/tyre.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "turntable/model.hpp"

namespace turntable {

using std::numbers::pi;

void TyreParams::validate() const {
  if (!(k > 0.0) || !(a > 0.0) || !(sigma >= 0.0) || !(delta > 0.0))
    throw std::invalid_argument("invalid TyreParams: need k > 0, a > 0, sigma >= 0, delta > 0");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("invalid TyreParams: need 0 < rho <= 1");
}

TyreParams TyreParams::specialized(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("specialized tyre requires kappa > 0");
  return {1.0 / (3.0 * kappa), 3.0 * kappa, 0.0, 1.0 / (3.0 * kappa), 2.0 / 3.0};
}

const char* to_string(TyreRegime r) {
  switch (r) {
    case TyreRegime::NoSlip: return "no_slip";
    case TyreRegime::PartialSlip: return "partial_slip";
    case TyreRegime::CompleteSlip: return "complete_slip";
  }
  return "?";
}

double arccot(double x) { return std::atan2(1.0, x); }

double deformation_profile(double x, double phi, const TyreParams& tp) {
  const double q = (tp.a + tp.sigma - x) * std::tan(phi);
  const double cap = tp.delta / tp.k;
  return std::abs(q) > cap ? std::copysign(cap, q) : q;
}

double slip_boundary(double phi, const TyreParams& tp) {
  if (!(phi > 0.0 && phi < pi / 2))
    throw std::domain_error("slip_boundary requires 0 < phi < pi/2");
  return tp.a + tp.sigma - tp.delta / (tp.k * std::tan(phi));
}

TyreOutput force_moment_raw(double phi, const TyreParams& tp) {
  if (!(phi >= 0.0 && phi <= pi / 2)) throw std::domain_error("slip angle outside [0, pi/2]");
  const double a = tp.a, k = tp.k, s = tp.sigma, dl = tp.delta, rho = tp.rho;
  if (phi == 0.0) return {0.0, 0.0, TyreRegime::NoSlip};
  if (phi == pi / 2) return {2.0 * a * rho * dl, 0.0, TyreRegime::CompleteSlip};

  const double t = std::tan(phi);
  const double cot = 1.0 / t;
  const double xs = slip_boundary(phi, tp);
  if (xs <= -a) {
    return {2.0 * a * k * (a + s) * t, 2.0 / 3.0 * a * a * a * k * t, TyreRegime::NoSlip};
  }
  if (xs >= a) return {2.0 * a * rho * dl, 0.0, TyreRegime::CompleteSlip};

  // Adhesion on [x_s, a] carries k q(x); the sliding part [-a, x_s] carries
  // the dynamic pressure rho delta.
  const double force = rho * dl * (2.0 * a + s) + dl * dl / (2.0 * k) * (1.0 - 2.0 * rho) * cot -
                       0.5 * k * s * s * t;
  const double moment =
      (k * k * k * s * s * (3.0 * a + s) * t + dl * dl * cot * (2.0 * dl * cot - 3.0 * k * (a + s))) /
          (6.0 * k * k) -
      0.5 * dl * rho * (xs * xs - a * a);
  return {force, moment, TyreRegime::PartialSlip};
}

double rescale_slip_angle(double phi, double kappa) {
  const double onset = arccot(6.0 * kappa);
  return onset + std::abs(1.0 - 2.0 / pi * onset) * phi;
}

ForceMoment slip_force_moment(int side, double h, double g, const SystemParams& p) {
  const double psi = rescale_slip_angle(std::atan2(std::abs(h), std::abs(g)), p.kappa);
  // cot(pi/2) must come out as exactly zero so that M is smooth across g = 0.
  const double cot_psi = psi >= pi / 2 ? 0.0 : std::cos(psi) / std::sin(psi);
  const double sh = side > 0 ? 1.0 : -1.0;
  const double sg = g < 0.0 ? -1.0 : 1.0;
  return {sh * p.mu * (4.0 / 3.0 - cot_psi / (18.0 * p.kappa)), sg * sh * p.mu / 6.0 * cot_psi};
}

ForceMoment force_moment_scaled(double h, double g, const SystemParams& p) {
  if (h == 0.0 && g == 0.0) throw std::domain_error("scaled tyre law undefined at h = g = 0");
  if (h == 0.0) throw std::domain_error("scaled tyre law is discontinuous at h = 0; use slip_force_moment");
  return slip_force_moment(h > 0.0 ? 1 : -1, h, g, p);
}

}  // namespace turntable
