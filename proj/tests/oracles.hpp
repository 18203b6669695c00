// Independent reference computations used by the tests. Nothing here calls
// into the library beyond its plain data types.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "turntable/model.hpp"
#include "turntable/tyre.hpp"

namespace oracle {

using turntable::State;
using turntable::SystemParams;

// Free-body balance of slider and top disc, solved as a linear system for
// (R1, r'', phi''). Friction acts on the slider as -F cos(gamma) across the
// slit and +F sin(gamma) along it.
inline std::array<double, 2> free_body_accel(const State& s, double F, double M, const SystemParams& p) {
  const double r = s.r, v = s.v, w = s.omega, cg = std::cos(p.gamma), sg = std::sin(p.gamma);
  const double R2 = -p.k2 * (r - p.r0) - p.c2 * v;
  const double theta = p.beta * p.beta * p.m;
  Eigen::Matrix3d A;
  Eigen::Vector3d b;
  // unknowns: R1, rdd, pdd
  A << -1.0, 0.0, -p.m * r,  //
      0.0, p.m, -p.m * p.d,  //
      -r, 0.0, theta;
  b << -F * cg - p.m * (p.d * w * w - 2.0 * v * w), R2 + F * sg + p.m * r * w * w, -p.c1 * w + p.d * R2 + M;
  const Eigen::Vector3d x = A.partialPivLu().solve(b);
  return {x[1], x[2]};
}

// Physical velocities of the reduced system from the free-body balance.
inline turntable::Vec3 free_body_field(const State& s, double F, double M, const SystemParams& p) {
  const auto acc = free_body_accel(s, F, M, p);
  return {s.v, acc[0], acc[1]};
}

inline double h_of(const State& s, const SystemParams& p) {
  const double dw = s.omega - p.omega0;
  return -(s.v - p.d * dw) * std::sin(p.gamma) - s.r * dw * std::cos(p.gamma);
}

inline double g_of(const State& s, const SystemParams& p) {
  const double dw = s.omega - p.omega0;
  return -(s.v - p.d * dw) * std::cos(p.gamma) + s.r * dw * std::sin(p.gamma);
}

// Closed-form designer as printed.
struct Designed {
  double v, kappa, k2;
};
inline Designed closed_form_design(double r, double w, const SystemParams& p) {
  const double g = p.gamma, b2 = p.beta * p.beta;
  const double v = (w - p.omega0) * (p.d - r * std::cos(g) / std::sin(g));
  const double kappa = -(2.0 * r * r + b2 * (1.0 - std::cos(2.0 * g))) / (2.0 * r * std::cos(g));
  const double p2 = p.d * r * std::cos(g) + (b2 + r * r) * std::sin(g);
  const double num = std::sin(g) * (b2 + r * r) * (p.m * r * w * w - p.c2 * v) -
                     std::cos(g) * (p.c1 * r * w + p.c2 * p.d * r * v +
                                    p.m * (r * r * (v * (w + p.omega0) - p.d * w * w) + b2 * v * (p.omega0 - w)));
  return {v, kappa, num / ((r - p.r0) * p2)};
}

// Tyre force and moment by quadrature of the contact pressure: adhesion
// k q(x) while it stays below delta, dynamic pressure rho delta beyond.
inline std::array<double, 2> tyre_quadrature(double phi, const turntable::TyreParams& tp, int n = 20000) {
  const double t = std::tan(phi), cap = tp.delta / tp.k;
  // Saturated on [-a, xs] with rho delta, adhesion k q(x) on [xs, a].
  double xs = tp.a + tp.sigma - cap / t;
  xs = std::clamp(xs, -tp.a, tp.a);
  auto adhesion = [&](double x) { return tp.k * (tp.a + tp.sigma - x) * t; };
  auto saturated = [&](double) { return tp.rho * tp.delta; };
  double F = 0.0, M = 0.0;
  auto simpson = [&](double lo, double hi, auto pressure) {
    if (hi <= lo) return;
    const double hstep = (hi - lo) / n;
    for (int i = 0; i <= n; ++i) {
      const double x = lo + i * hstep;
      const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      F += wgt * pressure(x) * hstep / 3.0;
      M -= wgt * x * pressure(x) * hstep / 3.0;
    }
  };
  simpson(-tp.a, xs, saturated);
  simpson(xs, tp.a, adhesion);
  return {F, M};
}

inline SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 2.0), c(0.0, 0.1), ang(-3.0, 3.0), sgn(-1.0, 1.0);
  SystemParams p;
  p.d = u(rng), p.m = u(rng), p.beta = 0.5 * u(rng), p.c1 = c(rng), p.c2 = c(rng), p.k2 = u(rng);
  p.r0 = sgn(rng), p.omega0 = sgn(rng), p.mu = u(rng), p.gamma = ang(rng), p.kappa = 0.5 * u(rng);
  return p;
}

inline State random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng), 2.0 * u(rng)};
}

}  // namespace oracle
