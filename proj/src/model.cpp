#include "turntable/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "turntable/tyre.hpp"

namespace turntable {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("invalid SystemParams: ") + what);
}

}  // namespace

void SystemParams::validate() const {
  for (double x : {d, m, beta, c1, c2, k2, r0, omega0, mu, gamma, kappa})
    require(std::isfinite(x), "all fields must be finite");
  require(m > 0.0, "m must be > 0");
  require(beta > 0.0, "beta must be > 0");
  require(mu > 0.0, "mu must be > 0");
  require(gamma > -std::numbers::pi && gamma <= std::numbers::pi, "gamma must lie in (-pi, pi]");
}

SystemParams SystemParams::reference_partial() {
  SystemParams p;
  p.d = 1.0;
  p.m = 1.0;
  p.c1 = 1e-3;
  p.c2 = 1e-3;
  p.beta = 1.0 / 20.0;
  p.r0 = 1e-1;
  p.omega0 = -1.0;
  p.mu = 1.0;
  p.gamma = -0.75 * std::numbers::pi;
  return p;
}

bool State::finite() const { return std::isfinite(r) && std::isfinite(v) && std::isfinite(omega); }

const char* to_string(ContactTag tag) {
  switch (tag) {
    case ContactTag::SlipPositive: return "slip+";
    case ContactTag::SlipNegative: return "slip-";
    case ContactTag::Stick: return "stick";
  }
  return "?";
}

double eval_h(const State& s, const SystemParams& p) {
  const double dw = s.omega - p.omega0;
  return -(s.v - p.d * dw) * std::sin(p.gamma) - s.r * dw * std::cos(p.gamma);
}

double eval_g(const State& s, const SystemParams& p) {
  const double dw = s.omega - p.omega0;
  return -(s.v - p.d * dw) * std::cos(p.gamma) + s.r * dw * std::sin(p.gamma);
}

double eval_p1(const State& s, const SystemParams& p) {
  return p.k2 * (p.r0 - s.r) - p.c2 * s.v + p.m * s.r * s.omega * s.omega;
}

double eval_p2(double r, const SystemParams& p) {
  return p.d * r * std::cos(p.gamma) + (p.beta * p.beta + r * r) * std::sin(p.gamma);
}

Vec3 h_gradient(const State& s, const SystemParams& p) {
  const double sg = std::sin(p.gamma);
  const double cg = std::cos(p.gamma);
  return {-(s.omega - p.omega0) * cg, -sg, p.d * sg - s.r * cg};
}

Mat3 h_hessian(const SystemParams& p) {
  const double cg = std::cos(p.gamma);
  return {Vec3{0.0, 0.0, -cg}, Vec3{0.0, 0.0, 0.0}, Vec3{-cg, 0.0, 0.0}};
}

Vec3 field_with_friction(const State& s, double force, double moment, const SystemParams& p) {
  const double b2 = p.beta * p.beta;
  const double r2 = s.r * s.r;
  const double p1 = eval_p1(s, p);
  const double coupling = p.c1 + 2.0 * p.m * s.r * s.v;
  return {
      p.m * (b2 + r2) * s.v,
      (b2 + p.d * p.d + r2) * p1 - p.d * coupling * s.omega + force * eval_p2(s.r, p) + p.d * moment,
      p.d * p1 - coupling * s.omega + force * s.r * std::cos(p.gamma) + moment,
  };
}

Vec3 vector_field(const State& s, const ContactMode& mode, const SystemParams& p) {
  if (mode.tag == ContactTag::Stick) {
    if (!(std::abs(mode.lambda) <= p.mu * (1.0 + 1e-12)))
      throw std::invalid_argument("stick friction force exceeds mu");
    return field_with_friction(s, mode.lambda, p.kappa * mode.lambda, p);
  }
  const ForceMoment fm = slip_force_moment(mode.side(), eval_h(s, p), eval_g(s, p), p);
  return field_with_friction(s, fm.force, fm.moment, p);
}

LinearSplit f_and_f_lambda(const State& s, const SystemParams& p) {
  return f_and_f_lambda(s, p, p.kappa);
}

LinearSplit f_and_f_lambda(const State& s, const SystemParams& p, double kappa_eff) {
  return {field_with_friction(s, 0.0, 0.0, p),
          {0.0, eval_p2(s.r, p) + p.d * kappa_eff, s.r * std::cos(p.gamma) + kappa_eff}};
}

Mat3 field_jacobian(const State& s, double lambda, const SystemParams& p) {
  const double b2 = p.beta * p.beta;
  const double r = s.r, v = s.v, w = s.omega;
  const double r2 = r * r;
  const double cg = std::cos(p.gamma);
  const double sg = std::sin(p.gamma);
  const double p1 = eval_p1(s, p);
  const double p1_r = -p.k2 + p.m * w * w;
  const double p1_v = -p.c2;
  const double p1_w = 2.0 * p.m * r * w;
  const double p2_r = p.d * cg + 2.0 * r * sg;
  const double coupling = p.c1 + 2.0 * p.m * r * v;
  const double inertia = b2 + p.d * p.d + r2;

  Mat3 j{};
  j[0] = {2.0 * p.m * r * v, p.m * (b2 + r2), 0.0};
  j[1] = {2.0 * r * p1 + inertia * p1_r - 2.0 * p.d * p.m * v * w + lambda * p2_r,
          inertia * p1_v - 2.0 * p.d * p.m * r * w,
          inertia * p1_w - p.d * coupling};
  j[2] = {p.d * p1_r - 2.0 * p.m * v * w + lambda * cg,
          p.d * p1_v - 2.0 * p.m * r * w,
          p.d * p1_w - coupling};
  return j;
}

double physical_time_step(double rescaled_dt, const State& s, const SystemParams& p) {
  return rescaled_dt * p.m * (p.beta * p.beta + s.r * s.r);
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 mat_vec(const Mat3& m, const Vec3& x) { return {dot(m[0], x), dot(m[1], x), dot(m[2], x)}; }

Vec3 mat_tvec(const Mat3& m, const Vec3& x) {
  return {m[0][0] * x[0] + m[1][0] * x[1] + m[2][0] * x[2],
          m[0][1] * x[0] + m[1][1] * x[1] + m[2][1] * x[2],
          m[0][2] * x[0] + m[1][2] * x[1] + m[2][2] * x[2]};
}

}  // namespace turntable
