// Reduced equations of motion of the wheel-on-turntable mechanism.
//
// The state is (r, v, omega): slider displacement, slider speed and angular
// speed of the top disc. Time is rescaled so that the positive factor
// m (beta^2 + r^2) multiplies the right-hand side instead of dividing it.
#pragma once

#include <array>
#include <utility>

namespace turntable {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// Physical constants of the device. Plain aggregate; call validate() (or use
/// one of the factory/parse paths, which do) before handing it to the solver.
struct SystemParams {
  double d = 0.0;       // offset of the slider axis from the disc axis
  double m = 0.0;       // slider mass
  double beta = 0.0;    // radius of gyration of the top disc (Theta = beta^2 m)
  double c1 = 0.0;      // viscous coupling between the discs
  double c2 = 0.0;      // slider damping
  double k2 = 0.0;      // slider spring stiffness
  double r0 = 0.0;      // spring equilibrium offset
  double omega0 = 0.0;  // bottom disc angular speed
  double mu = 0.0;      // kinetic friction magnitude
  double gamma = 0.0;   // wheel mounting angle, (-pi, pi]
  double kappa = 0.0;   // friction moment arm

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// The fixed constants used for the turntable study: d = m = 1,
  /// c1 = c2 = 1e-3, beta = 1/20, r0 = 0.1, omega0 = -1, mu = 1,
  /// gamma = -3 pi / 4. k2 and kappa are left at zero (designer outputs).
  static SystemParams reference_partial();

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct State {
  double r = 0.0;
  double v = 0.0;
  double omega = 0.0;

  [[nodiscard]] Vec3 vec() const { return {r, v, omega}; }
  static State from(const Vec3& x) { return {x[0], x[1], x[2]}; }
  [[nodiscard]] bool finite() const;

  friend bool operator==(const State&, const State&) = default;
};

enum class ContactTag { SlipPositive, SlipNegative, Stick };

struct ContactMode {
  ContactTag tag = ContactTag::SlipPositive;
  double lambda = 0.0;  // static friction force, meaningful only in Stick

  static ContactMode slip(int side) {
    return {side > 0 ? ContactTag::SlipPositive : ContactTag::SlipNegative, 0.0};
  }
  static ContactMode stick(double lambda) { return {ContactTag::Stick, lambda}; }

  [[nodiscard]] int side() const {
    return tag == ContactTag::SlipPositive ? 1 : tag == ContactTag::SlipNegative ? -1 : 0;
  }
};

const char* to_string(ContactTag tag);

/// Lateral relative velocity of the wheel; the switching surface is h = 0.
double eval_h(const State& s, const SystemParams& p);
/// Rolling-direction relative velocity of the wheel.
double eval_g(const State& s, const SystemParams& p);
double eval_p1(const State& s, const SystemParams& p);
double eval_p2(double r, const SystemParams& p);

/// Gradient of h with respect to (r, v, omega).
Vec3 h_gradient(const State& s, const SystemParams& p);

/// Right-hand side for prescribed friction force and moment.
Vec3 field_with_friction(const State& s, double force, double moment, const SystemParams& p);

/// Right-hand side in the given contact mode. Slip modes take F, M from the
/// scaled tyre law with sign(h) fixed by the tag, so h = 0 gives the
/// one-sided limit. Stick uses F = lambda, M = kappa lambda and throws
/// std::invalid_argument for |lambda| > mu.
Vec3 vector_field(const State& s, const ContactMode& mode, const SystemParams& p);

struct LinearSplit {
  Vec3 f0;        // f(x, 0)
  Vec3 f_lambda;  // d f / d lambda, constant in lambda
};

/// f(x, lambda) = f0 + lambda f_lambda with M = kappa_eff lambda. The default
/// moment arm is p.kappa.
LinearSplit f_and_f_lambda(const State& s, const SystemParams& p);
LinearSplit f_and_f_lambda(const State& s, const SystemParams& p, double kappa_eff);

/// Analytic Jacobian d f(x, lambda) / dx with M = kappa lambda.
Mat3 field_jacobian(const State& s, double lambda, const SystemParams& p);

/// Hessian of h (constant off-diagonal structure, h is bilinear).
Mat3 h_hessian(const SystemParams& p);

/// Converts a rescaled-time increment at state s to physical time.
double physical_time_step(double rescaled_dt, const State& s, const SystemParams& p);

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double c, const Vec3& a) { return {c * a[0], c * a[1], c * a[2]}; }
double norm(const Vec3& a);
Vec3 mat_vec(const Mat3& m, const Vec3& x);
Vec3 mat_tvec(const Mat3& m, const Vec3& x);

}  // namespace turntable
