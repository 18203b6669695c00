// Stretched-string tyre model: lateral friction force and aligning moment of
// a rolling wheel as functions of the slip angle, and the scaled
// discontinuous law F(h, g), M(h, g) that drives the turntable.
#pragma once

namespace turntable {

struct SystemParams;

struct TyreParams {
  double k = 0.0;      // lateral stiffness
  double a = 0.0;      // contact patch half-length
  double sigma = 0.0;  // relaxation length
  double delta = 0.0;  // maximal static lateral pressure
  double rho = 1.0;    // dynamic / static pressure ratio, 0 < rho <= 1

  void validate() const;

  /// sigma = 0, rho = 2/3, delta = k = 1/(3 kappa), a = 3 kappa: the choice
  /// for which F = 1 and M = kappa exactly at the onset of slip.
  static TyreParams specialized(double kappa);
};

enum class TyreRegime { NoSlip, PartialSlip, CompleteSlip };

const char* to_string(TyreRegime r);

struct TyreOutput {
  double force = 0.0;
  double moment = 0.0;
  TyreRegime regime = TyreRegime::NoSlip;
};

struct ForceMoment {
  double force = 0.0;
  double moment = 0.0;
};

/// Steady rolling deformation (a + sigma - x) tan(phi), clipped to the
/// saturation deformation delta / k.
double deformation_profile(double x, double phi, const TyreParams& tp);

/// Point x_s of the contact line where the deformation reaches delta / k.
/// Requires 0 < phi < pi/2; phi = 0 never saturates and is rejected.
double slip_boundary(double phi, const TyreParams& tp);

/// Force and moment for 0 <= phi <= pi/2, magnitudes positive for phi > 0.
TyreOutput force_moment_raw(double phi, const TyreParams& tp);

/// Slip angle psi(phi) of the scaled law: maps [0, pi/2] onto
/// [arccot(6 kappa), pi/2], removing the steep no-slip branch.
double rescale_slip_angle(double phi, double kappa);

/// Scaled friction law of the turntable. Throws for (h, g) = (0, 0).
ForceMoment force_moment_scaled(double h, double g, const SystemParams& p);

/// Same law with sign(h) supplied separately, so that h = 0 yields the
/// one-sided limit from that side. Used on the switching surface.
ForceMoment slip_force_moment(int side, double h, double g, const SystemParams& p);

double arccot(double x);

}  // namespace turntable
