// Event-driven integration of the piecewise-smooth turntable system.
//
// Slip phases integrate the tyre-law field on one side of the switching
// surface h = 0. At every surface hit the one-sided flows decide between
// crossing and sticking; stick phases follow the sliding vector field with
// the constraint h = 0 enforced by projection, until the friction force
// reaches +-mu (sliding exit) or the trajectory runs into a two-fold
// singularity.
//
// On the surface the one-sided limits of the tyre law are
// F -> +-mu, M -> +-sign(g) mu kappa, so the stick moment arm is
// sign(g) kappa. Where g > 0 this is exactly f(x, lambda) with M = kappa lambda.
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "turntable/model.hpp"

namespace turntable {

struct IntegratorOptions {
  double t_max = 100.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.05;
  double initial_step = 1e-4;
  /// Surface-hit tolerance relative to the local velocity scale.
  double tol_event = 1e-10;
  double tol_lambda = 1e-8;
  /// Two-fold trigger relative to running maxima of the Lie derivatives.
  double tol_sing = 1e-7;
  /// Distance (relative to the velocity scale) from the line h = g = 0 at
  /// which full stick is tested.
  double tol_full_stick = 1e-8;
  double blowup_bound = 1e6;
  std::size_t max_events = 20000;
  bool allow_escaping_stick = false;
  /// Stop when the trajectory enters the ball after having been farther than
  /// arm_radius from its center (0 means 2 * return_radius).
  std::optional<State> return_center;
  double return_radius = 0.0;
  double arm_radius = 0.0;
};

enum class RegionTag { Crossing, Sliding, Escaping, TwoFoldCandidate };
const char* to_string(RegionTag t);

/// Lie derivatives of h along the one-sided flows at a surface point.
struct SurfaceSplit {
  LinearSplit split;    // f0 and f_lambda with the one-sided moment arm
  double kappa_eff;     // sign(g) kappa
  double lie0;          // h_x . f(x, 0)
  double lie_lambda;    // h_x . f_lambda
  double lie_plus;      // h_x . f(x, +mu)
  double lie_minus;     // h_x . f(x, -mu)
  double scale0;        // |h_x| |f0|
  double scale_lambda;  // |h_x| |f_lambda|
};

SurfaceSplit surface_split(const State& s, const SystemParams& p);

struct RegionClass {
  RegionTag tag = RegionTag::Crossing;
  std::optional<double> lambda_star;
  double lie_plus = 0.0;
  double lie_minus = 0.0;
};

/// Classifies a point of the switching surface. Throws std::invalid_argument
/// when |h| exceeds tol_surface times the velocity scale.
RegionClass classify(const State& s, const SystemParams& p, double tol_surface = 1e-8,
                     double tol_sing = 1e-7);

/// Raised when the sliding field is requested at (or numerically at) a
/// two-fold singularity.
class SingularityHitError : public std::runtime_error {
 public:
  explicit SingularityHitError(const State& s);
  State state;
};

/// Sliding vector field f0 - (lie0 / lie_lambda) f_lambda. Requires a
/// sliding or escaping point; throws SingularityHitError near a two-fold and
/// std::invalid_argument in the crossing region.
Vec3 sliding_field(const State& s, const SystemParams& p, double tol_sing = 1e-7);

/// Static friction force that keeps the flow tangent to the surface.
double tangency_lambda(const State& s, const SystemParams& p);

enum class EventTag {
  SurfaceHit,
  SlidingExit,
  SingularityHit,
  TimeLimit,
  Blowup,
  ReturnBall,
  FullStick,  // both slip velocities vanish and static friction holds: an equilibrium
  Diagnostic
};
const char* to_string(EventTag t);

struct Event {
  EventTag tag = EventTag::TimeLimit;
  double time = 0.0;
  State state;
  /// SurfaceHit: classification at the hit. SlidingExit: bound reached.
  RegionTag region = RegionTag::Crossing;
  int exit_side = 0;  // +1 for lambda = +mu, -1 for lambda = -mu
  std::string detail;
};

struct Sample {
  double t = 0.0;
  State state;
  double lambda = 0.0;  // tangency force in stick, unused (NaN) in slip
};

struct TrajectorySegment {
  ContactMode mode;
  std::vector<Sample> samples;
  Event terminal;
};

struct Trajectory {
  std::vector<TrajectorySegment> segments;

  [[nodiscard]] std::vector<Event> events() const;
  [[nodiscard]] const Event& last_event() const { return segments.back().terminal; }
};

/// Event-driven forward integration from s0 in mode0 up to opts.t_max.
/// Never throws for numerical failure: non-finite or unbounded states end the
/// run with a Blowup event.
Trajectory integrate(const State& s0, const ContactMode& mode0, const SystemParams& p,
                     const IntegratorOptions& opts = {});

/// Integrates a single slip mode from t0 for a signed duration (negative
/// runs backward in time) and stops at the first surface crossing.
struct SlipRun {
  std::vector<Sample> samples;
  bool hit = false;
  State end;
  double t_end = 0.0;
};
SlipRun integrate_slip(const State& s0, int side, double t0, double duration, const SystemParams& p,
                       const IntegratorOptions& opts = {});

/// Reactions that keep both slip velocities at zero on the line h = g = 0
/// (v = 0, omega = omega0), where the state is at rest. Admissible when
/// |F| <= mu and |M| <= mu kappa.
struct FullStickReaction {
  double force = 0.0;
  double moment = 0.0;
  bool admissible = false;
};
FullStickReaction full_stick_reaction(const State& s, const SystemParams& p);

/// Local velocity scale used for the surface tolerance.
double velocity_scale(const State& s, const SystemParams& p);

/// Moves s onto h = 0 along grad h (Newton on the bilinear h).
State project_to_surface(const State& s, const SystemParams& p);

}  // namespace turntable
