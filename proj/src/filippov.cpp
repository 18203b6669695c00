#include "turntable/filippov.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <functional>
#include <limits>

#include "turntable/tyre.hpp"

namespace turntable {

namespace odeint = boost::numeric::odeint;

namespace {

using Dopri = odeint::runge_kutta_dopri5<Vec3>;
using DenseStepper = odeint::dense_output_runge_kutta<odeint::controlled_runge_kutta<Dopri>>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Sub-intervals of each accepted step scanned for sign changes.
constexpr int kScanPoints = 4;

double kappa_for(const State& s, const SystemParams& p) { return eval_g(s, p) < 0.0 ? -p.kappa : p.kappa; }

SurfaceSplit split_with(const State& s, const SystemParams& p, double kappa_eff) {
  SurfaceSplit sp;
  sp.kappa_eff = kappa_eff;
  sp.split = f_and_f_lambda(s, p, kappa_eff);
  const Vec3 grad = h_gradient(s, p);
  sp.lie0 = dot(grad, sp.split.f0);
  sp.lie_lambda = dot(grad, sp.split.f_lambda);
  sp.lie_plus = sp.lie0 + p.mu * sp.lie_lambda;
  sp.lie_minus = sp.lie0 - p.mu * sp.lie_lambda;
  sp.scale0 = norm(grad) * norm(sp.split.f0);
  sp.scale_lambda = norm(grad) * norm(sp.split.f_lambda);
  return sp;
}

State push_off_surface(const State& s, int side, double amount, const SystemParams& p) {
  const Vec3 grad = h_gradient(s, p);
  const double target = side * amount;
  const Vec3 x = s.vec() + ((target - eval_h(s, p)) / dot(grad, grad)) * grad;
  return State::from(x);
}

bool out_of_bounds(const Vec3& x, const IntegratorOptions& o) {
  return !std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(x[2]) || norm(x) > o.blowup_bound;
}

/// One monitored scalar. The event fires when the value goes from >= 0 to < 0.
struct Monitor {
  std::function<double(const Vec3&)> value;
  int id = 0;
};

struct Crossing {
  int id = -1;
  double t = 0.0;
  Vec3 x{};
};

/// Scans the dense interpolant on [ta, tb] and returns the earliest monitor
/// crossing, localized with TOMS 748.
std::optional<Crossing> scan_step(const DenseStepper& stepper, double ta, const Vec3& xa, double tb,
                                  const std::vector<Monitor>& monitors) {
  auto state_at = [&](double t) {
    Vec3 x;
    stepper.calc_state(t, x);
    return x;
  };
  std::optional<Crossing> best;
  std::vector<double> prev(monitors.size());
  for (std::size_t i = 0; i < monitors.size(); ++i) prev[i] = monitors[i].value(xa);
  double t_prev = ta;
  for (int k = 1; k <= kScanPoints && !best; ++k) {
    const double t = k == kScanPoints ? tb : ta + (tb - ta) * k / kScanPoints;
    const Vec3 x = state_at(t);
    for (std::size_t i = 0; i < monitors.size(); ++i) {
      const double now = monitors[i].value(x);
      if (prev[i] >= 0.0 && now < 0.0) {
        double root = t_prev;
        if (prev[i] > 0.0) {
          auto f = [&](double tt) { return monitors[i].value(state_at(tt)); };
          std::uintmax_t iters = 200;
          const auto bracket = boost::math::tools::toms748_solve(
              f, t_prev, t, prev[i], now, boost::math::tools::eps_tolerance<double>(50), iters);
          // Keep the side where the event has not yet fired.
          root = bracket.first;
        }
        if (!best || root < best->t) best = Crossing{monitors[i].id, root, state_at(root)};
      }
      prev[i] = now;
    }
    t_prev = t;
  }
  return best;
}

struct SegmentRun {
  std::vector<Sample> samples;
  Event event;
  State resume;  // state from which the next segment starts
  int next_side = 0;
  bool next_stick = false;
};

Event make_event(EventTag tag, double t, const State& s, std::string detail = {}) {
  Event e;
  e.tag = tag;
  e.time = t;
  e.state = s;
  e.detail = std::move(detail);
  return e;
}

class Integrator {
 public:
  Integrator(const SystemParams& p, const IntegratorOptions& o) : p_(p), o_(o) {}

  bool ball_armed = false;

  bool beyond_arm(const State& s) const {
    const double arm = o_.arm_radius > 0.0 ? o_.arm_radius : 2.0 * o_.return_radius;
    return o_.return_center && norm(s.vec() - o_.return_center->vec()) > arm;
  }

  DenseStepper make_stepper() const {
    return odeint::make_dense_output(o_.atol, o_.rtol, o_.max_step, Dopri());
  }

  double event_tol(const State& s) const { return o_.tol_event * velocity_scale(s, p_); }

  /// Slip phase on one side. direction = -1 integrates backward in time.
  SegmentRun slip(const State& start, int side, double t0, double t_end, int direction) {
    SegmentRun run;
    State s = start;
    if (side * eval_h(s, p_) <= event_tol(s)) s = push_off_surface(s, side, event_tol(s), p_);
    run.samples.push_back({t0, s, kNaN});
    if (t_end * direction <= t0 * direction) {
      run.event = make_event(EventTag::TimeLimit, t0, s);
      return run;
    }
    auto rhs = [&](const Vec3& x, Vec3& dxdt, double) {
      const State st = State::from(x);
      const ForceMoment fm = slip_force_moment(side, eval_h(st, p_), eval_g(st, p_), p_);
      dxdt = field_with_friction(st, fm.force, fm.moment, p_);
      if (direction < 0) dxdt = -1.0 * dxdt;
    };
    std::vector<Monitor> monitors{{[&](const Vec3& x) { return side * eval_h(State::from(x), p_); }, 0}};
    if (o_.return_center) {
      monitors.push_back({[&](const Vec3& x) {
                            return ball_armed ? norm(x - o_.return_center->vec()) - o_.return_radius : 1.0;
                          },
                          1});
    }
    // Integration variable tau runs forward; physical time is t0 + direction * tau.
    const double span = std::abs(t_end - t0);
    DenseStepper stepper = make_stepper();
    stepper.initialize(s.vec(), 0.0, std::min(o_.initial_step, o_.max_step));
    Vec3 xa = s.vec();
    double ta = 0.0;
    for (;;) {
      std::pair<double, double> step;
      try {
        step = stepper.do_step(rhs);
      } catch (const std::exception& e) {
        run.event = make_event(EventTag::Blowup, t0 + direction * ta, State::from(xa), e.what());
        return run;
      }
      const double tb = std::min(step.second, span);
      Vec3 xb;
      stepper.calc_state(tb, xb);
      if (out_of_bounds(xb, o_)) {
        run.event = make_event(EventTag::Blowup, t0 + direction * ta, State::from(xa), "state left bounds");
        return run;
      }
      if (auto c = scan_step(stepper, ta, xa, tb, monitors)) {
        const double t = t0 + direction * c->t;
        State hit = State::from(c->x);
        if (c->id == 0) {
          hit = project_to_surface(hit, p_);
          run.samples.push_back({t, hit, kNaN});
          run.event = make_event(EventTag::SurfaceHit, t, hit);
        } else {
          run.samples.push_back({t, hit, kNaN});
          run.event = make_event(EventTag::ReturnBall, t, hit);
        }
        run.resume = hit;
        return run;
      }
      if (!ball_armed && beyond_arm(State::from(xb))) ball_armed = true;
      run.samples.push_back({t0 + direction * tb, State::from(xb), kNaN});
      if (tb >= span) {
        run.event = make_event(EventTag::TimeLimit, t0 + direction * tb, State::from(xb));
        run.resume = State::from(xb);
        return run;
      }
      ta = tb;
      xa = xb;
    }
  }

  /// Stick phase from a surface point; escaping = true integrates the
  /// (repelling) escaping region.
  SegmentRun stick(const State& start, double t0, bool escaping) {
    SegmentRun run;
    State s = project_to_surface(start, p_);
    double t = t0;
    double max_lie0 = 0.0;
    double max_lie_lambda = 0.0;
    const double orient = escaping ? -1.0 : 1.0;
    double kappa_eff = kappa_for(s, p_);

    for (;;) {
      const SurfaceSplit sp0 = split_with(s, p_, kappa_eff);
      max_lie0 = std::max(max_lie0, std::abs(sp0.lie0));
      max_lie_lambda = std::max(max_lie_lambda, std::abs(sp0.lie_lambda));
      run.samples.push_back({t, s, -sp0.lie0 / sp0.lie_lambda});
      if (t >= o_.t_max) {
        run.event = make_event(EventTag::TimeLimit, t, s);
        return run;
      }
      if (!(orient * sp0.lie_plus < 0.0 && orient * sp0.lie_minus > 0.0)) {
        // Not (or no longer) inside the stick region after a moment-arm switch.
        return exit_at(run, t, s, sp0);
      }

      auto split_at = [&](const Vec3& x) { return f_and_f_lambda(State::from(x), p_, kappa_eff); };
      auto lies = [&](const Vec3& x) {
        const LinearSplit ls = split_at(x);
        const Vec3 grad = h_gradient(State::from(x), p_);
        return std::pair{dot(grad, ls.f0), dot(grad, ls.f_lambda)};
      };
      auto rhs = [&](const Vec3& x, Vec3& dxdt, double) {
        const LinearSplit ls = split_at(x);
        const Vec3 grad = h_gradient(State::from(x), p_);
        dxdt = ls.f0 - (dot(grad, ls.f0) / dot(grad, ls.f_lambda)) * ls.f_lambda;
      };
      const double lambda_sign = sp0.lie_lambda < 0.0 ? -1.0 : 1.0;
      const double g_sign = kappa_eff < 0.0 ? -1.0 : 1.0;
      std::vector<Monitor> monitors{
          {[&](const Vec3& x) { auto [l0, ll] = lies(x); return -orient * (l0 + p_.mu * ll); }, 0},
          {[&](const Vec3& x) { auto [l0, ll] = lies(x); return orient * (l0 - p_.mu * ll); }, 1},
          {[&](const Vec3& x) { return lambda_sign * lies(x).second; }, 2},
          {[&](const Vec3& x) { return g_sign * eval_g(State::from(x), p_); }, 3},
      };
      if (o_.return_center) {
        monitors.push_back({[&](const Vec3& x) {
                              return ball_armed ? norm(x - o_.return_center->vec()) - o_.return_radius : 1.0;
                            },
                            4});
      }

      DenseStepper stepper = make_stepper();
      stepper.initialize(s.vec(), t, std::min(o_.initial_step, o_.max_step));
      bool restart = false;
      while (!restart) {
        const Vec3 xa = stepper.current_state();
        const double ta = stepper.current_time();
        std::pair<double, double> step;
        try {
          step = stepper.do_step(rhs);
        } catch (const std::exception& e) {
          run.event = make_event(EventTag::Blowup, ta, State::from(xa), e.what());
          return run;
        }
        const double tb = std::min(step.second, o_.t_max);
        Vec3 xb;
        stepper.calc_state(tb, xb);
        if (out_of_bounds(xb, o_)) {
          run.event = make_event(EventTag::Blowup, ta, State::from(xa), "state left bounds");
          return run;
        }
        if (auto c = scan_step(stepper, ta, xa, tb, monitors)) {
          State at = project_to_surface(State::from(c->x), p_);
          const SurfaceSplit sp = split_with(at, p_, kappa_eff);
          switch (c->id) {
            case 0:
            case 1:
              run.samples.push_back({c->t, at, -sp.lie0 / sp.lie_lambda});
              return exit_at(run, c->t, at, sp);
            case 2:
              run.samples.push_back({c->t, at, kNaN});
              run.event = make_event(EventTag::SingularityHit, c->t, at, "tangency denominator vanished");
              return run;
            case 3:
              if (full_stick_reaction(at, p_).admissible) {
                run.samples.push_back({c->t, at, -sp.lie0 / sp.lie_lambda});
                run.event = make_event(EventTag::FullStick, c->t, at, "static friction holds at h = g = 0");
                return run;
              }
              // Moment arm changes sign with g; restart the sub-run there.
              t = c->t;
              s = at;
              kappa_eff = -kappa_eff;
              restart = true;
              continue;
            default:
              run.samples.push_back({c->t, at, -sp.lie0 / sp.lie_lambda});
              run.event = make_event(EventTag::ReturnBall, c->t, at);
              return run;
          }
        }
        const State sb = project_to_surface(State::from(xb), p_);
        if (!ball_armed && beyond_arm(sb)) ball_armed = true;
        const SurfaceSplit spb = split_with(sb, p_, kappa_eff);
        max_lie0 = std::max(max_lie0, std::abs(spb.lie0));
        max_lie_lambda = std::max(max_lie_lambda, std::abs(spb.lie_lambda));
        if (std::abs(spb.lie0) < o_.tol_sing * max_lie0 && std::abs(spb.lie_lambda) < o_.tol_sing * max_lie_lambda) {
          run.samples.push_back({tb, sb, kNaN});
          run.event = make_event(EventTag::SingularityHit, tb, sb, "both Lie derivatives below threshold");
          return run;
        }
        run.samples.push_back({tb, sb, -spb.lie0 / spb.lie_lambda});
        if (tb >= o_.t_max) {
          run.event = make_event(EventTag::TimeLimit, tb, sb);
          return run;
        }
        stepper.initialize(sb.vec(), tb, stepper.current_time_step());
      }
    }
  }

  /// Sliding exit: pick the side whose one-sided flow no longer attracts.
  SegmentRun& exit_at(SegmentRun& run, double t, const State& s, const SurfaceSplit& sp) {
    const double lambda = -sp.lie0 / sp.lie_lambda;
    const int bound = lambda >= 0.0 ? 1 : -1;
    // Strictly repelling side first, otherwise the tangent side.
    int side;
    if (sp.lie_plus > 0.0 && !(sp.lie_minus < 0.0)) {
      side = 1;
    } else if (sp.lie_minus < 0.0 && !(sp.lie_plus > 0.0)) {
      side = -1;
    } else {
      side = std::abs(sp.lie_plus) <= std::abs(sp.lie_minus) ? 1 : -1;
    }
    run.event = make_event(EventTag::SlidingExit, t, s);
    run.event.exit_side = bound;
    run.event.region = RegionTag::Sliding;

    // Second-order check of the departing flow: h must grow like side * q t^2.
    const double lambda_side = side * p_.mu;
    const LinearSplit& ls = sp.split;
    const Vec3 f_side = ls.f0 + lambda_side * ls.f_lambda;
    const Vec3 grad_lie = mat_vec(h_hessian(p_), f_side) + mat_tvec(field_jacobian(s, lambda_side, p_), h_gradient(s, p_));
    const double q = dot(grad_lie, f_side);
    if (std::abs(q) <= 1e-14 * (1.0 + norm(grad_lie) * norm(f_side)) &&
        std::abs(side > 0 ? sp.lie_plus : sp.lie_minus) <= 1e-14 * (1.0 + sp.scale0)) {
      run.event.tag = EventTag::Diagnostic;
      run.event.detail = "degenerate grazing exit";
      return run;
    }
    run.resume = s;
    run.next_side = side;
    return run;
  }

  /// Decides what happens after a slip segment reaches the surface from `side`.
  void resolve_hit(SegmentRun& run, int side) {
    const State& s = run.resume;
    const SurfaceSplit sp = surface_split(s, p_);
    const RegionClass rc = classify_split(sp);
    run.event.region = rc.tag;
    if (rc.tag == RegionTag::TwoFoldCandidate) {
      run.event.tag = EventTag::SingularityHit;
      run.event.detail = "surface hit at a two-fold point";
      return;
    }
    // Slip drives h and g to zero together; there the contact may lock.
    if (std::abs(eval_g(s, p_)) <= o_.tol_full_stick * velocity_scale(s, p_) &&
        full_stick_reaction(s, p_).admissible) {
      run.event.tag = EventTag::FullStick;
      run.event.detail = "static friction holds at h = g = 0";
      return;
    }
    const double a_side = side > 0 ? sp.lie_plus : sp.lie_minus;
    const double a_other = side > 0 ? sp.lie_minus : sp.lie_plus;
    const bool arriving = -side * a_side > 0.0;
    const bool other_attracts = side * a_other > 0.0;
    if (arriving && other_attracts) {
      run.next_stick = true;
    } else if (arriving) {
      run.next_side = -side;
      run.event.detail = "crossing";
    } else if (other_attracts) {
      run.next_side = side;
      run.event.detail = "grazing";
    } else if (o_.allow_escaping_stick) {
      run.next_stick = true;
      run.event.detail = "escaping stick";
    } else {
      run.next_side = side;
      run.event.detail = "grazing at escaping region";
    }
  }

  static RegionClass classify_split(const SurfaceSplit& sp, double tol_sing = 1e-7) {
    RegionClass rc;
    rc.lie_plus = sp.lie_plus;
    rc.lie_minus = sp.lie_minus;
    if (std::abs(sp.lie0) <= tol_sing * sp.scale0 && std::abs(sp.lie_lambda) <= tol_sing * sp.scale_lambda) {
      rc.tag = RegionTag::TwoFoldCandidate;
      return rc;
    }
    if (sp.lie_lambda != 0.0) rc.lambda_star = -sp.lie0 / sp.lie_lambda;
    if (sp.lie_plus < 0.0 && sp.lie_minus > 0.0) {
      rc.tag = RegionTag::Sliding;
    } else if (sp.lie_plus > 0.0 && sp.lie_minus < 0.0) {
      rc.tag = RegionTag::Escaping;
    } else {
      rc.tag = RegionTag::Crossing;
    }
    return rc;
  }

  Trajectory run(const State& s0, const ContactMode& mode0) {
    Trajectory traj;
    ball_armed = beyond_arm(s0);
    State s = s0;
    double t = 0.0;
    bool stick = mode0.tag == ContactTag::Stick;
    bool escaping_stick = false;
    int side = mode0.side();

    if (stick) {
      const RegionClass rc = classify(s0, p_, 1e-8, o_.tol_sing);
      if (rc.tag == RegionTag::TwoFoldCandidate) {
        TrajectorySegment seg{mode0, {{0.0, s0, kNaN}}, make_event(EventTag::SingularityHit, 0.0, s0)};
        traj.segments.push_back(std::move(seg));
        return traj;
      }
      if (rc.tag == RegionTag::Escaping) {
        if (!o_.allow_escaping_stick) throw std::invalid_argument("stick start in the escaping region");
        escaping_stick = true;
      } else if (rc.tag == RegionTag::Crossing) {
        stick = false;
        side = rc.lie_plus > 0.0 ? 1 : -1;
      }
    }

    for (std::size_t n = 0;; ++n) {
      if (n >= o_.max_events) {
        TrajectorySegment seg{stick ? ContactMode::stick(0.0) : ContactMode::slip(side), {{t, s, kNaN}},
                              make_event(EventTag::Diagnostic, t, s, "event budget exhausted")};
        traj.segments.push_back(std::move(seg));
        return traj;
      }
      SegmentRun r;
      ContactMode mode;
      if (stick) {
        r = this->stick(s, t, escaping_stick);
        mode = ContactMode::stick(r.samples.empty() ? 0.0 : r.samples.front().lambda);
        if (escaping_stick) r.event.detail += r.event.detail.empty() ? "escaping region" : " (escaping region)";
      } else {
        r = slip(s, side, t, o_.t_max, 1);
        mode = ContactMode::slip(side);
        if (r.event.tag == EventTag::SurfaceHit) resolve_hit(r, side);
      }
      const Event ev = r.event;
      traj.segments.push_back({mode, std::move(r.samples), ev});
      switch (ev.tag) {
        case EventTag::SurfaceHit:
          s = r.resume;
          t = ev.time;
          if (r.next_stick) {
            stick = true;
            escaping_stick = ev.detail == "escaping stick";
          } else {
            stick = false;
            side = r.next_side;
          }
          break;
        case EventTag::SlidingExit:
          s = r.resume;
          t = ev.time;
          stick = false;
          escaping_stick = false;
          side = r.next_side;
          break;
        default:
          return traj;
      }
    }
  }

 private:
  const SystemParams& p_;
  const IntegratorOptions& o_;
};

}  // namespace

const char* to_string(RegionTag t) {
  switch (t) {
    case RegionTag::Crossing: return "crossing";
    case RegionTag::Sliding: return "sliding";
    case RegionTag::Escaping: return "escaping";
    case RegionTag::TwoFoldCandidate: return "two_fold_candidate";
  }
  return "?";
}

const char* to_string(EventTag t) {
  switch (t) {
    case EventTag::SurfaceHit: return "SurfaceHit";
    case EventTag::SlidingExit: return "SlidingExit";
    case EventTag::SingularityHit: return "SingularityHit";
    case EventTag::TimeLimit: return "TimeLimit";
    case EventTag::Blowup: return "Blowup";
    case EventTag::ReturnBall: return "ReturnBall";
    case EventTag::FullStick: return "FullStick";
    case EventTag::Diagnostic: return "Diagnostic";
  }
  return "?";
}

FullStickReaction full_stick_reaction(const State& s, const SystemParams& p) {
  // v and omega rows of f0 + F (0, p2, r cos) + M (0, d, 1) = 0.
  const Vec3 f0 = field_with_friction(s, 0.0, 0.0, p);
  const double a11 = eval_p2(s.r, p), a12 = p.d;
  const double a21 = s.r * std::cos(p.gamma), a22 = 1.0;
  const double det = a11 * a22 - a12 * a21;
  FullStickReaction out;
  if (det == 0.0) return out;
  out.force = (-f0[1] * a22 + f0[2] * a12) / det;
  out.moment = (-f0[2] * a11 + f0[1] * a21) / det;
  out.admissible = std::abs(out.force) <= p.mu && std::abs(out.moment) <= p.mu * std::abs(p.kappa);
  return out;
}

double velocity_scale(const State& s, const SystemParams& p) {
  const double dw = std::abs(s.omega - p.omega0);
  return std::max(1.0, std::abs(s.v) + std::abs(p.d) * dw + std::abs(s.r) * dw);
}

State project_to_surface(const State& s, const SystemParams& p) {
  Vec3 x = s.vec();
  for (int i = 0; i < 3; ++i) {
    const State st = State::from(x);
    const double h = eval_h(st, p);
    if (h == 0.0) break;
    const Vec3 grad = h_gradient(st, p);
    x = x - (h / dot(grad, grad)) * grad;
  }
  return State::from(x);
}

SurfaceSplit surface_split(const State& s, const SystemParams& p) { return split_with(s, p, kappa_for(s, p)); }

RegionClass classify(const State& s, const SystemParams& p, double tol_surface, double tol_sing) {
  if (!(std::abs(eval_h(s, p)) <= tol_surface * velocity_scale(s, p)))
    throw std::invalid_argument("classify: state is not on the switching surface");
  return Integrator::classify_split(surface_split(s, p), tol_sing);
}

SingularityHitError::SingularityHitError(const State& s)
    : std::runtime_error("sliding field requested at a two-fold singularity"), state(s) {}

double tangency_lambda(const State& s, const SystemParams& p) {
  const SurfaceSplit sp = surface_split(s, p);
  return -sp.lie0 / sp.lie_lambda;
}

Vec3 sliding_field(const State& s, const SystemParams& p, double tol_sing) {
  const SurfaceSplit sp = surface_split(s, p);
  const RegionClass rc = Integrator::classify_split(sp, tol_sing);
  if (rc.tag == RegionTag::TwoFoldCandidate) throw SingularityHitError(s);
  if (rc.tag == RegionTag::Crossing) throw std::invalid_argument("sliding field requested in the crossing region");
  return sp.split.f0 - (sp.lie0 / sp.lie_lambda) * sp.split.f_lambda;
}

std::vector<Event> Trajectory::events() const {
  std::vector<Event> out;
  out.reserve(segments.size());
  for (const auto& seg : segments) out.push_back(seg.terminal);
  return out;
}

Trajectory integrate(const State& s0, const ContactMode& mode0, const SystemParams& p, const IntegratorOptions& opts) {
  if (!s0.finite()) {
    Trajectory traj;
    traj.segments.push_back({mode0, {{0.0, s0, kNaN}}, make_event(EventTag::Blowup, 0.0, s0, "non-finite initial state")});
    return traj;
  }
  Integrator integrator(p, opts);
  return integrator.run(s0, mode0);
}

SlipRun integrate_slip(const State& s0, int side, double t0, double duration, const SystemParams& p,
                       const IntegratorOptions& opts) {
  Integrator integrator(p, opts);
  const int direction = duration < 0.0 ? -1 : 1;
  SegmentRun r = integrator.slip(s0, side, t0, t0 + duration, direction);
  SlipRun out;
  out.samples = std::move(r.samples);
  out.hit = r.event.tag == EventTag::SurfaceHit;
  out.end = r.event.state;
  out.t_end = r.event.time;
  return out;
}

}  // namespace turntable
