#include "turntable/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace turntable {

void EnsembleConfig::validate() const {
  if (n < 1) throw std::invalid_argument("ensemble: n must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("ensemble: eps must be > 0");
  if (!(return_radius > 0.0)) throw std::invalid_argument("ensemble: return_radius must be > 0");
  if (!(t_max >= 0.0)) throw std::invalid_argument("ensemble: t_max must be >= 0");
}

std::optional<State> uniform_surface_sample(std::mt19937_64& rng, const State& x_star, const SystemParams& p,
                                            double eps) {
  const double sg = std::sin(p.gamma);
  if (std::abs(sg) < 1e-12) throw InjectionError("surface sampling needs sin(gamma) != 0");
  const double cot = std::cos(p.gamma) / sg;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> accept(0.0, 1.0);
  const double dr = eps * unit(rng);
  const double dw = eps * unit(rng);
  const double u = accept(rng);
  if (dr * dr + dw * dw > eps * eps) return std::nullopt;

  // Surface graph v = V(r, omega); weight by its area element.
  auto weight = [&](double r, double w) {
    const double vr = -(w - p.omega0) * cot;
    const double vw = p.d - r * cot;
    return std::sqrt(1.0 + vr * vr + vw * vw);
  };
  double w_max = 0.0;
  for (double sr : {-1.0, 1.0})
    for (double sw : {-1.0, 1.0}) w_max = std::max(w_max, weight(x_star.r + sr * eps, x_star.omega + sw * eps));
  const double r = x_star.r + dr;
  const double w = x_star.omega + dw;
  if (u * w_max > weight(r, w)) return std::nullopt;
  const State s{r, (w - p.omega0) * (p.d - r * cot), w};
  if (norm(s.vec() - x_star.vec()) > eps) return std::nullopt;
  return s;
}

std::mt19937_64 member_rng(std::uint64_t seed, std::uint64_t member_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(member_id), static_cast<std::uint32_t>(member_id >> 32)};
  return std::mt19937_64(seq);
}

namespace {

Injection draw(std::mt19937_64& rng, const State& x_star, const SystemParams& p, const EnsembleConfig& cfg,
               const SurfaceSampler& sampler) {
  constexpr int kMaxRejections = 10000;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const std::optional<State> cand = sampler(rng, x_star, p, cfg.eps);
    if (!cand) continue;
    const State s = project_to_surface(*cand, p);
    if (norm(s.vec() - x_star.vec()) > cfg.eps) continue;
    if (classify(s, p).tag != RegionTag::Escaping) continue;
    Injection inj;
    inj.on_surface = s;
    inj.side = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
    const Vec3 grad = h_gradient(s, p);
    inj.state = State::from(s.vec() + (inj.side * cfg.eps / 100.0 / norm(grad)) * grad);
    return inj;
  }
  throw InjectionError(
      fmt::format("no escaping surface point found within eps = {} after {} draws", cfg.eps, kMaxRejections));
}

}  // namespace

Injection inject_one(const State& x_star, const SystemParams& p, const EnsembleConfig& cfg, std::uint64_t member_id,
                     const SurfaceSampler& sampler) {
  std::mt19937_64 rng = member_rng(cfg.seed, member_id);
  return draw(rng, x_star, p, cfg, sampler);
}

std::vector<Injection> inject(const State& x_star, const SystemParams& p, const EnsembleConfig& cfg,
                              const SurfaceSampler& sampler) {
  cfg.validate();
  std::vector<Injection> out;
  out.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) out.push_back(inject_one(x_star, p, cfg, i, sampler));
  return out;
}

bool matches_cycle_grammar(const Trajectory& traj) {
  if (traj.segments.empty() || traj.segments.front().mode.tag == ContactTag::Stick) return false;
  std::size_t sticks = 0;
  for (const auto& seg : traj.segments) {
    if (seg.mode.tag != ContactTag::Stick) continue;
    if (seg.terminal.detail.find("escaping") != std::string::npos) return false;
    ++sticks;
  }
  const EventTag last = traj.last_event().tag;
  return sticks > 0 && (last == EventTag::SingularityHit || last == EventTag::ReturnBall);
}

EnsembleOutcome run_member(const State& x_star, const SystemParams& p, const EnsembleConfig& cfg,
                           std::size_t member_id, const SurfaceSampler& sampler) {
  EnsembleOutcome out;
  out.member_id = member_id;
  out.injected = inject_one(x_star, p, cfg, member_id, sampler);
  IntegratorOptions opts = cfg.integrator;
  opts.t_max = cfg.t_max;
  opts.return_center = x_star;
  opts.return_radius = cfg.return_radius;
  // Injected states lie within eps; arm only once the member is clear of that.
  opts.arm_radius = std::max(2.0 * cfg.return_radius, cfg.eps + cfg.return_radius);
  try {
    out.trajectory = integrate(out.injected.state, ContactMode::slip(out.injected.side), p, opts);
  } catch (const std::exception& e) {
    out.error = e.what();
    return out;
  }
  out.events = out.trajectory.events();
  for (const auto& seg : out.trajectory.segments) {
    if (seg.mode.tag == ContactTag::Stick) ++out.n_stick_segments;
    if (seg.terminal.tag == EventTag::SurfaceHit && seg.terminal.detail == "crossing") ++out.n_crossings;
  }
  const Event& last = out.trajectory.last_event();
  if (last.tag == EventTag::SingularityHit || last.tag == EventTag::ReturnBall) {
    out.returned = true;
    out.return_time = last.time;
    out.singularity_return = last.tag == EventTag::SingularityHit;
  }
  return out;
}

std::vector<EnsembleOutcome> run_ensemble(const State& x_star, const SystemParams& p, const EnsembleConfig& cfg,
                                          const SurfaceSampler& sampler) {
  cfg.validate();
  std::vector<EnsembleOutcome> out;
  out.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) out.push_back(run_member(x_star, p, cfg, i, sampler));
  return out;
}

}  // namespace turntable
