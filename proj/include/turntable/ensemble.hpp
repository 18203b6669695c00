// Re-injection ensembles: members start on the escaping patch next to a
// two-fold point and are followed until they come back to it.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "turntable/filippov.hpp"

namespace turntable {

struct EnsembleConfig {
  std::size_t n = 32;
  double eps = 0.01;
  std::uint64_t seed = 1;
  double t_max = 400.0;
  double return_radius = 0.005;
  /// Options for each member; t_max and the return ball are overwritten.
  IntegratorOptions integrator;

  void validate() const;
};

/// Draws a candidate point of the switching surface near x_star, or nothing
/// when the draw is rejected.
using SurfaceSampler =
    std::function<std::optional<State>(std::mt19937_64& rng, const State& x_star, const SystemParams& p, double eps)>;

/// Area-uniform samples of the surface inside the eps-ball (v solved from h = 0).
std::optional<State> uniform_surface_sample(std::mt19937_64& rng, const State& x_star, const SystemParams& p,
                                            double eps);

class InjectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Injection {
  State on_surface;  // escaping point of the surface
  State state;       // kicked off the surface
  int side = 0;      // sign of h after the kick
};

/// Per-member random stream derived from (seed, member_id).
std::mt19937_64 member_rng(std::uint64_t seed, std::uint64_t member_id);

Injection inject_one(const State& x_star, const SystemParams& p, const EnsembleConfig& cfg, std::uint64_t member_id,
                     const SurfaceSampler& sampler = uniform_surface_sample);

std::vector<Injection> inject(const State& x_star, const SystemParams& p, const EnsembleConfig& cfg,
                              const SurfaceSampler& sampler = uniform_surface_sample);

struct EnsembleOutcome {
  std::size_t member_id = 0;
  Injection injected;
  Trajectory trajectory;
  std::vector<Event> events;
  bool returned = false;
  std::optional<double> return_time;
  bool singularity_return = false;
  std::size_t n_crossings = 0;
  std::size_t n_stick_segments = 0;
  std::string error;  // non-empty when the member failed
};

EnsembleOutcome run_member(const State& x_star, const SystemParams& p, const EnsembleConfig& cfg,
                           std::size_t member_id, const SurfaceSampler& sampler = uniform_surface_sample);

std::vector<EnsembleOutcome> run_ensemble(const State& x_star, const SystemParams& p, const EnsembleConfig& cfg,
                                          const SurfaceSampler& sampler = uniform_surface_sample);

/// Slip first, at least one stick phase, no escaping stick, and a return
/// (singularity or ball) as the final event.
bool matches_cycle_grammar(const Trajectory& traj);

}  // namespace turntable
