// Two-fold singularities of the turntable: designing parameters that place
// one at a chosen point, locating them for given parameters, and the local
// normal form of the sliding flow around them.
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "turntable/model.hpp"

namespace turntable {

struct DesignResult {
  State x_star;
  double v_star = 0.0;
  double kappa = 0.0;
  double k2 = 0.0;
  SystemParams params;  // partial parameters completed with kappa and k2
  /// h, h_x.f(x*, +mu), h_x.f(x*, -mu) at the designed point.
  std::array<double, 3> residuals{};
};

/// Raised when a closed-form denominator of the designer vanishes.
class DesignError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Chooses v*, kappa and k2 so that (r*, v*, omega*) is a two-fold point.
/// kappa and k2 of `partial` are ignored. Throws DesignError for vanishing
/// denominators and std::runtime_error if the residual check fails.
DesignResult design_singularity(double r_star, double omega_star, const SystemParams& partial,
                                double residual_tol = 1e-9);

struct SearchGrid {
  double r_min = -1.0;
  double r_max = 1.0;
  int n_r = 41;
  double omega_min = -3.0;
  double omega_max = 1.0;
  int n_omega = 41;
};

/// All two-fold points seeded from the grid, sorted by (r, omega). More than
/// four roots is reported through `warning` but not treated as an error.
std::vector<State> find_singularities(const SystemParams& p, const SearchGrid& grid = {},
                                      std::string* warning = nullptr);

struct KappaConstants {
  double kpp = 0.0;
  double kpm = 0.0;
  double kmp = 0.0;
  double kmm = 0.0;
};

/// Gradient of h_x . f(x, lambda).
Vec3 lie_gradient(const State& s, double lambda, const SystemParams& p);

/// K^{sr} = grad(h_x . f(x, s mu)) . f(x, r mu), evaluated analytically.
KappaConstants kappa_constants(const State& x_star, const SystemParams& p);

/// General bilinear form grad(h_x . f(x, a)) . f(x, b).
double kappa_form(const State& x, double a, double b, const SystemParams& p);

enum class SingularityCase { Case1, Case2, Case3, Degenerate, NotTeixeira };
const char* to_string(SingularityCase c);

struct SingularityReport {
  State x_star;
  KappaConstants k;
  double j1 = 0.0;
  double j2 = 0.0;
  double eig1 = 0.0;  // larger eigenvalue
  double eig2 = 0.0;
  std::array<double, 2> evec1{};
  std::array<double, 2> evec2{};
  SingularityCase case_tag = SingularityCase::NotTeixeira;
};

/// Case from the invariants alone (assumes the Teixeira condition holds).
SingularityCase classify_invariants(double j1, double j2);

/// Eigenvalues (larger first) of [[j1, 1], [1, j2]].
std::pair<double, double> normal_form_eigenvalues(double j1, double j2);

SingularityReport normal_form(const State& x_star, const SystemParams& p);

/// Local sliding flow (j1 xi + eta, xi + j2 eta) / (xi + eta).
std::array<double, 2> normal_form_flow(double xi, double eta, double j1, double j2);

}  // namespace turntable
