#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "turntable/model.hpp"
#include "turntable/singularity.hpp"

using namespace turntable;
using std::numbers::pi;

namespace {

double rel_err(const Vec3& a, const Vec3& b) {
  return norm(a - b) / std::max(1.0, norm(b));
}

SystemParams designed() { return design_singularity(0.1859, -1.037, SystemParams::reference_partial()).params; }

}  // namespace

TEST_CASE("h and g special forms") {
  SystemParams p = SystemParams::reference_partial();
  const State s{0.3, -0.2, 0.7};
  p.gamma = 0.0;
  CHECK(eval_h(s, p) == doctest::Approx(s.r * (p.omega0 - s.omega)).epsilon(1e-15));
  CHECK(eval_g(s, p) == doctest::Approx(-(s.v - p.d * (s.omega - p.omega0))).epsilon(1e-15));
  p.gamma = pi / 2;
  CHECK(eval_h(s, p) == doctest::Approx(p.d * (s.omega - p.omega0) - s.v).epsilon(1e-14));
  for (double g : {-2.0, 0.3, 3.0}) {
    p.gamma = g;
    CHECK(eval_h({0.4, 0.0, p.omega0}, p) == 0.0);
    CHECK(eval_g({0.4, 0.0, p.omega0}, p) == 0.0);
  }
}

TEST_CASE("g and p2 at the designed point match direct substitution") {
  const SystemParams p = designed();
  const State s{0.1859, -0.030122, -1.037};
  CHECK(eval_g(s, p) == doctest::Approx(oracle::g_of(s, p)).epsilon(1e-14));
  const double b2 = p.beta * p.beta;
  CHECK(eval_p2(0.1859, p) ==
        doctest::Approx(p.d * 0.1859 * std::cos(p.gamma) + (b2 + 0.1859 * 0.1859) * std::sin(p.gamma)).epsilon(1e-14));
  CHECK(eval_p2(0.0, p) == doctest::Approx(b2 * std::sin(p.gamma)).epsilon(1e-15));
  SystemParams q = p;
  CHECK(eval_p1({q.r0, 0.0, 0.0}, q) == 0.0);
}

TEST_CASE("h and g are affine in (v, omega) at fixed r") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const SystemParams p = oracle::random_params(rng);
    const State a = oracle::random_state(rng), b = oracle::random_state(rng);
    const double r = a.r;
    const State sa{r, a.v, a.omega}, sb{r, b.v, b.omega}, mid{r, 0.3 * a.v + 0.7 * b.v, 0.3 * a.omega + 0.7 * b.omega};
    CHECK(eval_h(mid, p) == doctest::Approx(0.3 * eval_h(sa, p) + 0.7 * eval_h(sb, p)).epsilon(1e-12).scale(1.0));
    CHECK(eval_g(mid, p) == doctest::Approx(0.3 * eval_g(sa, p) + 0.7 * eval_g(sb, p)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("stick field is linear in lambda") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const SystemParams p = oracle::random_params(rng);
    const State s = oracle::random_state(rng);
    const LinearSplit ls = f_and_f_lambda(s, p);
    CHECK(ls.f_lambda[0] == 0.0);
    CHECK(ls.f_lambda[1] == doctest::Approx(eval_p2(s.r, p) + p.d * p.kappa).epsilon(1e-14));
    CHECK(ls.f_lambda[2] == doctest::Approx(s.r * std::cos(p.gamma) + p.kappa).epsilon(1e-14));
    for (double lam : {-p.mu, -0.3 * p.mu, 0.0, 0.8 * p.mu, p.mu}) {
      const Vec3 f = vector_field(s, ContactMode::stick(lam), p);
      CHECK(rel_err(f, ls.f0 + lam * ls.f_lambda) < 1e-13);
    }
    const Vec3 diff = vector_field(s, ContactMode::stick(p.mu), p) - vector_field(s, ContactMode::stick(-p.mu), p);
    CHECK(rel_err(diff, 2.0 * p.mu * ls.f_lambda) < 1e-13);
    CHECK(rel_err(vector_field(s, ContactMode::stick(0.0), p), field_with_friction(s, 0.0, 0.0, p)) == 0.0);
  }
}

TEST_CASE("v = 0 gives r' = 0 in every mode") {
  const SystemParams p = designed();
  const State s{0.2, 0.0, -0.8};
  CHECK(vector_field(s, ContactMode::slip(1), p)[0] == 0.0);
  CHECK(vector_field(s, ContactMode::slip(-1), p)[0] == 0.0);
  CHECK(vector_field(s, ContactMode::stick(0.5), p)[0] == 0.0);
}

TEST_CASE("stick with |lambda| > mu is rejected") {
  const SystemParams p = designed();
  CHECK_THROWS_AS(vector_field({0.2, 0.0, -0.8}, ContactMode::stick(1.5 * p.mu), p), std::invalid_argument);
}

TEST_CASE("gamma = 0 and r = -kappa removes the lambda terms") {
  SystemParams p = designed();
  p.gamma = 0.0;
  const LinearSplit ls = f_and_f_lambda({-p.kappa, 0.1, 0.3}, p);
  CHECK(std::abs(ls.f_lambda[1]) < 1e-15);
  CHECK(std::abs(ls.f_lambda[2]) < 1e-15);
}

TEST_CASE("f0 and f_lambda are independent at the designed point") {
  const SystemParams p = designed();
  const DesignResult d = design_singularity(0.1859, -1.037, SystemParams::reference_partial());
  const LinearSplit ls = f_and_f_lambda(d.x_star, p);
  const Vec3 a = ls.f0, b = ls.f_lambda;
  const Vec3 cross{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  CHECK(norm(cross) > 1e-6 * norm(a) * norm(b));
}

TEST_CASE("reduced equations agree with the free-body balance") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> fm(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const SystemParams p = oracle::random_params(rng);
    const State s = oracle::random_state(rng);
    const double F = fm(rng), M = fm(rng);
    const Vec3 reduced = field_with_friction(s, F, M, p);
    const double scale = p.m * (p.beta * p.beta + s.r * s.r);
    const Vec3 physical = oracle::free_body_field(s, F, M, p);
    CHECK(rel_err((1.0 / scale) * reduced, physical) < 1e-10);
  }
}

TEST_CASE("analytic Jacobian and Hessian match finite differences") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const SystemParams p = oracle::random_params(rng);
    const State s = oracle::random_state(rng);
    const double lam = 0.4 * p.mu;
    const Mat3 J = field_jacobian(s, lam, p);
    for (int k = 0; k < 3; ++k) {
      Vec3 e{};
      e[k] = 1e-6;
      const Vec3 fp = vector_field(State::from(s.vec() + e), ContactMode::stick(lam), p);
      const Vec3 fm = vector_field(State::from(s.vec() - e), ContactMode::stick(lam), p);
      for (int row = 0; row < 3; ++row)
        CHECK(J[row][k] == doctest::Approx((fp[row] - fm[row]) / 2e-6).epsilon(1e-6).scale(1.0));
      const Vec3 gp = h_gradient(State::from(s.vec() + e), p), gm = h_gradient(State::from(s.vec() - e), p);
      const Mat3 H = h_hessian(p);
      for (int row = 0; row < 3; ++row)
        CHECK(H[row][k] == doctest::Approx((gp[row] - gm[row]) / 2e-6).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("physical time multiplies by the rescale factor") {
  const SystemParams p = designed();
  const State s{0.2, 0.0, -1.0};
  CHECK(physical_time_step(0.5, s, p) == doctest::Approx(0.5 * p.m * (p.beta * p.beta + 0.04)));
}

TEST_CASE("parameter validation names the field") {
  SystemParams p = SystemParams::reference_partial();
  p.kappa = 0.2;
  p.k2 = 1.0;
  CHECK_NOTHROW(p.validate());
  p.m = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("m"), std::invalid_argument);
  p = SystemParams::reference_partial();
  p.gamma = -pi;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
