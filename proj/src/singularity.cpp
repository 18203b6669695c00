#include "turntable/singularity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <optional>
#include <tuple>

namespace turntable {

namespace {

double lie(const State& s, double lambda, const SystemParams& p) {
  const LinearSplit ls = f_and_f_lambda(s, p);
  return dot(h_gradient(s, p), ls.f0 + lambda * ls.f_lambda);
}

// Residual (h, h_x.f0, h_x.f_lambda) and its Jacobian.
struct TwoFoldSystem {
  Eigen::Vector3d value;
  Eigen::Matrix3d jac;
};

TwoFoldSystem two_fold_system(const State& s, const SystemParams& p) {
  const LinearSplit ls = f_and_f_lambda(s, p);
  const Vec3 grad = h_gradient(s, p);
  const Mat3 hess = h_hessian(p);
  const Mat3 j0 = field_jacobian(s, 0.0, p);
  const Mat3 j1 = field_jacobian(s, 1.0, p);
  Mat3 jl{};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) jl[i][k] = j1[i][k] - j0[i][k];
  const Vec3 d0 = mat_vec(hess, ls.f0) + mat_tvec(j0, grad);
  const Vec3 dl = mat_vec(hess, ls.f_lambda) + mat_tvec(jl, grad);
  TwoFoldSystem sys;
  sys.value << eval_h(s, p), dot(grad, ls.f0), dot(grad, ls.f_lambda);
  for (int k = 0; k < 3; ++k) {
    sys.jac(0, k) = grad[k];
    sys.jac(1, k) = d0[k];
    sys.jac(2, k) = dl[k];
  }
  return sys;
}

std::optional<State> newton(State s, const SystemParams& p) {
  TwoFoldSystem sys = two_fold_system(s, p);
  double res = sys.value.norm();
  for (int it = 0; it < 60; ++it) {
    if (res <= 1e-12) {
      // Roots on a curve of solutions (singular Jacobian) are not isolated two-folds.
      const Eigen::JacobiSVD<Eigen::Matrix3d> svd(sys.jac);
      const auto sv = svd.singularValues();
      if (!(sv(2) > 1e-9 * std::max(1.0, sv(0)))) return std::nullopt;
      // Polish to roundoff; keep a step only while the residual shrinks.
      for (int polish = 0; polish < 3 && res > 0.0; ++polish) {
        const Eigen::Vector3d dx = sys.jac.fullPivLu().solve(-sys.value);
        const State trial{s.r + dx(0), s.v + dx(1), s.omega + dx(2)};
        const TwoFoldSystem ts = two_fold_system(trial, p);
        if (!(ts.value.norm() < res)) break;
        s = trial;
        sys = ts;
        res = ts.value.norm();
      }
      return s;
    }
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(sys.jac);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::Vector3d dx = lu.solve(-sys.value);
    if (!dx.allFinite()) return std::nullopt;
    double step = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt, step *= 0.5) {
      const State trial{s.r + step * dx(0), s.v + step * dx(1), s.omega + step * dx(2)};
      const TwoFoldSystem ts = two_fold_system(trial, p);
      const double tr = ts.value.norm();
      if (std::isfinite(tr) && tr < (1.0 - 1e-4 * step) * res) {
        s = trial;
        sys = ts;
        res = tr;
        accepted = true;
        break;
      }
    }
    if (!accepted) return res <= 1e-10 ? std::optional<State>(s) : std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

DesignResult design_singularity(double r_star, double omega_star, const SystemParams& partial, double residual_tol) {
  const double sg = std::sin(partial.gamma);
  const double cg = std::cos(partial.gamma);
  const double b2 = partial.beta * partial.beta;
  if (r_star == 0.0) throw DesignError("design_singularity: r* = 0 (kappa denominator 2 r* cos(gamma))");
  if (std::abs(cg) < 1e-14) throw DesignError("design_singularity: cos(gamma) = 0 (kappa denominator 2 r* cos(gamma))");
  if (std::abs(sg) < 1e-14) throw DesignError("design_singularity: sin(gamma) = 0 (v* contains cot(gamma))");
  const double p2 = eval_p2(r_star, partial);
  if (p2 == 0.0) throw DesignError("design_singularity: p2(r*) = 0 (k2 denominator)");
  if (r_star == partial.r0) throw DesignError("design_singularity: r* = r0 (k2 denominator)");

  const double w0 = partial.omega0;
  const double v = (omega_star - w0) * (partial.d - r_star * cg / sg);
  const double kappa = -(2.0 * r_star * r_star + b2 * (1.0 - std::cos(2.0 * partial.gamma))) / (2.0 * r_star * cg);
  const double m = partial.m;
  const double k2 =
      (sg * (b2 + r_star * r_star) * (m * r_star * omega_star * omega_star - partial.c2 * v) -
       cg * (partial.c1 * r_star * omega_star + partial.c2 * partial.d * r_star * v +
             m * (r_star * r_star * (v * (omega_star + w0) - partial.d * omega_star * omega_star) +
                  b2 * v * (w0 - omega_star)))) /
      ((r_star - partial.r0) * p2);

  DesignResult out;
  out.x_star = {r_star, v, omega_star};
  out.v_star = v;
  out.kappa = kappa;
  out.k2 = k2;
  out.params = partial;
  out.params.kappa = kappa;
  out.params.k2 = k2;
  out.residuals = {eval_h(out.x_star, out.params), lie(out.x_star, out.params.mu, out.params),
                   lie(out.x_star, -out.params.mu, out.params)};
  for (double r : out.residuals) {
    if (!(std::abs(r) <= residual_tol))
      throw std::runtime_error(fmt::format("design_singularity: residual {:.3e} exceeds {:.1e}", r, residual_tol));
  }
  return out;
}

std::vector<State> find_singularities(const SystemParams& p, const SearchGrid& grid, std::string* warning) {
  const double sg = std::sin(p.gamma);
  std::vector<State> roots;
  for (int i = 0; i < grid.n_r; ++i) {
    const double r = grid.n_r == 1 ? grid.r_min : grid.r_min + (grid.r_max - grid.r_min) * i / (grid.n_r - 1);
    for (int j = 0; j < grid.n_omega; ++j) {
      const double w = grid.n_omega == 1 ? grid.omega_min
                                         : grid.omega_min + (grid.omega_max - grid.omega_min) * j / (grid.n_omega - 1);
      const double dw = w - p.omega0;
      // v from h = 0 where that is solvable for v.
      const double v = std::abs(sg) > 1e-8 ? dw * (p.d - r * std::cos(p.gamma) / sg) : 0.0;
      if (auto root = newton({r, v, w}, p)) roots.push_back(*root);
    }
  }
  std::sort(roots.begin(), roots.end(), [](const State& a, const State& b) {
    return a.r != b.r ? a.r < b.r : (a.omega != b.omega ? a.omega < b.omega : a.v < b.v);
  });
  std::vector<State> unique;
  for (const State& s : roots) {
    const bool dup = std::any_of(unique.begin(), unique.end(),
                                 [&](const State& u) { return norm(u.vec() - s.vec()) <= 1e-8; });
    if (!dup) unique.push_back(s);
  }
  if (warning) {
    warning->clear();
    if (unique.size() > 4) *warning = fmt::format("found {} two-fold points, expected at most 4", unique.size());
  }
  return unique;
}

Vec3 lie_gradient(const State& s, double lambda, const SystemParams& p) {
  const LinearSplit ls = f_and_f_lambda(s, p);
  return mat_vec(h_hessian(p), ls.f0 + lambda * ls.f_lambda) + mat_tvec(field_jacobian(s, lambda, p), h_gradient(s, p));
}

double kappa_form(const State& x, double a, double b, const SystemParams& p) {
  const LinearSplit ls = f_and_f_lambda(x, p);
  return dot(lie_gradient(x, a, p), ls.f0 + b * ls.f_lambda);
}

KappaConstants kappa_constants(const State& x, const SystemParams& p) {
  const double mu = p.mu;
  return {kappa_form(x, mu, mu, p), kappa_form(x, mu, -mu, p), kappa_form(x, -mu, mu, p), kappa_form(x, -mu, -mu, p)};
}

const char* to_string(SingularityCase c) {
  switch (c) {
    case SingularityCase::Case1: return "Case1";
    case SingularityCase::Case2: return "Case2";
    case SingularityCase::Case3: return "Case3";
    case SingularityCase::Degenerate: return "Degenerate";
    case SingularityCase::NotTeixeira: return "NotTeixeira";
  }
  return "?";
}

SingularityCase classify_invariants(double j1, double j2) {
  const double det = j1 * j2 - 1.0;
  if (std::abs(det) <= 1e-12) return SingularityCase::Degenerate;
  if (det < 0.0) return SingularityCase::Case3;
  if (j1 < 0.0 && j2 < 0.0) return SingularityCase::Case1;
  if (j1 > 0.0 && j2 > 0.0) return SingularityCase::Case2;
  return SingularityCase::Degenerate;
}

std::pair<double, double> normal_form_eigenvalues(double j1, double j2) {
  const double root = std::sqrt((j1 - j2) * (j1 - j2) + 4.0);
  return {0.5 * (j1 + j2 + root), 0.5 * (j1 + j2 - root)};
}

SingularityReport normal_form(const State& x_star, const SystemParams& p) {
  SingularityReport rep;
  rep.x_star = x_star;
  rep.k = kappa_constants(x_star, p);
  const double prod = -rep.k.kpp * rep.k.kmm;
  if (!(prod > 0.0)) {
    rep.j1 = rep.j2 = std::numeric_limits<double>::quiet_NaN();
    rep.eig1 = rep.eig2 = std::numeric_limits<double>::quiet_NaN();
    rep.case_tag = SingularityCase::NotTeixeira;
    return rep;
  }
  const double scale = std::sqrt(prod);
  rep.j1 = rep.k.kmp / scale;
  rep.j2 = -rep.k.kpm / scale;
  std::tie(rep.eig1, rep.eig2) = normal_form_eigenvalues(rep.j1, rep.j2);
  rep.evec1 = {rep.eig1 - rep.j2, 1.0};
  rep.evec2 = {rep.eig2 - rep.j2, 1.0};
  // Both signs of the product are needed: K++ < 0 < K--.
  rep.case_tag = rep.k.kpp < 0.0 ? classify_invariants(rep.j1, rep.j2) : SingularityCase::NotTeixeira;
  return rep;
}

std::array<double, 2> normal_form_flow(double xi, double eta, double j1, double j2) {
  const double fold = xi + eta;
  if (fold == 0.0) throw std::domain_error("normal_form_flow: xi + eta = 0 lies on the fold line");
  return {(j1 * xi + eta) / fold, (xi + j2 * eta) / fold};
}

}  // namespace turntable
