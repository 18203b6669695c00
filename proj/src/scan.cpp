#include "turntable/scan.hpp"

#include <cmath>
#include <stdexcept>

namespace turntable {

const char* to_string(ScanMask m) {
  switch (m) {
    case ScanMask::KmmPos: return "kmm_pos";
    case ScanMask::KppNeg: return "kpp_neg";
    case ScanMask::J1Neg: return "j1_neg";
    case ScanMask::J2Neg: return "j2_neg";
    case ScanMask::DetPos: return "det_pos";
    case ScanMask::K2Pos: return "k2_pos";
    case ScanMask::KappaPos: return "kappa_pos";
    case ScanMask::Combined: return "combined";
  }
  return "?";
}

std::array<std::size_t, 2> ScanResult::nearest(double r, double omega) const {
  auto closest = [](const std::vector<double>& axis, double x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < axis.size(); ++i)
      if (std::abs(axis[i] - x) < std::abs(axis[best] - x)) best = i;
    return best;
  };
  return {closest(r_axis, r), closest(omega_axis, omega)};
}

ScanCell scan_cell(double r_star, double omega_star, const SystemParams& partial) {
  ScanCell cell;
  cell.r_star = r_star;
  cell.omega_star = omega_star;
  try {
    const DesignResult d = design_singularity(r_star, omega_star, partial);
    const SingularityReport rep = normal_form(d.x_star, d.params);
    const double det = rep.j1 * rep.j2 - 1.0;
    auto set = [&](ScanMask m, bool v) { cell.masks[static_cast<std::size_t>(m)] = v; };
    // NaN invariants (no Teixeira scaling) make every comparison false.
    set(ScanMask::KmmPos, rep.k.kmm > 0.0);
    set(ScanMask::KppNeg, rep.k.kpp < 0.0);
    set(ScanMask::J1Neg, rep.j1 < 0.0);
    set(ScanMask::J2Neg, rep.j2 < 0.0);
    set(ScanMask::DetPos, det > 0.0);
    set(ScanMask::K2Pos, d.k2 > 0.0);
    set(ScanMask::KappaPos, d.kappa > 0.0);
    bool all = true;
    for (std::size_t i = 0; i + 1 < kScanMaskCount; ++i) all = all && cell.masks[i];
    set(ScanMask::Combined, all);
    cell.valid = true;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

ScanResult scan(const SystemParams& partial, const ScanWindow& window, std::size_t n) {
  if (n == 0) throw std::invalid_argument("scan: grid size must be >= 1");
  if (!(window.r_max > window.r_min) || !(window.omega_max > window.omega_min))
    throw std::invalid_argument("scan: empty window");
  ScanResult res;
  res.n = n;
  res.window = window;
  for (std::size_t i = 0; i < n; ++i) {
    res.r_axis.push_back(window.r_min + (window.r_max - window.r_min) * (i + 0.5) / n);
    res.omega_axis.push_back(window.omega_min + (window.omega_max - window.omega_min) * (i + 0.5) / n);
  }
  res.cells.reserve(n * n);
  for (double r : res.r_axis)
    for (double w : res.omega_axis) res.cells.push_back(scan_cell(r, w, partial));
  return res;
}

}  // namespace turntable
