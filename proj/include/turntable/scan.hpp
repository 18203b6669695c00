// Grid scan of designed singularities over (r*, omega*): which of the
// conditions for a funnelling (case 1) two-fold hold at each point.
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "turntable/model.hpp"
#include "turntable/singularity.hpp"

namespace turntable {

struct ScanWindow {
  double r_min = 0.01;
  double r_max = 0.6;
  double omega_min = -2.0;
  double omega_max = 0.0;
};

enum class ScanMask { KmmPos, KppNeg, J1Neg, J2Neg, DetPos, K2Pos, KappaPos, Combined };
inline constexpr std::size_t kScanMaskCount = 8;
const char* to_string(ScanMask m);
inline constexpr std::array<ScanMask, kScanMaskCount> kAllScanMasks{
    ScanMask::KmmPos, ScanMask::KppNeg, ScanMask::J1Neg,    ScanMask::J2Neg,
    ScanMask::DetPos, ScanMask::K2Pos,  ScanMask::KappaPos, ScanMask::Combined};

struct ScanCell {
  double r_star = 0.0;
  double omega_star = 0.0;
  bool valid = false;
  std::string error;  // why the cell is invalid
  std::array<bool, kScanMaskCount> masks{};

  [[nodiscard]] bool mask(ScanMask m) const { return masks[static_cast<std::size_t>(m)]; }
};

struct ScanResult {
  std::size_t n = 0;
  ScanWindow window;
  std::vector<double> r_axis;      // cell centres
  std::vector<double> omega_axis;  // cell centres
  std::vector<ScanCell> cells;     // row-major: r index outer, omega index inner

  [[nodiscard]] const ScanCell& at(std::size_t i_r, std::size_t i_omega) const { return cells[i_r * n + i_omega]; }
  /// Index pair of the cell whose centre is nearest to (r, omega).
  [[nodiscard]] std::array<std::size_t, 2> nearest(double r, double omega) const;
};

/// Masks for one designed point; invalid when the designer rejects it.
ScanCell scan_cell(double r_star, double omega_star, const SystemParams& partial);

ScanResult scan(const SystemParams& partial, const ScanWindow& window = {}, std::size_t n = 8);

}  // namespace turntable
