#pragma once

// Parameter-space potentials G+/G-, the Lyapunov exponent, locus
// classification, the marking involution, phi^- and grid fields.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bifcc/dynamics.hpp"

namespace bifcc {

GreenResult green_plus(const CubicParam& p, int budget = kDefaultBudget);
GreenResult green_minus(const CubicParam& p, int budget = kDefaultBudget);

/// log 3 + G+ + G-.
double lyapunov(const CubicParam& p);

/// (c, v) -> (-c, v + 4c^3): exchanges the marking of the critical points.
CubicParam marking_involution(const CubicParam& p);

enum class Locus {
  Connectedness,  // both critical orbits bounded
  PlusOnly,       // +c bounded, -c escapes
  MinusOnly,      // -c bounded, +c escapes
  Shift,          // both escape
  Undetermined,   // a bounded-by-budget orbit was still wandering near the escape radius
};

std::string to_string(Locus locus);

Locus classify_locus(const CubicParam& p, int budget = kDefaultBudget);

inline constexpr int kMaxPowerLevel = 6;

struct PhiMinusValue {
  cplx value{};
  /// j such that (phi^-)^{3^j} was evaluated directly.
  int power_level = 0;
  /// Parameter whose value fixed the 3^j-th root branch.
  CubicParam branch_basepoint{};
};

/// phi^-(p) = phi_f(2c). Uses power level j = 0 when the Boettcher product
/// at 2c is tame, otherwise evaluates phi_f(f^j(2c)) = (phi^-)^{3^j} and picks
/// the 3^j-th root closest to `reference` (default: 2^{2/3} c, the
/// large-|c| asymptote). DomainError when G+ >= 3^j G- for every j <= 6.
PhiMinusValue phi_minus(const CubicParam& p, std::optional<PhiMinusValue> reference = std::nullopt);

/// (x, y) = (1/c, v/c), coordinates near the line at infinity.
struct NearInfinity {
  cplx x{};
  cplx y{};
};

NearInfinity near_infinity_coords(const CubicParam& p);
CubicParam from_near_infinity(const NearInfinity& xy);

// ---------------------------------------------------------------------------
// Grid fields

enum class AxisMeaning { CPlane, VPlane, TransversalChart, ProductSlice };

std::string to_string(AxisMeaning axis);

/// Axis-aligned rectangle [re_min, re_max] x [im_min, im_max].
struct Region {
  double re_min = 0, re_max = 0, im_min = 0, im_max = 0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(cplx z) const {
    return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
  }
};

/// Row-major samples at cell centres; values[iy * nx + ix] is the sample at
/// origin + (ix dx, iy dy), where origin is the centre of the first cell.
struct GridField {
  cplx origin{};
  double dx = 0.0;
  double dy = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;
  AxisMeaning axis = AxisMeaning::CPlane;

  std::size_t size() const { return nx * ny; }
  double& at(std::size_t ix, std::size_t iy) { return values[iy * nx + ix]; }
  double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }
  cplx point(std::size_t ix, std::size_t iy) const {
    return origin + cplx(static_cast<double>(ix) * dx, static_cast<double>(iy) * dy);
  }
  /// Cell containing z, if any.
  std::optional<std::pair<std::size_t, std::size_t>> cell_of(cplx z) const;
  Region region() const;
};

/// Samples field at the centres of a resolution x resolution grid over region.
/// Cells are evaluated in parallel. Requires resolution >= 8.
GridField sample_grid(const Region& region, std::size_t resolution,
                      const std::function<double(cplx)>& field,
                      AxisMeaning axis = AxisMeaning::CPlane);

struct DensityField {
  /// Cell masses (5-point Laplacian times cell area over 2 pi), clamped at 0.
  GridField density;
  double total = 0.0;
  /// Sum of the negative parts removed by clamping (<= 0).
  double clamped = 0.0;
};

/// Discrete dd^c of a potential: border cells carry no mass.
DensityField laplacian_density(const GridField& potential);

}  // namespace bifcc
