#include "bifcc/parameter_plane.hpp"

#include <cmath>
#include <numbers>

#include "bifcc/parallel.hpp"

namespace bifcc {

GreenResult green_plus(const CubicParam& p, int budget) {
  return green_dynamical(p, p.c, budget);
}

GreenResult green_minus(const CubicParam& p, int budget) {
  return green_dynamical(p, -p.c, budget);
}

double lyapunov(const CubicParam& p) {
  return std::log(3.0) + green_plus(p).value + green_minus(p).value;
}

CubicParam marking_involution(const CubicParam& p) {
  return {-p.c, p.v + 4.0 * p.c * p.c * p.c};
}

std::string to_string(Locus locus) {
  switch (locus) {
    case Locus::Connectedness: return "C";
    case Locus::PlusOnly: return "C+only";
    case Locus::MinusOnly: return "C-only";
    case Locus::Shift: return "Shift";
    case Locus::Undetermined: return "undetermined";
  }
  return "?";
}

namespace {

enum class Fate { Escapes, Bounded, Wandering };

// Bounded orbits must also have settled: the last quarter of the budget
// stays inside half the escape radius.
Fate orbit_fate(const CubicParam& p, cplx z, int budget) {
  const double radius = escape_radius(p);
  const int settle_from = budget - budget / 4;
  double late_max = 0.0;
  for (int n = 0; n < budget; ++n) {
    if (std::abs(z) >= radius) return Fate::Escapes;
    if (n >= settle_from) late_max = std::max(late_max, std::abs(z));
    z = eval_poly(p, z);
  }
  if (std::abs(z) >= radius) return Fate::Escapes;
  return late_max > 0.5 * radius ? Fate::Wandering : Fate::Bounded;
}

}  // namespace

Locus classify_locus(const CubicParam& p, int budget) {
  const Fate plus = orbit_fate(p, p.c, budget);
  const Fate minus = orbit_fate(p, -p.c, budget);
  if (plus == Fate::Wandering || minus == Fate::Wandering) return Locus::Undetermined;
  const bool pb = plus == Fate::Bounded;
  const bool mb = minus == Fate::Bounded;
  if (pb && mb) return Locus::Connectedness;
  if (pb) return Locus::PlusOnly;
  if (mb) return Locus::MinusOnly;
  return Locus::Shift;
}

PhiMinusValue phi_minus(const CubicParam& p, std::optional<PhiMinusValue> reference) {
  if (p.c == cplx{}) throw DomainError("phi_minus: c = 0");
  const GreenResult gm = green_minus(p);
  if (gm.bounded) throw DomainError("phi_minus: -c does not escape");
  const GreenResult gp = green_plus(p);
  const double g_plus = gp.bounded ? 0.0 : gp.value;

  const cplx anchor = reference ? reference->value : std::pow(2.0, 2.0 / 3.0) * p.c;
  cplx w = 2.0 * p.c;
  double power = 1.0;
  for (int j = 0; j <= kMaxPowerLevel; ++j, power *= 3.0) {
    if (j > 0) w = eval_poly(p, w);
    if (!(g_plus < power * gm.value)) continue;
    cplx lifted;
    try {
      lifted = bottcher_product(p, w);
    } catch (const BranchError&) {
      continue;
    }
    PhiMinusValue out;
    out.power_level = j;
    out.branch_basepoint = reference ? reference->branch_basepoint : p;
    if (j == 0) {
      out.value = lifted;
      return out;
    }
    // Root of lifted of order 3^j closest to the anchor.
    const double modulus = std::pow(std::abs(lifted), 1.0 / power);
    const double base_arg = std::arg(lifted) / power;
    const int count = static_cast<int>(power);
    const double turn = 2.0 * std::numbers::pi / power;
    double best = std::numeric_limits<double>::infinity();
    for (int m = 0; m < count; ++m) {
      const cplx candidate = std::polar(modulus, base_arg + turn * m);
      const double d = std::abs(candidate - anchor);
      if (d < best) {
        best = d;
        out.value = candidate;
      }
    }
    return out;
  }
  throw DomainError("phi_minus: G+ >= 3^j G- for every supported power level");
}

NearInfinity near_infinity_coords(const CubicParam& p) {
  if (p.c == cplx{}) throw DomainError("near_infinity_coords: degenerate at c = 0");
  return {1.0 / p.c, p.v / p.c};
}

CubicParam from_near_infinity(const NearInfinity& xy) {
  if (xy.x == cplx{}) throw DomainError("from_near_infinity: x = 0 is the line at infinity");
  const cplx c = 1.0 / xy.x;
  return {c, xy.y * c};
}

std::string to_string(AxisMeaning axis) {
  switch (axis) {
    case AxisMeaning::CPlane: return "c-plane";
    case AxisMeaning::VPlane: return "v-plane";
    case AxisMeaning::TransversalChart: return "transversal-chart";
    case AxisMeaning::ProductSlice: return "product-slice";
  }
  return "?";
}

std::optional<std::pair<std::size_t, std::size_t>> GridField::cell_of(cplx z) const {
  const double fx = (z.real() - origin.real()) / dx + 0.5;
  const double fy = (z.imag() - origin.imag()) / dy + 0.5;
  if (!(fx >= 0.0 && fy >= 0.0)) return std::nullopt;
  const auto ix = static_cast<std::size_t>(fx);
  const auto iy = static_cast<std::size_t>(fy);
  if (ix >= nx || iy >= ny) return std::nullopt;
  return std::pair{ix, iy};
}

Region GridField::region() const {
  return {origin.real() - 0.5 * dx, origin.real() + (static_cast<double>(nx) - 0.5) * dx,
          origin.imag() - 0.5 * dy, origin.imag() + (static_cast<double>(ny) - 0.5) * dy};
}

GridField sample_grid(const Region& region, std::size_t resolution,
                      const std::function<double(cplx)>& field, AxisMeaning axis) {
  if (resolution < 8) throw DomainError("sample_grid: resolution must be >= 8");
  if (!(region.width() > 0.0 && region.height() > 0.0)) {
    throw DomainError("sample_grid: empty region");
  }
  GridField g;
  g.nx = g.ny = resolution;
  g.dx = region.width() / static_cast<double>(resolution);
  g.dy = region.height() / static_cast<double>(resolution);
  g.origin = {region.re_min + 0.5 * g.dx, region.im_min + 0.5 * g.dy};
  g.axis = axis;
  g.values.assign(g.size(), 0.0);
  parallel_for(g.size(), [&](std::size_t i) {
    g.values[i] = field(g.point(i % g.nx, i / g.nx));
  });
  return g;
}

DensityField laplacian_density(const GridField& potential) {
  DensityField out;
  out.density = potential;
  std::fill(out.density.values.begin(), out.density.values.end(), 0.0);
  const double wx = potential.dy / potential.dx / (2.0 * std::numbers::pi);
  const double wy = potential.dx / potential.dy / (2.0 * std::numbers::pi);
  CompensatedSum total;
  CompensatedSum clamped;
  for (std::size_t iy = 1; iy + 1 < potential.ny; ++iy) {
    for (std::size_t ix = 1; ix + 1 < potential.nx; ++ix) {
      const double u = potential.at(ix, iy);
      const double lap = wx * (potential.at(ix + 1, iy) + potential.at(ix - 1, iy) - 2.0 * u) +
                         wy * (potential.at(ix, iy + 1) + potential.at(ix, iy - 1) - 2.0 * u);
      if (lap < 0.0) {
        clamped.add(lap);
        continue;
      }
      out.density.at(ix, iy) = lap;
      total.add(lap);
    }
  }
  out.total = total.value();
  out.clamped = clamped.value();
  return out;
}

}  // namespace bifcc
