#pragma once

// The wringing deformation: the group (H, *) of the right half-plane, the
// radial maps g_u(z) = z |z|^{u-1}, leaf tracing by continuation of
// (phi^-, held invariant), and the transversal disks {phi^- = k}.

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bifcc/parameter_plane.hpp"
#include "bifcc/per_curves.hpp"

namespace bifcc {

/// u = s + i t with s > 0.
struct WringU {
  double s = 1.0;
  double t = 0.0;

  cplx as_complex() const { return {s, t}; }
  friend bool operator==(const WringU&, const WringU&) = default;
};

/// (s1 + i t1) * (s2 + i t2) = (s1 + i t1) s2 + i t2.
WringU wring_compose(const WringU& u1, const WringU& u2);
inline WringU wring_identity() { return {1.0, 0.0}; }

/// g_u(z) = z |z|^{u-1}; DomainError unless |z| > 1 and s > 0.
cplx g_u(const WringU& u, cplx z);

// Held invariants for leaf tracing.
struct NoConstraint {};
/// The Per(n,k) residual f^n(+-c) - f^k(+-c) is held at its base value.
struct PerConstraint {
  PerSpec spec;
};
/// The multiplier of an attracting cycle of the given period is held.
struct MultiplierConstraint {
  int period = 1;
  /// Point of the cycle at the base parameter.
  cplx cycle_point{};
};
using LeafConstraint = std::variant<NoConstraint, PerConstraint, MultiplierConstraint>;

std::string describe(const LeafConstraint& constraint);

struct LeafStep {
  WringU u;
  CubicParam p;
  double residual_phi = 0.0;
  double residual_inv = 0.0;
};

enum class TraceStatus { Complete, ContinuationFailure, RegionExit };

struct LeafTrace {
  std::vector<LeafStep> steps;
  LeafConstraint constraint;
  CubicParam base;
  TraceStatus status = TraceStatus::Complete;
  std::string message;
};

struct TraceOptions {
  double tolerance = 1e-12;
  int max_halvings = 8;
};

/// For each u on the path solves phi^-(p) = g_u(phi^-(base)) together with
/// held(p) = held(base) by damped Newton (finite-difference Jacobian),
/// seeded from the previous step. With NoConstraint the minimum-norm Newton
/// step is used, so points land on the target fibre but are not pinned to a
/// leaf. A failing step is retried on halved u-steps; after max_halvings the
/// trace stops with ContinuationFailure and keeps the good prefix.
LeafTrace trace_leaf(const CubicParam& base, const std::vector<WringU>& u_path,
                     const LeafConstraint& constraint, const TraceOptions& options = {});

/// u = s for s from 1 to s_end in `steps` equal increments (the identity is
/// not included).
std::vector<WringU> real_path(double s_end, int steps);
/// u = 1 + i t for t from 0 to t_end in `steps` increments.
std::vector<WringU> rotation_path(double t_end, int steps);

// ---------------------------------------------------------------------------
// Transversal disks

/// Default |k| lower bound for the large-|c| branch reference.
double default_k_min();

struct ChartGrid {
  Region window;  // in the y = v/c coordinate
  std::size_t resolution = 0;

  std::size_t size() const { return resolution * resolution; }
  cplx y_at(std::size_t ix, std::size_t iy) const;
  cplx y_of(std::size_t i) const { return y_at(i % resolution, i / resolution); }
  double dy_re() const { return window.width() / static_cast<double>(resolution); }
  double dy_im() const { return window.height() / static_cast<double>(resolution); }
};

struct Transversal {
  cplx k{};
  ChartGrid grid;
  /// x = 1/c solving phi^-(1/x, y/x) = k at each grid y; NaN at gaps.
  std::vector<cplx> x;
  std::vector<double> residual;
  std::size_t solved = 0;
  /// Largest |x(y) - x(y')| / |y - y'| over neighbouring grid points.
  double lipschitz = 0.0;
  /// max |x| over solved points: the chart lies in {|x| <= x_radius}.
  double x_radius = 0.0;

  bool has(std::size_t i) const { return std::isfinite(x[i].real()); }
  CubicParam param(std::size_t i) const { return from_near_infinity({x[i], grid.y_of(i)}); }
  double success_fraction() const {
    return grid.size() ? static_cast<double>(solved) / static_cast<double>(grid.size()) : 0.0;
  }
};

/// Solves phi^-(1/x, y/x) = k for x at every grid point by Newton seeded
/// from x_seed (default 2^{2/3}/k). Points that fail become gaps. Requires
/// |k| >= k_min.
Transversal transversal_disk(cplx k, const ChartGrid& grid, std::optional<cplx> x_seed = std::nullopt,
                             double k_min = default_k_min());

/// Smallest distance between the (x, y) points of two charts.
double chart_distance(const Transversal& a, const Transversal& b);

}  // namespace bifcc
