#pragma once

// Misiurewicz parameters as intersections Per+(n,k) x Per-(m,l), the
// intersection estimate of mu_bif = T+ ^ T-, and the Monge-Ampere grid
// estimate of (dd^c max(G+, G-))^2.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "bifcc/parameter_plane.hpp"
#include "bifcc/per_curves.hpp"

namespace bifcc {

/// Parameters with |c| below this are the degenerate point c = 0.
inline constexpr double kDegenerateRadius = 1e-7;
/// Half-width of the cell around c = 0 whose roots make up the fibre over
/// c = 0 (the search square 4.1 wide, halved six times, is 0.064 wide).
inline constexpr double kDegenerateDisk = 0.032;
inline constexpr double kSingularCondition = 1e8;
/// Multiple eliminant roots closer than this are one cluster.
inline constexpr double kUnresolvedRadius = 1e-2;
inline constexpr double kMisiurewiczResidual = 1e-9;

struct IntersectionPoint {
  CubicParam p;
  int multiplicity = 1;
  /// |F| and |G| at p.
  std::array<double, 2> residuals{};
  /// Condition number of the Jacobian of (F, G); +inf when singular.
  double condition = 0.0;
  bool flagged = false;  // c = 0
  bool near_degenerate() const { return multiplicity > 1 || condition > kSingularCondition; }
};

struct Intersection {
  PerSpec first;
  PerSpec second;
  std::vector<IntersectionPoint> points;  // affine points, sorted by (Re c, Im c, Re v, Im v)
  /// Bezout bound: total_degree(first) * total_degree(second).
  int bezout = 0;
  /// Affine count with multiplicity; bezout - affine went to infinity.
  int affine = 0;
};

/// All affine points of Per(first) ∩ Per(second) with multiplicities, by
/// eliminating v: the first curve is monic in v, so prod_i F2(c, v_i(c))
/// over its v-roots is a polynomial in c whose roots (clustered) are the
/// c-coordinates of the intersection points.
Intersection intersect_curves(const PerSpec& first, const PerSpec& second);

struct MisiurewiczSpec {
  int n = 1, k = 0, m = 1, l = 0;
  /// k < n, l < m, n + m <= 8.
  void validate() const;
  PerSpec plus() const { return {Sign::Plus, n, k}; }
  PerSpec minus() const { return {Sign::Minus, m, l}; }
};

struct MisiurewiczCandidate {
  CubicParam p;
  MisiurewiczSpec spec;
  std::array<double, 2> residuals{};
  cplx plus_multiplier{};
  cplx minus_multiplier{};
  int plus_period = 0;
  int minus_period = 0;
  /// Strict preperiodicity of +c and -c: landing cycle repelling and the
  /// critical point not on it.
  std::array<bool, 2> strict{};
  bool flagged = false;  // c = 0
  /// Intersection multiplicity; > 1 (or a huge condition number) marks a
  /// non-transverse point, which is never Misiurewicz.
  int multiplicity = 1;
  double condition = 0.0;
  bool is_misiurewicz() const { return strict[0] && strict[1] && !flagged; }
};

struct MisiurewiczReport {
  MisiurewiczSpec spec;
  std::vector<MisiurewiczCandidate> candidates;
  /// Intersection points left out because Newton did not bring both
  /// residuals under 1e-9.
  int unconverged = 0;
  /// Candidates removed as duplicates within 1e-7.
  int merged = 0;
};

/// Solves f^n(c) = f^k(c), f^m(-c) = f^l(-c) and keeps the solutions with c
/// in `region` (all affine ones when region is empty). Each point is
/// polished by damped Newton and classified; non-transverse points are kept
/// with their multiplicity.
MisiurewiczReport misiurewicz_solve(const MisiurewiczSpec& spec,
                                    const std::optional<Region>& region = std::nullopt);

/// Candidates with strict = (true, true) away from c = 0.
std::vector<MisiurewiczCandidate> misiurewicz_points(const MisiurewiczReport& report);

/// Residuals after one more Newton step from candidate.p.
std::array<double, 2> newton_recheck(const MisiurewiczCandidate& candidate);

struct PairEstimate {
  PerSpec plus;
  PerSpec minus;
  double weight = 0.0;  // 3^{-n-m}
  std::vector<IntersectionPoint> points;  // those in the region
  double total = 0.0;
  double total_without_flagged = 0.0;
  /// 3^{n-1} 3^m 3^{-n-m}
  double bezout_cap = 0.0;
  int escaped = 0;
};

struct IntersectionEstimate {
  int n_max = 0;
  std::vector<PairEstimate> pairs;
  /// Total of the deepest pair (n_max, n_max).
  double total = 0.0;
  double total_without_flagged = 0.0;
};

/// For every pair Per+(n, n-1) x Per-(m, m-1), 1 <= n, m <= n_max (n_max <= 4),
/// the affine intersections in region weighted 3^{-n-m}.
IntersectionEstimate mu_bif_intersection_estimate(int n_max,
                                                  const std::optional<Region>& region = std::nullopt);

/// max(G+(p), G-(p)).
double max_green(const CubicParam& p);

/// c-window x v-window.
struct Region4 {
  Region c;
  Region v;
};

inline constexpr std::size_t kMaxGrid4 = 64;
/// Default smoothing: 2 cells at resolution 16, scaled with the resolution
/// so the averaging radius is a fixed fraction of the window.
inline constexpr int kDefaultSmoothing = 2;
inline constexpr std::size_t kSmoothingReference = 16;
inline constexpr int kScaledSmoothing = -1;
int default_smoothing(std::size_t resolution);

struct MongeAmpereGrid {
  Region4 region;
  std::size_t resolution = 0;
  int smoothing = 0;
  /// Cell masses, index ((i3 * r + i2) * r + i1) * r + i0 over (Re c, Im c, Re v, Im v).
  std::vector<double> cell_masses;
  double total = 0.0;
  double clamped = 0.0;
};

/// (dd^c u)^2 on a resolution^4 grid of cell centres: u is box-averaged over
/// (2 smoothing + 1)^4 cells, the complex Hessian comes from second
/// differences, and each cell gets (8 / pi^2) det(u_{j kbar}) times its
/// volume, clamped at 0. Requires resolution >= 16; resolution above 64
/// throws ResolutionError. smoothing = kScaledSmoothing picks
/// default_smoothing(resolution).
MongeAmpereGrid monge_ampere_grid(const std::function<double(const CubicParam&)>& u,
                                  const Region4& region, std::size_t resolution,
                                  int smoothing = kScaledSmoothing);

MongeAmpereGrid mu_bif_grid_estimate(const Region4& region, std::size_t resolution,
                                     int smoothing = kScaledSmoothing);

}  // namespace bifcc
