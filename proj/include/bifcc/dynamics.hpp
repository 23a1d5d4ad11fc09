#pragma once

// Single-polynomial dynamics of f_{c,v}(z) = z^3 - 3c^2 z + 2c^3 + v.

#include <limits>
#include <optional>
#include <vector>

#include "bifcc/types.hpp"

namespace bifcc {

inline constexpr int kDefaultBudget = 1024;
inline constexpr double kGreenTailTolerance = 1e-12;

/// f_{c,v}(z). Uses (z-c)^2 (z+2c) + v for |z| <= 3|c| and the monomial
/// form elsewhere. Overflow propagates as an infinite value.
cplx eval_poly(const CubicParam& p, cplx z);

/// Monomial form only; exposed for the two-form agreement checks.
cplx eval_poly_monomial(const CubicParam& p, cplx z);
/// Factored form only.
cplx eval_poly_factored(const CubicParam& p, cplx z);

/// f'(z) = 3(z^2 - c^2).
cplx eval_derivative(const CubicParam& p, cplx z);

/// Escape radius max(4, 4(|c| + |v|^{1/3})). Beyond it |f(w)/w^3 - 1| <= 0.23.
double escape_radius(const CubicParam& p);

struct GreenResult {
  double value = 0.0;
  int iterations = 0;
  /// Certified bound on |value - G_f(z)|; +inf when the orbit stayed bounded.
  double error_bound = 0.0;
  bool bounded = false;
};

/// Green function G_f(z) = lim 3^{-n} log|f^n(z)|, with a certified tail bound.
/// An orbit that stays under escape_radius(p) for `budget` steps returns
/// value 0 and bounded = true.
GreenResult green_dynamical(const CubicParam& p, cplx z, int budget = kDefaultBudget);

/// Decides whether G_f(z) < threshold using as few iterations as possible.
/// Returns the cheaper of "certainly below" / "certainly not below"; orbits
/// that stay inside the escape radius for `budget` steps count as below.
bool green_below(const CubicParam& p, cplx z, double threshold, int budget = kDefaultBudget);

/// Boettcher coordinate phi_f(z) via the infinite product
///   z * prod_k (f^{k+1}(z) / f^k(z)^3)^{3^{-(k+1)}}
/// with principal cube roots. Requires G_f(z) >= max(G+, G-), the closure of
/// the basin, since phi^- needs the value at 2c (DomainError otherwise);
/// throws BranchError if a factor reaches the closed left half-plane.
cplx bottcher_at(const CubicParam& p, cplx z);

/// The same product without the domain check; the caller guarantees that z
/// lies in (the closure of) the basin where the product is tame.
cplx bottcher_product(const CubicParam& p, cplx z);

struct Cycle {
  std::vector<cplx> points;
  int period = 0;
  cplx multiplier{};
};

/// Product of f' along the orbit segment starting at z of length `period`.
cplx cycle_multiplier(const CubicParam& p, cplx z, int period);

/// Newton refinement of a periodic point of exact period dividing `period`
/// near `seed`; the returned cycle uses the smallest period found. Throws
/// ConvergenceError if Newton on f^period(w) - w does not converge.
Cycle refine_cycle(const CubicParam& p, cplx seed, int period);

/// Iterates seed looking for convergence to an attracting cycle (period up
/// to max_period). Returns nothing when no attraction is visible within the
/// budget or the refined cycle is not attracting.
std::optional<Cycle> find_attracting_cycle(const CubicParam& p, cplx seed,
                                           int budget = kDefaultBudget,
                                           int max_period = 64);

}  // namespace bifcc
