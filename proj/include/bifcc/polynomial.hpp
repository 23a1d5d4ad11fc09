#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "bifcc/types.hpp"

namespace bifcc {

/// Coefficients low to high: a[0] + a[1] s + ... + a[n] s^n.
using Poly = std::vector<cplx>;

cplx horner(const Poly& a, cplx s);

/// Coefficients, in the scaled variable s = (t - center) / radius, of the
/// polynomial of degree < nodes that agrees with fn at `nodes` equally spaced
/// points of the circle |t - center| = radius (inverse DFT).
Poly interpolate_on_circle(const std::function<cplx(cplx)>& fn, std::size_t nodes,
                           cplx center, double radius);

/// Inverse DFT of samples taken at the points exp(2 pi i m / N), m = 0..N-1.
Poly dft_coefficients(const std::vector<cplx>& samples);

/// Largest index whose coefficient exceeds rel_tol * max |coefficient|.
std::size_t numerical_degree(const Poly& a, double rel_tol = 1e-8);

/// All roots of a (degree = a.size() - 1, a.back() != 0) by Aberth-Ehrlich
/// simultaneous iteration. Throws ConvergenceError if the iteration stalls.
std::vector<cplx> aberth_roots(const Poly& a, int max_iterations = 500);

}  // namespace bifcc
