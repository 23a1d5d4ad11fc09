#pragma once

// Independent reference computations for the tests. Everything here works in
// long double and avoids the library on purpose.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include "bifcc/types.hpp"

namespace oracle {

using lcplx = std::complex<long double>;

inline lcplx widen(bifcc::cplx z) { return {z.real(), z.imag()}; }

inline lcplx cubic(bifcc::CubicParam p, lcplx z) {
  const lcplx c = widen(p.c), v = widen(p.v);
  return z * z * z - 3.0L * c * c * z + 2.0L * c * c * c + v;
}

// 3^{-n} log|f^n(z)| at the first n where |f^n(z)| passes 1e300 (n <= iters);
// 0 if the orbit never gets there.
inline double green(bifcc::CubicParam p, bifcc::cplx z0, int iters = 60) {
  lcplx z = widen(z0);
  long double scale = 1.0L;
  for (int n = 0; n <= iters; ++n) {
    if (std::abs(z) > 1e300L) return static_cast<double>(scale * std::log(std::abs(z)));
    z = cubic(p, z);
    scale /= 3.0L;
  }
  return 0.0;
}

// z * prod_k (f^{k+1}(z) / f^k(z)^3)^{3^{-(k+1)}}, principal roots, stopped once
// the factor is 1 to long double precision.
inline bifcc::cplx bottcher(bifcc::CubicParam p, bifcc::cplx z0, int terms = 40) {
  lcplx z = widen(z0);
  lcplx out = z;
  long double e = 1.0L / 3.0L;
  for (int k = 0; k < terms; ++k) {
    const lcplx w = cubic(p, z);
    const lcplx ratio = w / (z * z * z);
    out *= std::pow(ratio, e);
    if (std::abs(ratio - 1.0L) < 1e-19L) break;
    z = w;
    e /= 3.0L;
  }
  return {static_cast<double>(out.real()), static_cast<double>(out.imag())};
}

// Durand-Kerner on a monic polynomial, coefficients low to high.
inline std::vector<bifcc::cplx> monic_roots(const std::vector<bifcc::cplx>& a) {
  const std::size_t n = a.size() - 1;
  std::vector<lcplx> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(lcplx(0.4L, 0.9L), static_cast<long double>(i));
  auto eval = [&](lcplx x) {
    lcplx acc = widen(a[n]);
    for (std::size_t i = n; i-- > 0;) acc = acc * x + widen(a[i]);
    return acc;
  };
  for (int it = 0; it < 2000; ++it) {
    long double move = 0;
    for (std::size_t i = 0; i < n; ++i) {
      lcplx den = 1.0L;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      const lcplx step = eval(z[i]) / den;
      z[i] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-18L) break;
  }
  std::vector<bifcc::cplx> out;
  for (const lcplx& r : z) out.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  return out;
}

// Distance from x to the nearest element of set.
inline double nearest(const std::vector<bifcc::cplx>& set, bifcc::cplx x) {
  double best = INFINITY;
  for (auto s : set) best = std::min(best, std::abs(s - x));
  return best;
}

inline bifcc::cplx random_cplx(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng)};
}

}  // namespace oracle
