#include "bifcc/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bifcc {

cplx horner(const Poly& a, cplx s) {
  cplx r{};
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * s + *it;
  return r;
}

Poly interpolate_on_circle(const std::function<cplx(cplx)>& fn, std::size_t nodes,
                           cplx center, double radius) {
  const double step = 2.0 * std::numbers::pi / static_cast<double>(nodes);
  std::vector<cplx> samples(nodes);
  for (std::size_t m = 0; m < nodes; ++m) {
    samples[m] = fn(center + std::polar(radius, step * static_cast<double>(m)));
  }
  return dft_coefficients(samples);
}

Poly dft_coefficients(const std::vector<cplx>& samples) {
  const std::size_t nodes = samples.size();
  const double step = 2.0 * std::numbers::pi / static_cast<double>(nodes);
  Poly coef(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    cplx acc{};
    for (std::size_t m = 0; m < nodes; ++m) {
      // exponent reduced mod nodes keeps the twiddle angle small
      const std::size_t e = (j * m) % nodes;
      acc += samples[m] * std::polar(1.0, -step * static_cast<double>(e));
    }
    coef[j] = acc / static_cast<double>(nodes);
  }
  return coef;
}

std::size_t numerical_degree(const Poly& a, double rel_tol) {
  double biggest = 0.0;
  for (const cplx& x : a) biggest = std::max(biggest, std::abs(x));
  if (biggest == 0.0) return 0;
  for (std::size_t j = a.size(); j-- > 0;) {
    if (std::abs(a[j]) > rel_tol * biggest) return j;
  }
  return 0;
}

std::vector<cplx> aberth_roots(const Poly& a, int max_iterations) {
  if (a.size() < 2) return {};
  const std::size_t n = a.size() - 1;
  if (a[n] == cplx{}) throw DomainError("aberth_roots: leading coefficient is zero");
  Poly monic(a.size());
  for (std::size_t j = 0; j <= n; ++j) monic[j] = a[j] / a[n];
  Poly deriv(n);
  for (std::size_t j = 1; j <= n; ++j) deriv[j - 1] = static_cast<double>(j) * monic[j];

  // Initial guesses: a rotated circle at the geometric-mean root modulus.
  const double mean_modulus =
      std::max(1e-12, std::pow(std::abs(monic[0]), 1.0 / static_cast<double>(n)));
  std::vector<cplx> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.25) /
                             static_cast<double>(n) + 0.4;
    z[i] = std::polar(mean_modulus, angle);
  }
  std::vector<bool> done(n, false);
  for (int it = 0; it < max_iterations; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const cplx pv = horner(monic, z[i]);
      // Stop at rounding level; multiple roots never pass the step test.
      double scale = 0.0;
      for (std::size_t j = n + 1; j-- > 0;) scale = scale * std::abs(z[i]) + std::abs(monic[j]);
      if (std::abs(pv) <= 8e-16 * scale) {
        done[i] = true;
        continue;
      }
      const cplx ratio = pv / horner(deriv, z[i]);
      cplx repulsion{};
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) repulsion += 1.0 / (z[i] - z[k]);
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(std::abs(step))) continue;
      z[i] -= step;
      if (std::abs(step) <= 4e-16 * (1.0 + std::abs(z[i]))) {
        done[i] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) return z;
  }
  // Multiple roots converge only linearly; accept if every root is a
  // near-zero of the polynomial in a relative sense.
  for (std::size_t i = 0; i < n; ++i) {
    double scale = 0.0;
    double power = 1.0;
    for (std::size_t j = 0; j <= n; ++j) {
      scale += std::abs(monic[j]) * power;
      power *= std::abs(z[i]);
    }
    if (!(std::abs(horner(monic, z[i])) <= 1e-6 * scale)) {
      throw ConvergenceError("aberth_roots: no convergence");
    }
  }
  return z;
}

}  // namespace bifcc
