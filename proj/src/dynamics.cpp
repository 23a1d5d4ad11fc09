#include "bifcc/dynamics.hpp"

#include <cmath>

namespace bifcc {

namespace {

constexpr double kLog3 = 1.0986122886681098;
// |f(w)/w^3 - 1| <= kTameDelta whenever |w| >= escape_radius(p).
constexpr double kTameDelta = 0.23;
constexpr double kHugeModulus = 1e100;

// Deviation bound |f(w)/w^3 - 1| <= 3|c|^2/|w|^2 + (2|c|^3 + |v|)/|w|^3.
double cube_deviation(const CubicParam& p, double w_abs) {
  const double ac = std::abs(p.c);
  const double w2 = w_abs * w_abs;
  return 3.0 * ac * ac / w2 + (2.0 * ac * ac * ac + std::abs(p.v)) / (w2 * w_abs);
}

// f(w)/w^3 evaluated without forming w^3.
cplx cube_ratio(const CubicParam& p, cplx w) {
  const cplx q = p.c / w;
  return 1.0 - 3.0 * q * q + 2.0 * q * q * q + p.v / (w * w * w);
}

}  // namespace

cplx eval_poly_monomial(const CubicParam& p, cplx z) {
  const cplx c2 = p.c * p.c;
  return z * z * z - 3.0 * c2 * z + 2.0 * c2 * p.c + p.v;
}

cplx eval_poly_factored(const CubicParam& p, cplx z) {
  const cplx d = z - p.c;
  return d * d * (z + 2.0 * p.c) + p.v;
}

cplx eval_poly(const CubicParam& p, cplx z) {
  if (std::abs(z) <= 3.0 * std::abs(p.c)) return eval_poly_factored(p, z);
  return eval_poly_monomial(p, z);
}

cplx eval_derivative(const CubicParam& p, cplx z) {
  return 3.0 * (z - p.c) * (z + p.c);
}

double escape_radius(const CubicParam& p) {
  return std::max(4.0, 4.0 * (std::abs(p.c) + std::cbrt(std::abs(p.v))));
}

GreenResult green_dynamical(const CubicParam& p, cplx z, int budget) {
  if (budget < 1) throw DomainError("green_dynamical: budget must be >= 1");
  const double radius = escape_radius(p);
  GreenResult out;
  int n = 0;
  while (std::abs(z) < radius) {
    if (n == budget) {
      out.bounded = true;
      out.iterations = n;
      out.error_bound = std::numeric_limits<double>::infinity();
      return out;
    }
    z = eval_poly(p, z);
    ++n;
  }
  // Past the escape radius the tail sum_j 3^{-j-1} log|w_{j+1}/w_j^3| is
  // bounded by 3^{-n} delta / (2 (1 - delta)).
  for (;;) {
    const double modulus = std::abs(z);
    const double scale = std::exp(-n * kLog3);
    const double delta = std::min(cube_deviation(p, modulus), kTameDelta);
    const double bound = scale * delta / (2.0 * (1.0 - delta));
    if (bound < kGreenTailTolerance || modulus > kHugeModulus || scale == 0.0) {
      out.value = scale * std::log(modulus);
      out.error_bound = bound;
      out.iterations = n;
      return out;
    }
    z = eval_poly(p, z);
    ++n;
  }
}

bool green_below(const CubicParam& p, cplx z, double threshold, int budget) {
  const double radius = escape_radius(p);
  // For |w| <= R, G(w) <= log R + 0.15.
  const double cap = std::log(radius) + 0.15;
  double scale = 1.0;
  for (int n = 0; n < budget; ++n) {
    if (std::abs(z) >= radius) {
      GreenResult tail = green_dynamical(p, z, 1);
      return scale * tail.value < threshold;
    }
    if (scale * cap < threshold) return true;
    z = eval_poly(p, z);
    scale /= 3.0;
  }
  if (std::abs(z) >= radius) return scale * green_dynamical(p, z, 1).value < threshold;
  return true;
}

cplx bottcher_product(const CubicParam& p, cplx z) {
  if (z == cplx{}) throw DomainError("bottcher_product: z = 0");
  cplx result = z;
  cplx w = z;
  double root = 1.0 / 3.0;
  for (int k = 0; k < 200; ++k) {
    const cplx factor = cube_ratio(p, w);
    if (std::abs(factor - 1.0) < 1e-15) return result;
    if (factor.real() <= 0.0) {
      throw BranchError("bottcher_product: factor left the right half-plane");
    }
    result *= std::exp(std::log(factor) * root);
    w = eval_poly(p, w);
    if (!std::isfinite(std::abs(w))) return result;
    root /= 3.0;
  }
  throw ConvergenceError("bottcher_product: orbit does not escape");
}

cplx bottcher_at(const CubicParam& p, cplx z) {
  const GreenResult gz = green_dynamical(p, z);
  const GreenResult gp = green_dynamical(p, p.c);
  const GreenResult gm = green_dynamical(p, -p.c);
  // The closure is allowed: phi^- evaluates phi_f at 2c, where G_f = G-.
  const double level = std::max(gp.value, gm.value);
  if (gz.bounded || !(gz.value >= level - 1e-12 * (1.0 + level))) {
    throw DomainError("bottcher_at: z is not in the basin U_f");
  }
  return bottcher_product(p, z);
}

cplx cycle_multiplier(const CubicParam& p, cplx z, int period) {
  cplx m = 1.0;
  for (int i = 0; i < period; ++i) {
    m *= eval_derivative(p, z);
    z = eval_poly(p, z);
  }
  return m;
}

Cycle refine_cycle(const CubicParam& p, cplx seed, int period) {
  if (period < 1) throw DomainError("refine_cycle: period must be >= 1");
  cplx w = seed;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    cplx z = w;
    cplx dz = 1.0;
    for (int i = 0; i < period; ++i) {
      dz *= eval_derivative(p, z);
      z = eval_poly(p, z);
    }
    const cplx slope = dz - 1.0;
    if (std::abs(slope) == 0.0 || !std::isfinite(std::abs(z))) break;
    const cplx step = (z - w) / slope;
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    // Accept a stagnated iterate only if it is a periodic point to tolerance.
    cplx z = w;
    for (int i = 0; i < period; ++i) z = eval_poly(p, z);
    if (!(std::abs(z - w) <= 1e-10 * (1.0 + std::abs(w)))) {
      throw ConvergenceError("refine_cycle: Newton did not converge");
    }
  }
  int exact = period;
  for (int q = 1; q < period; ++q) {
    if (period % q != 0) continue;
    cplx z = w;
    for (int i = 0; i < q; ++i) z = eval_poly(p, z);
    if (std::abs(z - w) <= 1e-9 * (1.0 + std::abs(w))) {
      exact = q;
      break;
    }
  }
  Cycle cycle;
  cycle.period = exact;
  cycle.points.reserve(exact);
  cplx z = w;
  for (int i = 0; i < exact; ++i) {
    cycle.points.push_back(z);
    z = eval_poly(p, z);
  }
  cycle.multiplier = cycle_multiplier(p, w, exact);
  return cycle;
}

std::optional<Cycle> find_attracting_cycle(const CubicParam& p, cplx seed, int budget,
                                           int max_period) {
  const double radius = escape_radius(p);
  cplx z = seed;
  const int transient = std::max(1, budget / 2);
  for (int n = 0; n < transient; ++n) {
    z = eval_poly(p, z);
    if (std::abs(z) >= radius) return std::nullopt;
  }
  const cplx anchor = z;
  for (int q = 1; q <= max_period; ++q) {
    z = eval_poly(p, z);
    if (std::abs(z) >= radius) return std::nullopt;
    if (std::abs(z - anchor) < 1e-6 * (1.0 + std::abs(anchor))) {
      try {
        Cycle cycle = refine_cycle(p, anchor, q);
        if (std::abs(cycle.multiplier) < 1.0) return cycle;
      } catch (const ConvergenceError&) {
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace bifcc
