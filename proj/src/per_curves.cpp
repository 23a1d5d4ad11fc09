#include "bifcc/per_curves.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "bifcc/parallel.hpp"
#include "bifcc/polynomial.hpp"

namespace bifcc {

namespace {

constexpr double kLogModeThreshold = 1e60;

int pow3(int e) {
  int r = 1;
  for (int i = 0; i < e; ++i) r *= 3;
  return r;
}

cplx polish_v(const PerSpec& s, cplx c0, cplx v) {
  for (int it = 0; it < 80; ++it) {
    const PerJet jet = per_jet(s, {c0, v});
    if (jet.d_v == cplx{}) break;
    const cplx step = jet.value / jet.d_v;
    if (!std::isfinite(std::abs(step))) break;
    v -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(v))) break;
  }
  return v;
}

}  // namespace

std::string to_string(Sign sign) { return sign == Sign::Plus ? "plus" : "minus"; }

void PerSpec::validate() const {
  if (n < 1 || k < 0 || k >= n) throw DomainError("PerSpec: require n >= 1 and 0 <= k < n");
}

int PerSpec::v_degree() const { return pow3(n - 1); }

int PerSpec::total_degree() const { return sign == Sign::Plus ? pow3(n - 1) : pow3(n); }

PerValue per_value(const PerSpec& s, const CubicParam& p) {
  s.validate();
  cplx z = s.critical_point(p);
  cplx zk = z;
  PerValue out;
  for (int j = 0; j < s.n; ++j) {
    if (j == s.k) zk = z;
    if (std::abs(z) > kLogModeThreshold) {
      // f(w) = w^3 (1 + O(c^2/w^2)) is exact to double precision here, and
      // |f^n| dwarfs |f^k| once the orbit has escaped this far.
      double log_mod = std::log(std::abs(z));
      for (int m = j; m < s.n; ++m) log_mod *= 3.0;
      out.overflow = true;
      out.log_modulus = log_mod;
      out.value = cplx(std::numeric_limits<double>::infinity(), 0.0);
      return out;
    }
    z = eval_poly(p, z);
  }
  out.value = z - zk;
  out.log_modulus = std::log(std::abs(out.value));
  return out;
}

PerJet per_jet(const PerSpec& s, const CubicParam& p) {
  s.validate();
  const double sigma = s.sign == Sign::Plus ? 1.0 : -1.0;
  cplx z = sigma * p.c;
  cplx zc = sigma;
  cplx zv = 0.0;
  PerJet at_k;
  for (int j = 0; j < s.n; ++j) {
    if (j == s.k) at_k = {z, zc, zv};
    const cplx fp = eval_derivative(p, z);
    // partial of f in c at fixed z: -6cz + 6c^2
    const cplx fc = 6.0 * p.c * (p.c - z);
    zc = fp * zc + fc;
    zv = fp * zv + 1.0;
    z = eval_poly(p, z);
  }
  return {z - at_k.value, zc - at_k.d_c, zv - at_k.d_v};
}

std::vector<VRoot> v_roots_on_line(const PerSpec& s, cplx c0) {
  s.validate();
  const int degree = s.v_degree();
  auto fn = [&](cplx v) { return per_value(s, {c0, v}).value; };
  // Per-(n,k) at c0 is Per+(n,k) at -c0 shifted by -4c0^3 (the involution),
  // so its roots sit around -4c0^3, not around 0.
  const cplx centre = s.sign == Sign::Minus ? -4.0 * c0 * c0 * c0 : cplx{};
  double radius = std::max(1.0, std::abs(c0));
  std::vector<cplx> scaled;
  for (int attempt = 0;; ++attempt) {
    try {
      Poly coef = interpolate_on_circle(fn, static_cast<std::size_t>(degree) + 1, centre, radius);
      scaled = aberth_roots(coef);
      break;
    } catch (const Error&) {
      if (attempt == 1) throw ConvergenceError("v_roots_on_line: interpolation is ill-conditioned");
      radius *= 2.0;
    }
  }
  std::vector<VRoot> roots;
  roots.reserve(scaled.size());
  for (const cplx& sroot : scaled) {
    VRoot r;
    r.v = polish_v(s, c0, centre + sroot * radius);
    r.residual = std::abs(per_value(s, {c0, r.v}).value);
    roots.push_back(r);
  }
  for (auto& r : roots) {
    int count = 0;
    for (const auto& other : roots) {
      if (std::abs(other.v - r.v) <= 1e-6 * (1.0 + std::abs(r.v))) ++count;
    }
    r.multiplicity = count;
  }
  return roots;
}

int total_degree_check(const PerSpec& s, std::uint64_t seed) {
  s.validate();
  if (s.n > 5) throw DomainError("total_degree_check: n <= 5 supported");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::size_t nodes = static_cast<std::size_t>(pow3(s.n)) + 9;
  constexpr double kRadius = 8.0;
  int degree = -1;
  for (int attempt = 0; attempt < 5; ++attempt) {
    const CubicParam p0{{unit(rng), unit(rng)}, {unit(rng), unit(rng)}};
    const CubicParam q{{unit(rng), unit(rng)}, {unit(rng), unit(rng)}};
    auto fn = [&](cplx t) { return per_value(s, {p0.c + t * q.c, p0.v + t * q.v}).value; };
    const Poly coef = interpolate_on_circle(fn, nodes, 0.0, kRadius);
    degree = static_cast<int>(numerical_degree(coef));
    double biggest = 0.0;
    for (const cplx& x : coef) biggest = std::max(biggest, std::abs(x));
    // A leading coefficient near the cut-off means the line is nearly
    // tangent to the curve at infinity: draw another line.
    if (std::abs(coef[static_cast<std::size_t>(degree)]) > 1e-6 * biggest) return degree;
  }
  return degree;
}

double equidist_potential(const PerSpec& s, const CubicParam& p) {
  const PerValue pv = per_value(s, p);
  if (!pv.overflow && pv.value == cplx{}) return -std::numeric_limits<double>::infinity();
  return pv.log_modulus / std::pow(3.0, s.n);
}

std::vector<CubicParam> sample_curve(const PerSpec& s, const std::vector<cplx>& cs) {
  s.validate();
  std::vector<std::vector<CubicParam>> per_c(cs.size());
  parallel_for(cs.size(), [&](std::size_t i) {
    for (const VRoot& r : v_roots_on_line(s, cs[i])) {
      if (r.residual < 1e-8) per_c[i].push_back({cs[i], r.v});
    }
  });
  std::vector<CubicParam> out;
  for (auto& chunk : per_c) out.insert(out.end(), chunk.begin(), chunk.end());
  return out;
}

std::vector<CubicParam> sample_curve(const PerSpec& s, const Region& c_window,
                                     std::size_t resolution) {
  if (resolution == 0) return {};
  std::vector<cplx> cs;
  cs.reserve(resolution * resolution);
  const double dx = c_window.width() / static_cast<double>(resolution);
  const double dy = c_window.height() / static_cast<double>(resolution);
  for (std::size_t iy = 0; iy < resolution; ++iy) {
    for (std::size_t ix = 0; ix < resolution; ++ix) {
      cs.emplace_back(c_window.re_min + (static_cast<double>(ix) + 0.5) * dx,
                      c_window.im_min + (static_cast<double>(iy) + 0.5) * dy);
    }
  }
  return sample_curve(s, cs);
}

}  // namespace bifcc
