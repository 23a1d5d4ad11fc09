#pragma once

// Per+-(n,k) = {(c,v) : f^n(+-c) = f^k(+-c)}.

#include <array>
#include <cstdint>
#include <vector>

#include "bifcc/parameter_plane.hpp"

namespace bifcc {

enum class Sign { Plus, Minus };

std::string to_string(Sign sign);

struct PerSpec {
  Sign sign = Sign::Plus;
  int n = 1;
  int k = 0;

  /// Throws DomainError unless n >= 1 and 0 <= k < n.
  void validate() const;
  cplx critical_point(const CubicParam& p) const { return sign == Sign::Plus ? p.c : -p.c; }
  /// Degree in v of the defining polynomial, 3^{n-1}.
  int v_degree() const;
  /// Total degree in (c, v): 3^{n-1} for plus, 3^n for minus.
  int total_degree() const;
};

struct PerValue {
  /// f^n(+-c) - f^k(+-c); meaningful only when !overflow.
  cplx value{};
  /// log |value|, valid in both cases (-inf when value == 0).
  double log_modulus = 0.0;
  bool overflow = false;
};

PerValue per_value(const PerSpec& s, const CubicParam& p);

/// value together with its partial derivatives in c and v (forward mode).
struct PerJet {
  cplx value{};
  cplx d_c{};
  cplx d_v{};
};

PerJet per_jet(const PerSpec& s, const CubicParam& p);

struct VRoot {
  cplx v{};
  /// Number of returned roots that coincide with this one (1 when simple).
  int multiplicity = 1;
  double residual = 0.0;
};

/// All 3^{n-1} roots in v (with multiplicity) of v -> per_value(s, (c0, v)).
/// Coefficients come from interpolation on the circle of radius max(1, |c0|)
/// about 0 (plus) or -4c0^3 (minus, where the involution puts the roots); the roots
/// are then Newton-polished on the iterated map.
std::vector<VRoot> v_roots_on_line(const PerSpec& s, cplx c0);

/// Degree in t of per_value(s, p0 + t q) along a random line drawn from
/// `seed`. Retries up to 5 lines when the read-off is ambiguous. n <= 5.
int total_degree_check(const PerSpec& s, std::uint64_t seed = 0x5eed);

/// 3^{-n} log |per_value(s, p)|; -inf exactly on the curve.
double equidist_potential(const PerSpec& s, const CubicParam& p);

/// Points of the curve over a list of c values, sorted by input order then
/// root order; every point satisfies |per_value| < 1e-8.
std::vector<CubicParam> sample_curve(const PerSpec& s, const std::vector<cplx>& cs);

/// Same over the centres of a resolution x resolution grid on a c-window.
std::vector<CubicParam> sample_curve(const PerSpec& s, const Region& c_window,
                                     std::size_t resolution);

}  // namespace bifcc
