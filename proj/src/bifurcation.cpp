#include "bifcc/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <array>
#include <functional>
#include <numbers>
#include <optional>

#include "bifcc/parallel.hpp"
#include "bifcc/polynomial.hpp"

namespace bifcc {

namespace {

constexpr double kEliminationRadius = 2.0;

double pow3(int e) { return std::pow(3.0, e); }

struct Jacobian {
  cplx f, g;          // values
  cplx fc, fv, gc, gv;
};

Jacobian jacobian(const PerSpec& a, const PerSpec& b, const CubicParam& p) {
  const PerJet ja = per_jet(a, p);
  const PerJet jb = per_jet(b, p);
  return {ja.value, jb.value, ja.d_c, ja.d_v, jb.d_c, jb.d_v};
}

double condition_number(const Jacobian& j) {
  // singular values of [[fc, fv], [gc, gv]] from the eigenvalues of J^H J
  const double a = std::norm(j.fc) + std::norm(j.gc);
  const double d = std::norm(j.fv) + std::norm(j.gv);
  const double b = std::abs(std::conj(j.fc) * j.fv + std::conj(j.gc) * j.gv);
  const double mean = 0.5 * (a + d);
  const double spread = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + b * b));
  const double hi = mean + spread;
  const double lo = std::max(0.0, mean - spread);
  if (lo <= hi * 1e-300 || lo == 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(hi / lo);
}

double residual_norm(const Jacobian& j) { return std::hypot(std::abs(j.f), std::abs(j.g)); }

std::optional<CubicParam> newton_step(const PerSpec& a, const PerSpec& b, const CubicParam& p) {
  const Jacobian j = jacobian(a, b, p);
  const cplx det = j.fc * j.gv - j.fv * j.gc;
  if (det == cplx{} || !std::isfinite(std::abs(det))) return std::nullopt;
  const cplx dc = (-j.f * j.gv + j.fv * j.g) / det;
  const cplx dv = (-j.fc * j.g + j.gc * j.f) / det;
  return CubicParam{p.c + dc, p.v + dv};
}

CubicParam polish(const PerSpec& a, const PerSpec& b, CubicParam p, int iterations = 60) {
  double current = residual_norm(jacobian(a, b, p));
  for (int it = 0; it < iterations && current > 0.0; ++it) {
    const auto full = newton_step(a, b, p);
    if (!full) break;
    const cplx dc = full->c - p.c;
    const cplx dv = full->v - p.v;
    double lambda = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 12; ++halving, lambda *= 0.5) {
      const CubicParam trial{p.c + lambda * dc, p.v + lambda * dv};
      const double r = residual_norm(jacobian(a, b, trial));
      if (r < current) {
        p = trial;
        current = r;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    if (std::hypot(std::abs(dc), std::abs(dv)) <= 1e-15 * (1.0 + std::abs(p.c) + std::abs(p.v))) break;
  }
  return p;
}

struct EliminantSample {
  double log_modulus = 0.0;
  cplx phase{1.0, 0.0};
  cplx log_derivative{};  // R'/R, only when asked for
};

// Optional restriction of the eliminant to the v-roots within radius of v0.
struct Tube {
  cplx v0;
  double radius;
};

EliminantSample eliminant(const PerSpec& first, const PerSpec& second, cplx c,
                          const std::optional<Tube>& tube = std::nullopt, bool derivative = false) {
  EliminantSample s;
  const std::vector<VRoot> roots = v_roots_on_line(first, c);
  for (const VRoot& r : roots) {
    // A double root comes back split by about sqrt(eps); its mean is accurate.
    cplx v = r.v;
    if (r.multiplicity > 1) {
      cplx sum{};
      int k = 0;
      for (const VRoot& o : roots) {
        if (std::abs(o.v - r.v) <= 1e-6 * (1.0 + std::abs(r.v))) {
          sum += o.v;
          ++k;
        }
      }
      v = sum / static_cast<double>(k);
    }
    if (tube && !(std::abs(v - tube->v0) < tube->radius)) continue;
    cplx g;
    if (derivative) {
      const PerJet jg = per_jet(second, {c, v});
      g = jg.value;
      if (!std::isfinite(std::abs(g))) throw ConvergenceError("intersect_curves: eliminant overflows");
      if (g != cplx{}) {
        cplx dg = jg.d_c;
        // v moves with c along the first curve; clustered roots have no
        // usable slope, so their term is left out of this rough estimate
        if (r.multiplicity == 1) {
          const PerJet jf = per_jet(first, {c, v});
          if (jf.d_v != cplx{}) dg -= jg.d_v * jf.d_c / jf.d_v;
        }
        s.log_derivative += dg / g;
      }
    } else {
      const PerValue pv = per_value(second, {c, v});
      if (pv.overflow) throw ConvergenceError("intersect_curves: eliminant overflows");
      g = pv.value;
    }
    const double m = std::abs(g);
    if (m == 0.0) {
      s.log_modulus = -std::numeric_limits<double>::infinity();
      return s;
    }
    s.log_modulus += std::log(m);
    s.phase *= g / m;
  }
  return s;
}

std::vector<std::vector<std::size_t>> cluster_points(const std::vector<CubicParam>& pts, double radius) {
  std::vector<int> group(pts.size(), -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (group[i] >= 0) continue;
    group[i] = static_cast<int>(out.size());
    out.push_back({i});
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t j = stack.back();
      stack.pop_back();
      for (std::size_t q = 0; q < pts.size(); ++q) {
        const double scale = 1.0 + std::abs(pts[j].c) + std::abs(pts[j].v);
        if (group[q] < 0 && distance(pts[q], pts[j]) <= radius * scale) {
          group[q] = group[i];
          out.back().push_back(q);
          stack.push_back(q);
        }
      }
    }
  }
  return out;
}

/// Winding number of the eliminant around the circle; -1 if it vanishes there.
int local_root_count(const PerSpec& first, const PerSpec& second, cplx centre, double radius,
                     std::size_t nodes = 256, const std::optional<Tube>& tube = std::nullopt) {
  const double step = 2.0 * std::numbers::pi / static_cast<double>(nodes);
  std::vector<cplx> phase(nodes);
  for (std::size_t m = 0; m < nodes; ++m) {
    const EliminantSample s =
        eliminant(first, second, centre + std::polar(radius, step * static_cast<double>(m)), tube);
    if (!std::isfinite(s.log_modulus)) return -1;
    phase[m] = s.phase;
  }
  double winding = 0.0;
  for (std::size_t m = 0; m < nodes; ++m) winding += std::arg(phase[(m + 1) % nodes] / phase[m]);
  return static_cast<int>(std::lround(winding / (2.0 * std::numbers::pi)));
}

// ---------------------------------------------------------------------------
// Argument-principle search for the roots of the eliminant in c.

// Search square; c = 0 sits at the centre of a cell after kFibreLevel
// halvings, so no split line comes near it.
constexpr double kSquareSide = 4.1;
constexpr int kFibreLevel = 6;
constexpr double kFibreSide = kSquareSide / (1 << kFibreLevel);
static_assert(kFibreSide > 2.0 * kDegenerateDisk);
constexpr double kSquareCorner = -((1 << (kFibreLevel - 1)) + 0.5) * kFibreSide;
// A single root is polished by Newton once its square is this small.
constexpr double kNewtonSide = 0.25;
// Multiple roots are not resolved below this size.
constexpr double kClusterSide = 1e-3;
constexpr int kEdgeDepth = 30;

struct Rect {
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  int count = 0;
  double size() const { return std::max(x1 - x0, y1 - y0); }
  cplx centre() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool contains(cplx z, double margin = 0.0) const {
    return z.real() >= x0 - margin && z.real() <= x1 + margin && z.imag() >= y0 - margin &&
           z.imag() <= y1 + margin;
  }
};

struct Leaf {
  cplx centre;
  double size = 0.0;
  int count = 0;
  bool fibre = false;
  std::optional<CubicParam> simple;  // polished point of a count-1 leaf
};

// Samples along quadtree edges, shared between neighbouring and nested
// rectangles.
class EdgeCache {
 public:
  EdgeCache(const PerSpec& first, const PerSpec& second) : first_(first), second_(second) {}

  /// Eliminant with |R'/R| at c; nothing when R vanishes there.
  std::optional<EliminantSample> at(cplx c) {
    const auto key = std::make_pair(std::llround(c.real() * 0x1p40), std::llround(c.imag() * 0x1p40));
    {
      std::lock_guard<std::mutex> lock(mutex_);
      const auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    std::optional<EliminantSample> s = eliminant(first_, second_, c, std::nullopt, true);
    if (!std::isfinite(s->log_modulus)) s.reset();
    std::lock_guard<std::mutex> lock(mutex_);
    memo_.emplace(key, s);
    return s;
  }

  const PerSpec& first() const { return first_; }
  const PerSpec& second() const { return second_; }

 private:
  const PerSpec& first_;
  const PerSpec& second_;
  std::mutex mutex_;
  std::map<std::pair<long long, long long>, std::optional<EliminantSample>> memo_;
};

// Change of arg R along the segment a -> b. A segment is accepted once its
// length times |R'/R| at both ends is below 1, so a root near the segment
// always forces a split; nothing when R vanishes on the segment.
std::optional<double> edge_arg(EdgeCache& cache, cplx a, cplx b) {
  constexpr int kBase = 8;
  const double length = std::abs(b - a);
  std::vector<EliminantSample> base(kBase + 1);
  for (int i = 0; i <= kBase; ++i) {
    const auto s = cache.at(a + (b - a) * (static_cast<double>(i) / kBase));
    if (!s) return std::nullopt;
    base[i] = *s;
  }
  std::function<std::optional<double>(double, const EliminantSample&, double, const EliminantSample&, int)>
      segment = [&](double ta, const EliminantSample& sa, double tb, const EliminantSample& sb,
                    int depth) -> std::optional<double> {
    const double d = std::arg(sb.phase / sa.phase);
    const double reach =
        (tb - ta) * length * std::max(std::abs(sa.log_derivative), std::abs(sb.log_derivative));
    if (std::abs(d) <= std::numbers::pi / 4 && reach <= 1.0) return d;
    if (depth == kEdgeDepth) return std::nullopt;
    const double tm = 0.5 * (ta + tb);
    const auto sm = cache.at(a + (b - a) * tm);
    if (!sm) return std::nullopt;
    const auto left = segment(ta, sa, tm, *sm, depth + 1);
    if (!left) return std::nullopt;
    const auto right = segment(tm, *sm, tb, sb, depth + 1);
    if (!right) return std::nullopt;
    return *left + *right;
  };
  double total = 0.0;
  for (int i = 0; i < kBase; ++i) {
    const auto part = segment(static_cast<double>(i) / kBase, base[i], static_cast<double>(i + 1) / kBase,
                              base[i + 1], 0);
    if (!part) return std::nullopt;
    total += *part;
  }
  return total;
}

// Number of roots of R inside the rectangle, from the winding along its boundary.
std::optional<int> rect_count(EdgeCache& cache, const Rect& r) {
  const cplx z[4] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const auto part = edge_arg(cache, z[e], z[(e + 1) % 4]);
    if (!part) return std::nullopt;
    total += *part;
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const long rounded = std::lround(turns);
  if (std::abs(turns - static_cast<double>(rounded)) > 0.1 || rounded < 0) return std::nullopt;
  return static_cast<int>(rounded);
}

// v-root of the first curve over c where the second curve is smallest.
cplx best_v(const PerSpec& first, const PerSpec& second, cplx c) {
  cplx v{};
  double best = std::numeric_limits<double>::infinity();
  for (const VRoot& r : v_roots_on_line(first, c)) {
    const double g = std::abs(per_value(second, {c, r.v}).value);
    if (g < best) {
      best = g;
      v = r.v;
    }
  }
  return v;
}

// Four children split at fraction f of each side; nothing if a count fails
// or the counts do not add up.
std::optional<std::array<Rect, 4>> split(EdgeCache& cache, const Rect& r, double f) {
  const double xm = r.x0 + f * (r.x1 - r.x0);
  const double ym = r.y0 + f * (r.y1 - r.y0);
  std::array<Rect, 4> kids{Rect{r.x0, xm, r.y0, ym}, Rect{xm, r.x1, r.y0, ym}, Rect{r.x0, xm, ym, r.y1},
                           Rect{xm, r.x1, ym, r.y1}};
  int sum = 0;
  for (Rect& k : kids) {
    const auto n = rect_count(cache, k);
    if (!n) return std::nullopt;
    k.count = *n;
    sum += k.count;
  }
  if (sum != r.count) return std::nullopt;
  return kids;
}

// Quadtree on the eliminant: simple roots end polished, multiple ones as
// small rectangles, and everything near c = 0 in one fibre leaf.
std::vector<Leaf> locate_roots(const PerSpec& first, const PerSpec& second, int affine) {
  Rect root{kSquareCorner, kSquareCorner + kSquareSide, kSquareCorner, kSquareCorner + kSquareSide};
  EdgeCache cache(first, second);
  const auto n = rect_count(cache, root);
  if (!n || *n != affine) throw ConvergenceError("intersect_curves: search square misses roots");
  root.count = *n;

  std::vector<Leaf> leaves;
  std::vector<Rect> active{root};
  while (!active.empty()) {
    std::vector<std::optional<CubicParam>> newton(active.size());
    std::vector<std::optional<std::array<Rect, 4>>> kids(active.size());
    std::vector<int> kind(active.size(), 0);  // 0 split, 1 fibre, 2 cluster
    for (std::size_t i = 0; i < active.size(); ++i) {
      const Rect& r = active[i];
      if (r.contains(0.0) && r.size() <= 1.001 * kFibreSide) kind[i] = 1;
      else if (r.size() <= kClusterSide) kind[i] = 2;
    }
    parallel_for(active.size(), [&](std::size_t i) {
      if (kind[i] != 0) return;
      const Rect& r = active[i];
      if (r.count == 1 && r.size() <= kNewtonSide && !r.contains(0.0, kFibreSide)) {
        const cplx c = r.centre();
        const CubicParam p = polish(first, second, {c, best_v(first, second, c)});
        const Jacobian j = jacobian(first, second, p);
        const double scale = 1.0 + std::abs(p.c) + std::abs(p.v);
        if (r.contains(p.c) && residual_norm(j) <= 1e-9 * std::pow(scale, 6)) {
          newton[i] = p;
          return;
        }
      }
      for (double f : {0.5, 0.4631, 0.5377}) {
        kids[i] = split(cache, r, f);
        if (kids[i]) break;
      }
    });
    std::vector<Rect> next;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const Rect& r = active[i];
      if (newton[i]) {
        leaves.push_back({newton[i]->c, r.size(), 1, false, newton[i]});
      } else if (kind[i] == 0 && kids[i]) {
        for (const Rect& k : *kids[i]) {
          if (k.count > 0) next.push_back(k);
        }
      } else {
        leaves.push_back({r.centre(), r.size(), r.count, kind[i] == 1, std::nullopt});
      }
    }
    active = std::move(next);
  }

  // Noise around a multiple root can split it over neighbouring cells.
  std::vector<Leaf> merged;
  for (const Leaf& leaf : leaves) {
    if (leaf.simple) {
      merged.push_back(leaf);
      continue;
    }
    Leaf* into = nullptr;
    for (Leaf& m : merged) {
      if (!m.simple && m.fibre == leaf.fibre && std::abs(m.centre - leaf.centre) <= kUnresolvedRadius) into = &m;
    }
    if (!into) {
      merged.push_back(leaf);
      continue;
    }
    const double w = static_cast<double>(into->count) + leaf.count;
    into->centre = (into->centre * static_cast<double>(into->count) + leaf.centre * static_cast<double>(leaf.count)) / w;
    into->count += leaf.count;
    into->size = std::max(into->size, leaf.size);
  }
  // Two simple leaves polished onto the same point are one multiple point.
  std::vector<Leaf> out;
  for (const Leaf& leaf : merged) {
    bool absorbed = false;
    for (Leaf& o : out) {
      if (leaf.simple && o.simple && distance(*leaf.simple, *o.simple) <= 1e-8) {
        o.count += leaf.count;
        o.simple.reset();
        absorbed = true;
        break;
      }
    }
    if (!absorbed) out.push_back(leaf);
  }
  return out;
}

// Points over a multiple root c: each distinct v-root of the first curve
// gets the winding of its own factor of the eliminant.
std::vector<IntersectionPoint> split_by_v(const PerSpec& first, const PerSpec& second, cplx c, double radius,
                                          int count, std::size_t nodes) {
  std::vector<CubicParam> roots;
  for (const VRoot& r : v_roots_on_line(first, c)) roots.push_back({c, r.v});
  std::vector<CubicParam> distinct;
  for (const auto& g : cluster_points(roots, 1e-3)) {
    cplx v{};
    for (std::size_t i : g) v += roots[i].v;
    distinct.push_back({c, v / static_cast<double>(g.size())});
  }
  std::vector<IntersectionPoint> out;
  int total = 0;
  for (const CubicParam& p : distinct) {
    double gap = std::numeric_limits<double>::infinity();
    for (const CubicParam& q : distinct) {
      if (q.v != p.v) gap = std::min(gap, std::abs(q.v - p.v));
    }
    const double tube = std::isfinite(gap) ? 0.5 * gap : 1e300;
    const int k = local_root_count(first, second, c, radius, nodes, Tube{p.v, tube});
    if (k <= 0) continue;
    IntersectionPoint q;
    q.p = p;
    q.multiplicity = k;
    out.push_back(q);
    total += k;
  }
  if (total == count) return out;
  // The factors did not separate; keep one point at the best v.
  IntersectionPoint q;
  q.p = {c, best_v(first, second, c)};
  q.multiplicity = count;
  return {q};
}

bool param_less(const CubicParam& a, const CubicParam& b) {
  auto key = [](const CubicParam& p) {
    auto r = [](double x) { return std::round(x * 1e9) / 1e9; };
    return std::array<double, 4>{r(p.c.real()), r(p.c.imag()), r(p.v.real()), r(p.v.imag())};
  };
  return key(a) < key(b);
}

struct Landing {
  cplx multiplier{};
  int period = 0;
  bool strict = false;
};

Landing classify_orbit(const CubicParam& p, cplx critical, int n, int k) {
  cplx z = critical;
  for (int j = 0; j < k; ++j) z = eval_poly(p, z);
  Landing out;
  try {
    const Cycle cycle = refine_cycle(p, z, n - k);
    out.multiplier = cycle.multiplier;
    out.period = cycle.period;
    bool on_cycle = false;
    for (const cplx& w : cycle.points) on_cycle = on_cycle || std::abs(w - critical) <= 1e-7;
    out.strict = !on_cycle && std::abs(cycle.multiplier) > 1.0;
  } catch (const ConvergenceError&) {
    out.multiplier = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  }
  return out;
}

}  // namespace

Intersection intersect_curves(const PerSpec& first, const PerSpec& second) {
  first.validate();
  second.validate();
  Intersection out;
  out.first = first;
  out.second = second;
  out.bezout = first.total_degree() * second.total_degree();

  // Enough nodes that the phase moves by well under pi between neighbours.
  const std::size_t nodes = 4 * static_cast<std::size_t>(out.bezout) + 16;
  const double step = 2.0 * std::numbers::pi / static_cast<double>(nodes);
  std::vector<EliminantSample> samples(nodes);
  parallel_for(nodes, [&](std::size_t m) {
    samples[m] = eliminant(first, second, std::polar(kEliminationRadius, step * static_cast<double>(m)));
  });
  double winding = 0.0;
  for (std::size_t m = 0; m < nodes; ++m) {
    if (!std::isfinite(samples[m].log_modulus)) {
      throw ConvergenceError("intersect_curves: intersection on the sampling circle");
    }
    winding += std::arg(samples[(m + 1) % nodes].phase / samples[m].phase);
  }
  const int affine = static_cast<int>(std::lround(winding / (2.0 * std::numbers::pi)));
  if (affine < 0 || affine > out.bezout) throw ConvergenceError("intersect_curves: bad root count");
  out.affine = affine;
  if (affine == 0) return out;

  const std::size_t local_nodes = 8 * static_cast<std::size_t>(affine) + 64;
  std::vector<Leaf> leaves = locate_roots(first, second, affine);
  std::vector<IntersectionPoint> points;
  std::vector<Leaf> multiple;
  for (const Leaf& leaf : leaves) {
    if (leaf.simple) {
      IntersectionPoint q;
      q.p = *leaf.simple;
      points.push_back(q);
    } else {
      multiple.push_back(leaf);
    }
  }

  for (const Leaf& leaf : multiple) {
    double gap = std::numeric_limits<double>::infinity();
    for (const Leaf& other : leaves) {
      const cplx oc = other.simple ? other.simple->c : other.centre;
      if (&other != &leaf && std::abs(oc - leaf.centre) > 0.0) gap = std::min(gap, std::abs(oc - leaf.centre));
    }
    const cplx c = leaf.fibre ? cplx{} : leaf.centre;
    const double radius = leaf.fibre ? kDegenerateDisk : std::min(kUnresolvedRadius, 0.4 * gap);
    for (IntersectionPoint q : split_by_v(first, second, c, radius, leaf.count, local_nodes)) {
      if (!leaf.fibre) {
        // non-reduced components make Newton linear here; keep the result only
        // if it stays near the cluster
        const CubicParam polished = polish(first, second, q.p, 400);
        if (std::abs(polished.c - q.p.c) <= radius) q.p = polished;
      }
      points.push_back(q);
    }
  }

  for (IntersectionPoint& point : points) {
    const Jacobian j = jacobian(first, second, point.p);
    point.residuals = {std::abs(j.f), std::abs(j.g)};
    point.condition = condition_number(j);
    point.flagged = std::abs(point.p.c) < kDegenerateRadius;
    out.points.push_back(point);
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const IntersectionPoint& a, const IntersectionPoint& b) { return param_less(a.p, b.p); });
  return out;
}

void MisiurewiczSpec::validate() const {
  if (n < 1 || m < 1 || k < 0 || l < 0 || k >= n || l >= m) {
    throw DomainError("MisiurewiczSpec: require 0 <= k < n and 0 <= l < m");
  }
  if (n + m > 8) throw DomainError("MisiurewiczSpec: n + m <= 8");
}

MisiurewiczReport misiurewicz_solve(const MisiurewiczSpec& spec, const std::optional<Region>& region) {
  spec.validate();
  MisiurewiczReport report;
  report.spec = spec;
  const Intersection inter = intersect_curves(spec.plus(), spec.minus());
  for (const IntersectionPoint& point : inter.points) {
    if (region && !region->contains(point.p.c)) continue;
    if (!(std::max(point.residuals[0], point.residuals[1]) < kMisiurewiczResidual)) {
      ++report.unconverged;
      continue;
    }
    bool duplicate = false;
    for (const auto& other : report.candidates) {
      duplicate = duplicate || distance(other.p, point.p) <= 1e-7;
    }
    if (duplicate) {
      ++report.merged;
      continue;
    }
    MisiurewiczCandidate cand;
    cand.p = point.p;
    cand.spec = spec;
    cand.residuals = point.residuals;
    cand.multiplicity = point.multiplicity;
    cand.condition = point.condition;
    const Landing plus = classify_orbit(point.p, point.p.c, spec.n, spec.k);
    const Landing minus = classify_orbit(point.p, -point.p.c, spec.m, spec.l);
    cand.plus_multiplier = plus.multiplier;
    cand.minus_multiplier = minus.multiplier;
    cand.plus_period = plus.period;
    cand.minus_period = minus.period;
    cand.strict = {plus.strict, minus.strict};
    cand.flagged = point.flagged;
    report.candidates.push_back(cand);
  }
  return report;
}

std::vector<MisiurewiczCandidate> misiurewicz_points(const MisiurewiczReport& report) {
  std::vector<MisiurewiczCandidate> out;
  for (const auto& c : report.candidates) {
    if (c.is_misiurewicz()) out.push_back(c);
  }
  return out;
}

std::array<double, 2> newton_recheck(const MisiurewiczCandidate& candidate) {
  const PerSpec a = candidate.spec.plus();
  const PerSpec b = candidate.spec.minus();
  CubicParam p = candidate.p;
  if (const auto next = newton_step(a, b, p)) p = *next;
  const Jacobian j = jacobian(a, b, p);
  return {std::abs(j.f), std::abs(j.g)};
}

IntersectionEstimate mu_bif_intersection_estimate(int n_max, const std::optional<Region>& region) {
  if (n_max < 1 || n_max > 4) throw DomainError("mu_bif_intersection_estimate: 1 <= n_max <= 4");
  IntersectionEstimate est;
  est.n_max = n_max;
  for (int n = 1; n <= n_max; ++n) {
    for (int m = 1; m <= n_max; ++m) {
      PairEstimate pair;
      pair.plus = {Sign::Plus, n, n - 1};
      pair.minus = {Sign::Minus, m, m - 1};
      pair.weight = 1.0 / pow3(n + m);
      pair.bezout_cap = pow3(n - 1) * pow3(m) * pair.weight;
      const Intersection inter = intersect_curves(pair.plus, pair.minus);
      pair.escaped = inter.bezout - inter.affine;
      CompensatedSum total;
      CompensatedSum unflagged;
      for (const IntersectionPoint& point : inter.points) {
        if (region && !region->contains(point.p.c)) continue;
        pair.points.push_back(point);
        total.add(point.multiplicity * pair.weight);
        if (!point.flagged) unflagged.add(point.multiplicity * pair.weight);
      }
      pair.total = total.value();
      pair.total_without_flagged = unflagged.value();
      if (n == n_max && m == n_max) {
        est.total = pair.total;
        est.total_without_flagged = pair.total_without_flagged;
      }
      est.pairs.push_back(std::move(pair));
    }
  }
  return est;
}

double max_green(const CubicParam& p) {
  return std::max(green_plus(p).value, green_minus(p).value);
}

int default_smoothing(std::size_t resolution) {
  return static_cast<int>((kDefaultSmoothing * resolution + kSmoothingReference / 2) / kSmoothingReference);
}

MongeAmpereGrid monge_ampere_grid(const std::function<double(const CubicParam&)>& u,
                                  const Region4& region, std::size_t resolution, int smoothing) {
  if (resolution < 16) throw DomainError("monge_ampere_grid: resolution >= 16");
  if (resolution > kMaxGrid4) throw ResolutionError("monge_ampere_grid: grid above 64^4 cells");
  if (smoothing == kScaledSmoothing) smoothing = default_smoothing(resolution);
  if (smoothing < 0) throw DomainError("monge_ampere_grid: smoothing >= 0");
  const std::size_t r = resolution;
  const std::size_t s = static_cast<std::size_t>(smoothing);
  const std::size_t pad = s + 1;
  const std::size_t len = r + 2 * pad;
  const std::array<double, 4> h = {region.c.width() / r, region.c.height() / r,
                                   region.v.width() / r, region.v.height() / r};
  const std::array<double, 4> lo = {region.c.re_min, region.c.im_min, region.v.re_min, region.v.im_min};
  const std::array<std::size_t, 4> stride = {1, len, len * len, len * len * len};
  const std::size_t total_points = stride[3] * len;

  std::vector<double> field(total_points);
  parallel_for(total_points, [&](std::size_t i) {
    std::array<double, 4> x{};
    std::size_t rest = i;
    for (int a = 0; a < 4; ++a) {
      const double idx = static_cast<double>(rest % len) - static_cast<double>(pad);
      rest /= len;
      x[a] = lo[a] + (idx + 0.5) * h[a];
    }
    field[i] = u({{x[0], x[1]}, {x[2], x[3]}});
  });

  // Separable box average; values within s of an edge along a smoothed
  // axis are left as they are and never read below.
  if (s > 0) {
    const double inv = 1.0 / static_cast<double>(2 * s + 1);
    for (int a = 0; a < 4; ++a) {
      const std::size_t lines = total_points / len;
      parallel_for(lines, [&](std::size_t line) {
        // decompose line index into the base offset with axis a fixed at 0
        std::size_t base = 0;
        std::size_t rest = line;
        for (int b = 0; b < 4; ++b) {
          if (b == a) continue;
          base += (rest % len) * stride[b];
          rest /= len;
        }
        std::vector<double> in(len);
        for (std::size_t t = 0; t < len; ++t) in[t] = field[base + t * stride[a]];
        for (std::size_t t = s; t + s < len; ++t) {
          double acc = 0.0;
          for (std::size_t q = t - s; q <= t + s; ++q) acc += in[q];
          field[base + t * stride[a]] = acc * inv;
        }
      });
    }
  }

  MongeAmpereGrid out;
  out.region = region;
  out.resolution = r;
  out.smoothing = smoothing;
  out.cell_masses.assign(r * r * r * r, 0.0);
  const double volume = h[0] * h[1] * h[2] * h[3];
  const double norm = 8.0 / (std::numbers::pi * std::numbers::pi);
  parallel_for(out.cell_masses.size(), [&](std::size_t cell) {
    std::size_t rest = cell;
    std::size_t centre = 0;
    for (int a = 0; a < 4; ++a) {
      centre += (rest % r + pad) * stride[a];
      rest /= r;
    }
    auto at = [&](int da, int sa, int db, int sb) {
      std::ptrdiff_t off = 0;
      if (da >= 0) off += sa * static_cast<std::ptrdiff_t>(stride[da]);
      if (db >= 0) off += sb * static_cast<std::ptrdiff_t>(stride[db]);
      return field[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(centre) + off)];
    };
    const double u0 = field[centre];
    std::array<std::array<double, 4>, 4> d{};
    for (int a = 0; a < 4; ++a) {
      d[a][a] = (at(a, 1, -1, 0) - 2.0 * u0 + at(a, -1, -1, 0)) / (h[a] * h[a]);
      for (int b = a + 1; b < 4; ++b) {
        d[a][b] = d[b][a] = (at(a, 1, b, 1) - at(a, 1, b, -1) - at(a, -1, b, 1) + at(a, -1, b, -1)) /
                            (4.0 * h[a] * h[b]);
      }
    }
    const double ucc = 0.25 * (d[0][0] + d[1][1]);
    const double uvv = 0.25 * (d[2][2] + d[3][3]);
    const cplx ucv = 0.25 * cplx(d[0][2] + d[1][3], d[0][3] - d[1][2]);
    out.cell_masses[cell] = norm * (ucc * uvv - std::norm(ucv)) * volume;
  });
  CompensatedSum total;
  CompensatedSum clamped;
  for (double& mass : out.cell_masses) {
    if (mass < 0.0) {
      clamped.add(mass);
      mass = 0.0;
    }
    total.add(mass);
  }
  out.total = total.value();
  out.clamped = clamped.value();
  return out;
}

MongeAmpereGrid mu_bif_grid_estimate(const Region4& region, std::size_t resolution, int smoothing) {
  return monge_ampere_grid(max_green, region, resolution, smoothing);
}

}  // namespace bifcc
