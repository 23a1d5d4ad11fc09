#include "bifcc/wringing.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "bifcc/parallel.hpp"

namespace bifcc {

WringU wring_compose(const WringU& u1, const WringU& u2) {
  return {u1.s * u2.s, u1.t * u2.s + u2.t};
}

cplx g_u(const WringU& u, cplx z) {
  if (!(u.s > 0.0)) throw DomainError("g_u: s must be positive");
  const double modulus = std::abs(z);
  if (!(modulus > 1.0)) throw DomainError("g_u: requires |z| > 1");
  const double log_mod = std::log(modulus);
  return z * std::exp(cplx(u.s - 1.0, u.t) * log_mod);
}

std::string describe(const LeafConstraint& constraint) {
  struct Visitor {
    std::string operator()(const NoConstraint&) const { return "none"; }
    std::string operator()(const PerConstraint& c) const {
      return "per-" + to_string(c.spec.sign) + "-" + std::to_string(c.spec.n) + "-" +
             std::to_string(c.spec.k);
    }
    std::string operator()(const MultiplierConstraint& c) const {
      return "multiplier-period-" + std::to_string(c.period);
    }
  };
  return std::visit(Visitor{}, constraint);
}

std::vector<WringU> real_path(double s_end, int steps) {
  std::vector<WringU> path;
  for (int i = 1; i <= steps; ++i) {
    path.push_back({1.0 + (s_end - 1.0) * i / steps, 0.0});
  }
  return path;
}

std::vector<WringU> rotation_path(double t_end, int steps) {
  std::vector<WringU> path;
  for (int i = 1; i <= steps; ++i) path.push_back({1.0, t_end * i / steps});
  return path;
}

namespace {

double param_norm(const CubicParam& p) { return std::hypot(std::abs(p.c), std::abs(p.v)); }

// The held quantity of a constraint, tracking the cycle point for
// multiplier constraints between evaluations.
class HeldInvariant {
 public:
  explicit HeldInvariant(const LeafConstraint& constraint) : constraint_(constraint) {
    if (const auto* m = std::get_if<MultiplierConstraint>(&constraint_)) cycle_point_ = m->cycle_point;
  }

  bool active() const { return !std::holds_alternative<NoConstraint>(constraint_); }

  cplx value(const CubicParam& p) const {
    if (const auto* per = std::get_if<PerConstraint>(&constraint_)) return per_jet(per->spec, p).value;
    if (const auto* m = std::get_if<MultiplierConstraint>(&constraint_)) {
      return refine_cycle(p, cycle_point_, m->period).multiplier;
    }
    return {};
  }

  // Partial derivatives in (c, v).
  std::array<cplx, 2> gradient(const CubicParam& p) const {
    if (const auto* per = std::get_if<PerConstraint>(&constraint_)) {
      const PerJet jet = per_jet(per->spec, p);
      return {jet.d_c, jet.d_v};
    }
    if (std::holds_alternative<MultiplierConstraint>(constraint_)) {
      const double h = 1e-6 * (1.0 + param_norm(p));
      const cplx dc = (value({p.c + h, p.v}) - value({p.c - h, p.v})) / (2.0 * h);
      const cplx dv = (value({p.c, p.v + h}) - value({p.c, p.v - h})) / (2.0 * h);
      return {dc, dv};
    }
    return {};
  }

  void accept(const CubicParam& p) {
    if (const auto* m = std::get_if<MultiplierConstraint>(&constraint_)) {
      cycle_point_ = refine_cycle(p, cycle_point_, m->period).points.front();
    }
  }

 private:
  LeafConstraint constraint_;
  cplx cycle_point_{};
};

struct Residual {
  cplx phi{};
  cplx held{};
  PhiMinusValue phi_value;
  double norm() const { return std::hypot(std::abs(phi), std::abs(held)); }
};

class LeafSolver {
 public:
  LeafSolver(const HeldInvariant& held, cplx held_target, double tolerance)
      : held_(held), held_target_(held_target), tolerance_(tolerance) {}

  Residual residual(const CubicParam& p, cplx target, const PhiMinusValue& ref) const {
    Residual r;
    r.phi_value = phi_minus(p, ref);
    r.phi = r.phi_value.value - target;
    if (held_.active()) r.held = held_.value(p) - held_target_;
    return r;
  }

  // Damped Newton; returns the solution or nothing on stagnation.
  std::optional<std::pair<CubicParam, Residual>> solve(CubicParam p, cplx target,
                                                       const PhiMinusValue& ref) const {
    Residual r = residual(p, target, ref);
    const double scale = 1.0 + std::abs(target);
    for (int it = 0; it < 40; ++it) {
      if (r.norm() <= tolerance_ * scale) return std::pair{p, r};
      const double h = 1e-6 * (1.0 + param_norm(p));
      const cplx phi_c = (phi_minus({p.c + h, p.v}, r.phi_value).value -
                          phi_minus({p.c - h, p.v}, r.phi_value).value) / (2.0 * h);
      const cplx phi_v = (phi_minus({p.c, p.v + h}, r.phi_value).value -
                          phi_minus({p.c, p.v - h}, r.phi_value).value) / (2.0 * h);
      cplx step_c, step_v;
      if (held_.active()) {
        const auto [held_c, held_v] = held_.gradient(p);
        const cplx det = phi_c * held_v - phi_v * held_c;
        if (std::abs(det) == 0.0) return std::nullopt;
        step_c = -(held_v * r.phi - phi_v * r.held) / det;
        step_v = -(-held_c * r.phi + phi_c * r.held) / det;
      } else {
        const double denom = std::norm(phi_c) + std::norm(phi_v);
        if (denom == 0.0) return std::nullopt;
        step_c = -r.phi * std::conj(phi_c) / denom;
        step_v = -r.phi * std::conj(phi_v) / denom;
      }
      double lambda = 1.0;
      bool improved = false;
      for (int d = 0; d < 12; ++d, lambda *= 0.5) {
        const CubicParam trial{p.c + lambda * step_c, p.v + lambda * step_v};
        try {
          Residual rt = residual(trial, target, r.phi_value);
          if (rt.norm() < r.norm()) {
            p = trial;
            r = rt;
            improved = true;
            break;
          }
        } catch (const Error&) {
        }
      }
      if (!improved) {
        if (r.norm() <= 1e3 * tolerance_ * scale) return std::pair{p, r};
        return std::nullopt;
      }
    }
    if (r.norm() <= 1e3 * tolerance_ * scale) return std::pair{p, r};
    return std::nullopt;
  }

 private:
  const HeldInvariant& held_;
  cplx held_target_;
  double tolerance_;
};

}  // namespace

LeafTrace trace_leaf(const CubicParam& base, const std::vector<WringU>& u_path,
                     const LeafConstraint& constraint, const TraceOptions& options) {
  LeafTrace trace;
  trace.base = base;
  trace.constraint = constraint;

  PhiMinusValue phi_base;
  try {
    phi_base = phi_minus(base);
  } catch (const DomainError& e) {
    trace.status = TraceStatus::RegionExit;
    trace.message = e.what();
    return trace;
  }
  HeldInvariant held(constraint);
  const cplx held_target = held.active() ? held.value(base) : cplx{};
  const LeafSolver solver(held, held_target, options.tolerance);

  WringU u_prev = wring_identity();
  CubicParam p_prev = base;
  CubicParam p_prev2 = base;
  bool have_secant = false;
  PhiMinusValue ref = phi_base;

  for (const WringU& u_goal : u_path) {
    const std::size_t before = trace.steps.size();
    int halvings = 0;
    while (!(u_prev == u_goal)) {
      // Walk toward u_goal in steps of 2^-halvings of the remaining gap.
      const double frac = std::ldexp(1.0, -halvings);
      const WringU u_try{u_prev.s + frac * (u_goal.s - u_prev.s),
                         u_prev.t + frac * (u_goal.t - u_prev.t)};
      const WringU u_next = frac == 1.0 ? u_goal : u_try;
      cplx target;
      try {
        target = g_u(u_next, phi_base.value);
      } catch (const DomainError& e) {
        trace.status = TraceStatus::RegionExit;
        trace.message = e.what();
        return trace;
      }
      CubicParam seed = p_prev;
      if (have_secant) {
        seed = {p_prev.c + frac * (p_prev.c - p_prev2.c), p_prev.v + frac * (p_prev.v - p_prev2.v)};
      }
      std::optional<std::pair<CubicParam, Residual>> solved;
      try {
        solved = solver.solve(seed, target, ref);
        if (!solved && have_secant) solved = solver.solve(p_prev, target, ref);
      } catch (const DomainError& e) {
        trace.status = TraceStatus::RegionExit;
        trace.message = e.what();
        return trace;
      } catch (const Error&) {
        solved.reset();
      }
      if (!solved) {
        if (++halvings > options.max_halvings) {
          trace.status = TraceStatus::ContinuationFailure;
          trace.message = "Newton stagnated near s=" + std::to_string(u_next.s) +
                          " t=" + std::to_string(u_next.t);
          return trace;
        }
        continue;
      }
      const auto& [p, r] = *solved;
      held.accept(p);
      p_prev2 = p_prev;
      p_prev = p;
      have_secant = frac == 1.0;
      ref = r.phi_value;
      u_prev = u_next;
      if (u_prev == u_goal) {
        trace.steps.push_back({u_goal, p, std::abs(r.phi), std::abs(r.held)});
      }
      halvings = std::max(0, halvings - 1);
    }
    if (trace.steps.size() == before) {
      // u_goal equals the current point (e.g. the identity at the base).
      Residual r = solver.residual(p_prev, g_u(u_goal, phi_base.value), ref);
      trace.steps.push_back({u_goal, p_prev, std::abs(r.phi), std::abs(r.held)});
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------

double default_k_min() { return std::pow(2.0, 2.0 / 3.0) * 500.0; }

cplx ChartGrid::y_at(std::size_t ix, std::size_t iy) const {
  return {window.re_min + (static_cast<double>(ix) + 0.5) * dy_re(),
          window.im_min + (static_cast<double>(iy) + 0.5) * dy_im()};
}

namespace {

std::optional<std::pair<cplx, double>> solve_chart_point(cplx k, cplx y, cplx x0) {
  const PhiMinusValue ref{k, 0, {}};
  auto eval = [&](cplx x) { return phi_minus(from_near_infinity({x, y}), ref).value - k; };
  cplx x = x0;
  try {
    cplx fx = eval(x);
    for (int it = 0; it < 50; ++it) {
      if (std::abs(fx) <= 1e-11 * std::abs(k)) return std::pair{x, std::abs(fx)};
      const double h = 1e-6 * std::abs(x);
      const cplx slope = (eval(x + h) - eval(x - h)) / (2.0 * h);
      if (slope == cplx{}) return std::nullopt;
      const cplx step = fx / slope;
      double lambda = 1.0;
      bool improved = false;
      for (int d = 0; d < 10; ++d, lambda *= 0.5) {
        const cplx trial = x - lambda * step;
        try {
          const cplx ft = eval(trial);
          if (std::abs(ft) < std::abs(fx)) {
            x = trial;
            fx = ft;
            improved = true;
            break;
          }
        } catch (const Error&) {
        }
      }
      if (!improved) break;
    }
    if (std::abs(fx) <= 1e-9 * std::abs(k)) return std::pair{x, std::abs(fx)};
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

Transversal transversal_disk(cplx k, const ChartGrid& grid, std::optional<cplx> x_seed, double k_min) {
  if (std::abs(k) < k_min) throw DomainError("transversal_disk: |k| below k_min");
  if (grid.resolution < 2) throw DomainError("transversal_disk: resolution must be >= 2");
  Transversal t;
  t.k = k;
  t.grid = grid;
  const std::size_t n = grid.resolution;
  t.x.assign(grid.size(), cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
  t.residual.assign(grid.size(), std::numeric_limits<double>::infinity());
  const cplx analytic = x_seed.value_or(std::pow(2.0, 2.0 / 3.0) / k);

  // Each row is continued from its first point; rows are independent.
  parallel_for(n, [&](std::size_t iy) {
    std::optional<cplx> previous;
    for (std::size_t ix = 0; ix < n; ++ix) {
      const std::size_t i = iy * n + ix;
      const cplx y = grid.y_at(ix, iy);
      auto result = solve_chart_point(k, y, previous.value_or(analytic));
      if (!result && previous) result = solve_chart_point(k, y, analytic);
      if (result) {
        t.x[i] = result->first;
        t.residual[i] = result->second;
        previous = result->first;
      }
    }
  });

  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!t.has(i)) continue;
    ++t.solved;
    t.x_radius = std::max(t.x_radius, std::abs(t.x[i]));
    const std::size_t ix = i % n;
    const std::size_t iy = i / n;
    if (ix + 1 < n && t.has(i + 1)) {
      t.lipschitz = std::max(t.lipschitz, std::abs(t.x[i + 1] - t.x[i]) / grid.dy_re());
    }
    if (iy + 1 < n && t.has(i + n)) {
      t.lipschitz = std::max(t.lipschitz, std::abs(t.x[i + n] - t.x[i]) / grid.dy_im());
    }
  }
  return t;
}

double chart_distance(const Transversal& a, const Transversal& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    if (!a.has(i)) continue;
    const cplx ya = a.grid.y_of(i);
    for (std::size_t j = 0; j < b.x.size(); ++j) {
      if (!b.has(j)) continue;
      const double d = std::hypot(std::abs(a.x[i] - b.x[j]), std::abs(ya - b.grid.y_of(j)));
      best = std::min(best, d);
    }
  }
  return best;
}

}  // namespace bifcc
