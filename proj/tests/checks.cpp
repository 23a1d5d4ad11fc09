#include "checks.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "bifcc/bifurcation.hpp"
#include "bifcc/wringing.hpp"
#include "oracles.hpp"

namespace bifcc::checks {

bool Outcome::pass() const {
  for (const Check& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Outcome::summary() const {
  std::string out;
  for (const Check& c : checks) {
    if (!out.empty()) out += "; ";
    out += c.name + (c.pass ? "" : " [x]");
  }
  return out;
}

namespace {

const double k23 = std::pow(2.0, 2.0 / 3.0);
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool within_ulps(cplx a, cplx b, double ulps, double scale) {
  return std::abs(a - b) <= ulps * kEps * scale;
}

void note(Outcome& o, bool ok, const std::string& what) { o.checks.push_back({what, ok}); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Region4 box(cplx c, cplx v, double r) {
  return {{c.real() - r, c.real() + r, c.imag() - r, c.imag() + r},
          {v.real() - r, v.real() + r, v.imag() - r, v.imag() + r}};
}

// ---------------------------------------------------------------------------

}  // namespace

Outcome identities() {
  Outcome o;
  std::mt19937_64 rng(101);
  int bad_poly = 0, bad_inv = 0, bad_swap = 0;
  for (int i = 0; i < 1000; ++i) {
    const CubicParam p{oracle::random_cplx(rng, 4.0), oracle::random_cplx(rng, 4.0)};
    // each identity compares two evaluations of terms of size about |c|^3 + |v|
    const double scale = std::pow(std::abs(p.c), 3) * 8.0 + std::abs(p.v) + 1.0;
    const cplx c3 = p.c * p.c * p.c;
    bad_poly += eval_poly(p, p.c) != p.v;
    bad_poly += !within_ulps(eval_poly(p, -p.c), p.v + 4.0 * c3, 8, scale);
    bad_poly += !within_ulps(eval_poly(p, 2.0 * p.c), eval_poly(p, -p.c), 8, scale);
    bad_poly += !within_ulps(eval_poly(p, -2.0 * p.c), eval_poly(p, p.c), 8, scale);
    const CubicParam back = marking_involution(marking_involution(p));
    bad_inv += back.c != p.c || !within_ulps(back.v, p.v, 8, scale);
    // the involution relabels the same polynomial, so G+ and G- trade places
    const CubicParam q = marking_involution(p);
    const double gp = green_plus(p).value, gm = green_minus(p).value;
    const double qp = green_plus(q).value, qm = green_minus(q).value;
    bad_swap += std::abs(qp - gm) > 8 * kEps * (1 + gm) + 1e-12 || std::abs(qm - gp) > 8 * kEps * (1 + gp) + 1e-12;
  }
  note(o, bad_poly == 0, "polynomial identities off: " + std::to_string(bad_poly));
  note(o, bad_inv == 0, "involution^2 off: " + std::to_string(bad_inv));
  note(o, bad_swap == 0, "G swap off: " + std::to_string(bad_swap));
  return o;
}

Outcome degrees() {
  Outcome o;
  int bad_total = 0, bad_roots = 0;
  std::mt19937_64 rng(102);
  for (int n = 1; n <= 4; ++n) {
    const int d = static_cast<int>(std::lround(std::pow(3.0, n - 1)));
    bad_total += total_degree_check({Sign::Plus, n, 0}) != d;
    bad_total += total_degree_check({Sign::Minus, n, 0}) != 3 * d;
    for (int i = 0; i < 50; ++i) {
      const cplx c0 = oracle::random_cplx(rng, 2.0);
      for (Sign s : {Sign::Plus, Sign::Minus}) {
        bad_roots += static_cast<int>(v_roots_on_line({s, n, 0}, c0).size()) != d;
      }
    }
  }
  note(o, bad_total == 0, "total degree mismatches: " + std::to_string(bad_total));
  note(o, bad_roots == 0, "v-root count mismatches: " + std::to_string(bad_roots));
  return o;
}

Outcome bottcher_asymptotic() {
  Outcome o;
  for (auto [modulus, tol] : {std::pair{1e2, 0.05}, std::pair{1e4, 0.005}}) {
    double worst = 0;
    for (int j = 0; j < 16; ++j) {
      const cplx c = std::polar(modulus, 2 * std::numbers::pi * (j + 0.5) / 16);
      worst = std::max(worst, std::abs(phi_minus({c, 0.0}).value / (k23 * c) - 1.0));
    }
    note(o, worst < tol, "|c|=" + fmt("%g", modulus) + " worst " + fmt("%.2e", worst));
  }
  return o;
}

Outcome kiwi() {
  Outcome o;
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> arg(0, 2 * std::numbers::pi), frac(0, 3);
  double worst_minus = 0, worst_plus = -1e300;
  int samples = 0;
  for (double modulus : {1e2, 1e3, 1e4}) {
    const int count = modulus == 1e4 ? 66 : 67;
    for (int i = 0; i < count; ++i, ++samples) {
      const cplx c = std::polar(modulus, arg(rng));
      const cplx v = std::polar(frac(rng) * modulus, arg(rng));
      // independent long double escape-rate oracle
      const double gm = oracle::green({c, v}, -c), gp = oracle::green({c, v}, c);
      worst_minus = std::max(worst_minus, std::abs(gm - std::log(modulus)));
      worst_plus = std::max(worst_plus, gp - std::log(modulus) / 3.0);
      if (std::abs(green_minus({c, v}).value - gm) > 1e-9 || std::abs(green_plus({c, v}).value - gp) > 1e-9) {
        note(o, false, "library G differs from oracle");
        return o;
      }
    }
  }
  note(o, samples == 200, std::to_string(samples) + " samples");
  note(o, worst_minus <= 1.5, "max |G- - log|c|| " + fmt("%.3f", worst_minus));
  note(o, worst_plus <= 1.5, "max G+ - log|c|/3 " + fmt("%.3f", worst_plus));
  return o;
}

Outcome equidistribution() {
  Outcome o;
  std::mt19937_64 rng(105);
  double fitted = 0;
  int points = 0;
  while (points < 20) {
    const CubicParam p{oracle::random_cplx(rng, 2.0), oracle::random_cplx(rng, 4.0)};
    const double gp = oracle::green(p, p.c), gm = oracle::green(p, -p.c);
    if (gp < 0.05 || gm < 0.05) continue;
    ++points;
    for (int n = 4; n <= 10; ++n) {
      for (int k : {0, n - 1}) {
        const double ep = std::abs(equidist_potential({Sign::Plus, n, k}, p) - gp);
        const double em = std::abs(equidist_potential({Sign::Minus, n, k}, p) - gm);
        fitted = std::max(fitted, std::max(ep, em) * std::pow(3.0, n));
      }
    }
  }
  note(o, fitted < 10, "fitted A " + fmt("%.3f", fitted));
  return o;
}

Outcome wringing() {
  Outcome o;
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> s(0.2, 3.0), t(-2.0, 2.0);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const WringU a{s(rng), t(rng)}, b{s(rng), t(rng)}, c{s(rng), t(rng)};
    bad += !(wring_compose(a, wring_identity()) == a) || !(wring_compose(wring_identity(), a) == a);
    const WringU inv{1.0 / a.s, -a.t / a.s};  // inverse of a
    const WringU e = wring_compose(a, inv);
    bad += std::abs(e.s - 1) > 4 * kEps || std::abs(e.t) > 4 * kEps * (1 + std::abs(a.t));
    const WringU l = wring_compose(wring_compose(a, b), c), r = wring_compose(a, wring_compose(b, c));
    bad += std::abs(l.s - r.s) > 4 * kEps * l.s || std::abs(l.t - r.t) > 4 * kEps * (1 + std::abs(l.t));
    bad += !(wring_compose(a, b).s > 0);
  }
  note(o, bad == 0, "group axiom failures: " + std::to_string(bad));

  const CubicParam base{10.0, 10.0};
  const LeafConstraint held = PerConstraint{{Sign::Plus, 1, 0}};
  const double g0 = green_minus(base).value;
  const auto trace = trace_leaf(base, real_path(2.0, 40), held);
  double worst = 0;
  for (const auto& step : trace.steps) worst = std::max(worst, std::abs(green_minus(step.p).value - step.u.s * g0));
  note(o, trace.status == TraceStatus::Complete && trace.steps.size() == 40,
       "leaf trace " + std::to_string(trace.steps.size()) + " steps");
  note(o, worst < 1e-6, "G- scaling residual " + fmt("%.1e", worst));

  const double m0 = std::abs(phi_minus(base).value);
  const auto arc = trace_leaf(base, rotation_path(1.0, 20), held);
  double drift = 0;
  for (const auto& step : arc.steps) drift = std::max(drift, std::abs(std::abs(phi_minus(step.p).value) / m0 - 1));
  note(o, arc.status == TraceStatus::Complete, "rotation arc " + std::to_string(arc.steps.size()) + " steps");
  note(o, drift < 1e-8, "|phi-| drift " + fmt("%.1e", drift));
  return o;
}

Outcome transversals() {
  Outcome o;
  const ChartGrid grid{{-3, 3, -3, 3}, 64};
  const auto a = transversal_disk(k23 * 1000.0, grid);
  const auto b = transversal_disk(k23 * 1000.0 * cplx(1.0, 0.3), grid);
  note(o, a.success_fraction() >= 0.99, "success " + fmt("%.4f", a.success_fraction()));
  note(o, std::isfinite(a.lipschitz), "Lipschitz " + fmt("%.3g", a.lipschitz));
  note(o, chart_distance(a, b) > 0, "chart distance " + fmt("%.3g", chart_distance(a, b)));
  return o;
}

CylinderRun cylinder_run(std::size_t res) {
  CylinderRun run;
  const auto t = transversal_disk(k23 * 1.5, ChartGrid{{-3, 3, -3, 3}, res}, std::nullopt, 0.0);
  const auto m = transverse_measure(t);
  run.depth2 = cylinder_statistics(t, m, 2);
  run.depth3 = cylinder_statistics(t, m, 3);
  run.periodic.push_back(periodic_fraction(*run.depth2));
  for (int d : {4, 6}) run.periodic.push_back(periodic_fraction(cylinder_statistics(t, m, d)));
  return run;
}

Outcome cylinders(const CylinderRun& run) {
  Outcome o;
  auto check = [&](const CylinderStatistics& st, double tol) {
    for (const auto& [word, f] : st.fractions) {
      const double nu = boost::rational_cast<double>(nu_cylinder_mass(word)) * 3.0 / 2.0;
      note(o, std::abs(f / nu - 1) <= tol, word + " " + fmt("%.4f", f));
    }
    note(o, st.excluded_mass < 0.1, "excluded " + fmt("%.4f", st.excluded_mass));
  };
  note(o, run.depth2->fractions.size() == 2 && run.depth3->fractions.size() == 4, "all cylinders present");
  check(*run.depth2, 0.05);
  check(*run.depth3, 0.07);
  return o;
}

Outcome point_components(const CylinderRun& run) {
  Outcome o;
  const int depths[3] = {2, 4, 6};
  for (int i = 0; i < 3; ++i) {
    const double bound = boost::rational_cast<double>(periodic_nu_bound(depths[i]));
    note(o, run.periodic[i] <= bound + 0.05,
         "depth " + std::to_string(depths[i]) + " " + fmt("%.4f", run.periodic[i]) + " (bound " + fmt("%.4f", bound) + ")");
  }
  note(o, run.periodic[0] > run.periodic[1] && run.periodic[1] > run.periodic[2], "decreasing");
  return o;
}

Outcome misiurewicz() {
  Outcome o;
  const auto report = misiurewicz_solve({2, 1, 2, 1});
  auto find = [&](cplx c, cplx v) -> const MisiurewiczCandidate* {
    for (const auto& cand : report.candidates)
      if (std::abs(cand.p.c - c) < 1e-8 && std::abs(cand.p.v - v) < 1e-8) return &cand;
    return nullptr;
  };
  const auto* hit = find(1.0, -2.0);
  note(o, hit != nullptr, "(1,-2) found");
  if (hit) {
    note(o, std::max(hit->residuals[0], hit->residuals[1]) < 1e-9,
         "residual " + fmt("%.1e", std::max(hit->residuals[0], hit->residuals[1])));
    note(o, std::abs(hit->plus_multiplier - 9.0) < 1e-6 && std::abs(hit->minus_multiplier - 9.0) < 1e-6, "multipliers 9");
    note(o, hit->strict[0] && hit->strict[1], "strict");
  }
  const auto* impostor = find(0.5, -1.0);
  bool filtered = impostor != nullptr;
  for (const auto& m : misiurewicz_points(report)) filtered = filtered && distance(m.p, {0.5, -1.0}) > 1e-8;
  note(o, filtered, "(1/2,-1) found and filtered");
  const double total = mu_bif_intersection_estimate(1).total;
  note(o, std::abs(total - 1.0 / 3.0) < 1e-12, "(1,0)x(1,0) total " + fmt("%.15f", total));
  return o;
}

Outcome monge_ampere(std::size_t fine) {
  Outcome o;
  const std::size_t coarse = fine / 2;
  const Region4 escape = box({10, 0}, {10, 0}, 0.5);
  const Region4 interior = box(0, 0, 0.05);
  const Region4 active = box({1, 0}, {-2, 0}, 0.5);
  const double a_coarse = mu_bif_grid_estimate(active, coarse).total;
  const double a_fine = mu_bif_grid_estimate(active, fine).total;
  // noise floor: rounding in fourth differences of G, relative to a live window
  const double floor = 1e-6 * a_fine;
  for (std::size_t res : {coarse, fine}) {
    const double e = mu_bif_grid_estimate(escape, res).total;
    const double i = mu_bif_grid_estimate(interior, res).total;
    note(o, e <= floor, "escape " + std::to_string(res) + " " + fmt("%.1e", e));
    note(o, i <= floor, "interior " + std::to_string(res) + " " + fmt("%.1e", i));
  }
  note(o, a_coarse > 0 && a_fine > 0, "(1,-2) " + fmt("%.4e", a_coarse) + " -> " + fmt("%.4e", a_fine));
  note(o, std::abs(a_fine / a_coarse - 1) <= 0.3, "ratio " + fmt("%.3f", a_fine / a_coarse));
  return o;
}

Outcome pair_totals(int n_max) {
  Outcome o;
  const auto est = mu_bif_intersection_estimate(n_max);
  for (const auto& p : est.pairs) {
    char name[96];
    std::snprintf(name, sizeof name, "Per+(%d,%d) x Per-(%d,%d) total %.15f", p.plus.n, p.plus.k, p.minus.n,
                  p.minus.k, p.total);
    note(o, std::abs(p.total - 1.0 / 3.0) < 1e-12 && p.escaped == 0, name);
  }
  return o;
}

}  // namespace bifcc::checks
