// bifcc: command-line front end. Every command writes its outputs under
// --out (a path prefix) plus a manifest; --dry-run only prints the plan.
// Exit codes: 0 ok, 1 failed check, 2 usage, 3 numeric failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bifcc/bifurcation.hpp"
#include "bifcc/itinerary.hpp"
#include "bifcc/wringing.hpp"
#include "checks.hpp"
#include "output.hpp"

using namespace bifcc;
using namespace bifcc::cli;

namespace {

// ---------------------------------------------------------------------------
// argument formats

std::vector<double> numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(x)) throw UsageError(what + ": bad number '" + item + "'");
    out.push_back(x);
  }
  return out;
}

/// "re,im"
cplx parse_complex(const std::string& text, const std::string& what) {
  const auto v = numbers(text, what);
  if (v.size() != 2) throw UsageError(what + ": expected re,im");
  return {v[0], v[1]};
}

/// "reMin,reMax,imMin,imMax"
Region parse_region(const std::string& text, const std::string& what) {
  const auto v = numbers(text, what);
  if (v.size() != 4) throw UsageError(what + ": expected reMin,reMax,imMin,imMax");
  const Region r{v[0], v[1], v[2], v[3]};
  if (!(r.re_min < r.re_max && r.im_min < r.im_max)) throw UsageError(what + ": empty region");
  return r;
}

/// A parameter: "c,v" with both real, or "re c,im c,re v,im v".
CubicParam parse_param(const std::string& text, const std::string& what) {
  const auto v = numbers(text, what);
  if (v.size() == 2) return {v[0], v[1]};
  if (v.size() == 4) return {{v[0], v[1]}, {v[2], v[3]}};
  throw UsageError(what + ": expected c,v or reC,imC,reV,imV");
}

Sign parse_sign(const std::string& text) {
  if (text == "plus") return Sign::Plus;
  if (text == "minus") return Sign::Minus;
  throw UsageError("sign must be plus or minus");
}

ordered_json complex_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }
ordered_json param_json(const CubicParam& p) { return {{"c", complex_json(p.c)}, {"v", complex_json(p.v)}}; }
ordered_json spec_json(const PerSpec& s) { return {{"sign", to_string(s.sign)}, {"n", s.n}, {"k", s.k}}; }

void check_resolution(std::size_t res, std::size_t lo, std::size_t hi) {
  if (res < lo || res > hi) {
    throw UsageError("resolution must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

// ---------------------------------------------------------------------------
// run context shared by all commands

struct Run {
  std::vector<std::string> command_line;
  std::string prefix;
  bool dry_run = false;
};

struct Plan {
  std::string command;
  std::vector<std::string> outputs;  // suffixes
  ordered_json tolerances = ordered_json::object();
  // does the work and writes into the set; returns the exit code
  std::function<int(OutputSet&)> body;
};

int execute(const Run& run, const Plan& plan) {
  OutputSet out(run.prefix);
  if (run.dry_run) {
    ordered_json j;
    j["command"] = plan.command;
    j["command_line"] = run.command_line;
    ordered_json files = ordered_json::array();
    for (const auto& s : plan.outputs) files.push_back(out.path(s));
    files.push_back(out.path(".manifest.json"));
    j["outputs"] = files;
    j["tolerances"] = plan.tolerances;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const int code = plan.body(out);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.write_manifest(run.command_line, plan.tolerances, wall);
    return code;
  } catch (...) {
    out.remove_all();
    throw;
  }
}

// ---------------------------------------------------------------------------
// slice

const std::vector<std::string> kFields = {"Gplus",         "Gminus",         "maxG",       "lyapunov",
                                          "Tplus-density", "Tminus-density", "locus-class"};

Plan slice_plan(const std::string& plane, const std::string& fixed_text, const std::string& region_text,
                std::size_t res, const std::string& field) {
  if (plane != "c" && plane != "v") throw UsageError("plane must be c or v");
  if (std::find(kFields.begin(), kFields.end(), field) == kFields.end()) throw UsageError("unknown field " + field);
  check_resolution(res, 8, 4096);
  const cplx fixed = parse_complex(fixed_text, "--fixed");
  const Region region = parse_region(region_text, "--region");

  Plan plan;
  plan.command = "slice";
  plan.outputs = {".pgm", ".pgm.json", ".csv", ".json"};
  plan.tolerances = {{"green_budget", kDefaultBudget}};
  plan.body = [=](OutputSet& out) {
    auto param = [&](cplx z) { return plane == "c" ? CubicParam{z, fixed} : CubicParam{fixed, z}; };
    const AxisMeaning axis = plane == "c" ? AxisMeaning::CPlane : AxisMeaning::VPlane;
    std::function<double(cplx)> fn;
    if (field == "Gplus" || field == "Tplus-density") fn = [&](cplx z) { return green_plus(param(z)).value; };
    if (field == "Gminus" || field == "Tminus-density") fn = [&](cplx z) { return green_minus(param(z)).value; };
    if (field == "maxG") fn = [&](cplx z) { return max_green(param(z)); };
    if (field == "lyapunov") fn = [&](cplx z) { return lyapunov(param(z)); };
    if (field == "locus-class") fn = [&](cplx z) { return static_cast<double>(classify_locus(param(z))); };
    GridField g = sample_grid(region, res, fn, axis);
    ordered_json summary;
    summary["field"] = field;
    summary["plane"] = plane;
    summary["fixed"] = complex_json(fixed);
    summary["region"] = region_json(region);
    summary["resolution"] = res;
    if (field == "Tplus-density" || field == "Tminus-density") {
      const DensityField d = laplacian_density(g);
      g = d.density;
      summary["total"] = d.total;
      summary["clamped"] = d.clamped;
    }
    const Graymap img = render_pgm(g);
    out.write(".pgm", img.pgm);
    out.write_json(".pgm.json", {{"min", img.min}, {"max", img.max}, {"region", region_json(region)}, {"resolution", res}});
    std::string csv = "x,y,value\n";
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
      for (std::size_t ix = 0; ix < g.nx; ++ix) {
        const cplx z = g.point(ix, iy);
        const double v = g.at(ix, iy);
        csv += number(z.real()) + "," + number(z.imag()) + ",";
        csv += field == "locus-class" ? to_string(static_cast<Locus>(static_cast<int>(v))) : number(v);
        csv += "\n";
      }
    }
    out.write(".csv", csv);
    if (field == "locus-class") {
      ordered_json counts = ordered_json::object();
      for (double v : g.values) {
        const std::string name = to_string(static_cast<Locus>(static_cast<int>(v)));
        counts[name] = counts.value(name, 0) + 1;
      }
      summary["counts"] = counts;
    }
    out.write_json(".json", summary);
    std::cout << summary.dump(2) << "\n";
    return 0;
  };
  return plan;
}

// ---------------------------------------------------------------------------
// verify

const std::vector<std::string> kSuites = {"identities", "degrees", "kiwi", "wring", "cylinders", "misiurewicz", "mass"};

Plan verify_plan(const std::string& suite, std::size_t chart_res, std::size_t ma_res) {
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) throw UsageError("unknown suite " + suite);
  check_resolution(chart_res, 256, 4096);
  check_resolution(ma_res, 32, kMaxGrid4);
  Plan plan;
  plan.command = "verify";
  plan.outputs = {".json"};
  plan.tolerances = {{"chart_resolution", chart_res}, {"monge_ampere_resolution", ma_res}};
  plan.body = [=](OutputSet& out) {
    using Block = std::pair<std::string, std::function<checks::Outcome()>>;
    std::vector<Block> blocks;
    std::optional<checks::CylinderRun> cyl;
    auto chart = [&]() -> const checks::CylinderRun& {
      if (!cyl) cyl = checks::cylinder_run(chart_res);
      return *cyl;
    };
    if (suite == "identities") blocks = {{"algebraic identities", checks::identities}};
    if (suite == "degrees") blocks = {{"degrees", checks::degrees}, {"equidistribution potential", checks::equidistribution}};
    if (suite == "kiwi") blocks = {{"Bottcher asymptotic", checks::bottcher_asymptotic}, {"Kiwi bounds", checks::kiwi}};
    if (suite == "wring") blocks = {{"wringing", checks::wringing}, {"transversal graphs", checks::transversals}};
    if (suite == "cylinders") {
      blocks = {{"cylinder statistics", [&] { return checks::cylinders(chart()); }},
                {"point-component proxy", [&] { return checks::point_components(chart()); }}};
    }
    if (suite == "misiurewicz") blocks = {{"Misiurewicz", checks::misiurewicz}};
    if (suite == "mass") {
      blocks = {{"pair totals", [] { return checks::pair_totals(2); }},
                {"Monge-Ampere sanity", [=] { return checks::monge_ampere(ma_res); }}};
    }
    ordered_json report;
    report["suite"] = suite;
    ordered_json list = ordered_json::array();
    bool pass = true;
    for (const auto& [name, fn] : blocks) {
      checks::Outcome o;
      try {
        o = fn();
      } catch (const std::exception& e) {
        o.checks.push_back({std::string("exception: ") + e.what(), false});
      }
      ordered_json items = ordered_json::array();
      for (const auto& c : o.checks) items.push_back({{"check", c.name}, {"pass", c.pass}});
      list.push_back({{"block", name}, {"pass", o.pass()}, {"checks", items}});
      pass = pass && o.pass();
      if (!o.pass()) {
        for (const auto& c : o.checks)
          if (!c.pass) std::cerr << "failed: " << name << ": " << c.name << "\n";
      }
    }
    report["pass"] = pass;
    report["blocks"] = list;
    out.write_json(".json", report);
    std::cout << report.dump(2) << "\n";
    return pass ? 0 : 1;
  };
  return plan;
}

// ---------------------------------------------------------------------------
// trace

LeafConstraint parse_constraint(const std::string& text, const CubicParam& base) {
  if (text == "none") return NoConstraint{};
  auto tail_numbers = [&](const std::string& head) {
    std::vector<int> v;
    std::stringstream ss(text.substr(head.size()));
    std::string item;
    while (std::getline(ss, item, '-')) {
      if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
        throw UsageError("bad constraint " + text);
      }
      v.push_back(std::stoi(item));
    }
    return v;
  };
  for (const auto& [head, sign] : {std::pair{std::string("per-plus-"), Sign::Plus}, {std::string("per-minus-"), Sign::Minus}}) {
    if (text.rfind(head, 0) != 0) continue;
    const auto v = tail_numbers(head);
    // per-plus-N is Per+(N, N-1); per-plus-N-K names k explicitly
    if (v.empty() || v.size() > 2) throw UsageError("bad constraint " + text);
    PerSpec s{sign, v[0], v.size() == 2 ? v[1] : v[0] - 1};
    try {
      s.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    return PerConstraint{s};
  }
  if (text.rfind("multiplier-", 0) == 0) {
    const auto v = tail_numbers("multiplier-");
    if (v.size() != 1 || v[0] < 1) throw UsageError("bad constraint " + text);
    const auto cycle = find_attracting_cycle(base, base.c);
    if (!cycle || cycle->period != v[0]) {
      throw UsageError("no attracting cycle of period " + std::to_string(v[0]) + " attracts +c at the base");
    }
    return MultiplierConstraint{v[0], cycle->points[0]};
  }
  throw UsageError("constraint must be none, per-plus-N[-K], per-minus-N[-K] or multiplier-P");
}

Plan trace_plan(const std::string& from, const std::string& constraint_text, double s_end, double t_end, int steps) {
  const CubicParam base = parse_param(from, "--from");
  if (!(s_end > 0)) throw UsageError("--s-end must be positive");
  if (steps < 1 || steps > 100000) throw UsageError("--steps must be in [1, 100000]");
  Plan plan;
  plan.command = "trace";
  plan.outputs = {".csv"};
  const TraceOptions options;
  plan.tolerances = {{"newton_tolerance", options.tolerance}, {"max_halvings", options.max_halvings}};
  plan.body = [=](OutputSet& out) {
    const LeafConstraint constraint = parse_constraint(constraint_text, base);
    std::vector<WringU> path;
    for (int j = 1; j <= steps; ++j) {
      const double f = static_cast<double>(j) / steps;
      path.push_back({1.0 + (s_end - 1.0) * f, t_end * f});
    }
    const LeafTrace trace = trace_leaf(base, path, constraint, options);
    if (trace.status != TraceStatus::Complete) throw ConvergenceError("trace stopped: " + trace.message);
    std::string csv = "s,t,re_c,im_c,re_v,im_v,residual_phi,residual_inv\n";
    for (const auto& st : trace.steps) {
      csv += number(st.u.s) + "," + number(st.u.t) + "," + number(st.p.c.real()) + "," + number(st.p.c.imag()) + "," +
             number(st.p.v.real()) + "," + number(st.p.v.imag()) + "," + number(st.residual_phi) + "," +
             number(st.residual_inv) + "\n";
    }
    out.write(".csv", csv);
    std::cout << "traced " << trace.steps.size() << " steps holding " << describe(constraint) << "\n";
    return 0;
  };
  return plan;
}

// ---------------------------------------------------------------------------
// transversal

Plan transversal_plan(const std::string& k_text, const std::string& window_text, std::size_t res, double k_min) {
  const cplx k = parse_complex(k_text, "--k");
  const Region window = parse_region(window_text, "--window");
  check_resolution(res, 1, 4096);
  if (!(std::abs(k) >= k_min)) throw UsageError("|k| is below --k-min");
  Plan plan;
  plan.command = "transversal";
  plan.outputs = {".csv", ".json"};
  plan.tolerances = {{"k_min", k_min}};
  plan.body = [=](OutputSet& out) {
    const Transversal t = transversal_disk(k, ChartGrid{window, res}, std::nullopt, k_min);
    std::string csv = "re_y,im_y,re_x,im_x\n";
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
      const cplx y = t.grid.y_of(i);
      csv += number(y.real()) + "," + number(y.imag()) + "," + number(t.x[i].real()) + "," + number(t.x[i].imag()) + "\n";
    }
    out.write(".csv", csv);
    ordered_json summary = {{"k", complex_json(k)},
                            {"window", region_json(window)},
                            {"resolution", res},
                            {"solved", t.solved},
                            {"success_fraction", t.success_fraction()},
                            {"lipschitz", t.lipschitz},
                            {"x_radius", t.x_radius}};
    out.write_json(".json", summary);
    std::cout << summary.dump(2) << "\n";
    return 0;
  };
  return plan;
}

// ---------------------------------------------------------------------------
// misiurewicz

Plan misiurewicz_plan(const std::string& spec_text, const std::string& region_text) {
  const auto v = numbers(spec_text, "--spec");
  if (v.size() != 4) throw UsageError("--spec: expected n,k,m,l");
  for (double x : v)
    if (x != std::floor(x) || x < 0 || x > 8) throw UsageError("--spec: small non-negative integers expected");
  MisiurewiczSpec spec{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2]), static_cast<int>(v[3])};
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  std::optional<Region> region;
  if (!region_text.empty()) region = parse_region(region_text, "--region");
  Plan plan;
  plan.command = "misiurewicz";
  plan.outputs = {".json", ".csv"};
  plan.tolerances = {{"residual", kMisiurewiczResidual},
                     {"degenerate_radius", kDegenerateRadius},
                     {"singular_condition", kSingularCondition}};
  plan.body = [=](OutputSet& out) {
    const MisiurewiczReport report = misiurewicz_solve(spec, region);
    ordered_json list = ordered_json::array();
    std::string csv = "re_c,im_c,re_v,im_v,residual_plus,residual_minus,strict_plus,strict_minus,multiplicity,misiurewicz\n";
    for (const auto& c : report.candidates) {
      ordered_json j = param_json(c.p);
      j["residuals"] = c.residuals;
      j["plus_multiplier"] = complex_json(c.plus_multiplier);
      j["minus_multiplier"] = complex_json(c.minus_multiplier);
      j["plus_period"] = c.plus_period;
      j["minus_period"] = c.minus_period;
      j["strict"] = c.strict;
      j["flagged"] = c.flagged;
      j["multiplicity"] = c.multiplicity;
      j["condition"] = std::isfinite(c.condition) ? ordered_json(c.condition) : ordered_json("inf");
      j["misiurewicz"] = c.is_misiurewicz();
      list.push_back(j);
      csv += number(c.p.c.real()) + "," + number(c.p.c.imag()) + "," + number(c.p.v.real()) + "," +
             number(c.p.v.imag()) + "," + number(c.residuals[0]) + "," + number(c.residuals[1]) + "," +
             (c.strict[0] ? "1" : "0") + "," + (c.strict[1] ? "1" : "0") + "," + std::to_string(c.multiplicity) +
             "," + (c.is_misiurewicz() ? "1" : "0") + "\n";
    }
    ordered_json j;
    j["spec"] = {{"plus", spec_json(spec.plus())}, {"minus", spec_json(spec.minus())}};
    j["region"] = region ? region_json(*region) : ordered_json(nullptr);
    j["candidates"] = list;
    j["unconverged"] = report.unconverged;
    j["merged"] = report.merged;
    out.write_json(".json", j);
    out.write(".csv", csv);
    std::cout << j.dump(2) << "\n";
    return 0;
  };
  return plan;
}

// ---------------------------------------------------------------------------
// equidist and curve

Plan equidist_plan(const std::string& sign, int n, int k, const std::string& at) {
  PerSpec s{parse_sign(sign), n, k};
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (n > 60) throw UsageError("--n at most 60");
  const CubicParam p = parse_param(at, "--at");
  Plan plan;
  plan.command = "equidist";
  plan.outputs = {".json"};
  plan.body = [=](OutputSet& out) {
    const double value = equidist_potential(s, p);
    ordered_json j = {{"spec", spec_json(s)}, {"at", param_json(p)}, {"value", number(value)}};
    if (std::isfinite(value)) j["value"] = value;
    out.write_json(".json", j);
    std::cout << j.dump(2) << "\n";
    return 0;
  };
  return plan;
}

Plan curve_plan(const std::string& sign, int n, int k, const std::string& window_text, std::size_t res) {
  PerSpec s{parse_sign(sign), n, k};
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (n > 6) throw UsageError("--n at most 6");
  const Region window = parse_region(window_text, "--window");
  check_resolution(res, 1, 1024);
  Plan plan;
  plan.command = "curve";
  plan.outputs = {".csv"};
  plan.tolerances = {{"point_residual", 1e-8}};
  plan.body = [=](OutputSet& out) {
    std::string csv = "sign,n,k,re_c,im_c,re_v,im_v,residual\n";
    const auto pts = sample_curve(s, window, res);
    for (const auto& p : pts) {
      csv += to_string(s.sign) + "," + std::to_string(s.n) + "," + std::to_string(s.k) + "," + number(p.c.real()) +
             "," + number(p.c.imag()) + "," + number(p.v.real()) + "," + number(p.v.imag()) + "," +
             number(std::abs(per_value(s, p).value)) + "\n";
    }
    out.write(".csv", csv);
    std::cout << pts.size() << " points\n";
    return 0;
  };
  return plan;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bifurcation loci of cubic polynomials"};
  app.require_subcommand(1);
  Run run;
  for (int i = 0; i < argc; ++i) run.command_line.emplace_back(argv[i]);

  // slice
  std::string plane = "c", fixed = "0,0", region = "-2,2,-2,2", field = "Gplus";
  std::size_t res = 256;
  auto* slice = app.add_subcommand("slice", "render a field on a complex line of parameters");
  slice->add_option("--plane", plane, "c (c varies, v fixed) or v")->capture_default_str();
  slice->add_option("--fixed", fixed, "value of the fixed coordinate, re,im")->capture_default_str();
  slice->add_option("--region", region, "reMin,reMax,imMin,imMax")->capture_default_str();
  slice->add_option("--resolution", res, "cells per axis")->capture_default_str();
  slice->add_option("--field", field, "Gplus|Gminus|maxG|lyapunov|Tplus-density|Tminus-density|locus-class")
      ->capture_default_str();

  // verify
  std::string suite;
  std::size_t chart_res = 1024, ma_res = 32;
  auto* verify = app.add_subcommand("verify", "run an acceptance block");
  verify->add_option("--suite", suite, "identities|degrees|kiwi|wring|cylinders|misiurewicz|mass")->required();
  verify->add_option("--chart-resolution", chart_res, "cylinder chart resolution")->capture_default_str();
  verify->add_option("--ma-resolution", ma_res, "fine Monge-Ampere resolution")->capture_default_str();

  // trace
  std::string from, constraint = "none";
  double s_end = 2.0, t_end = 0.0;
  int steps = 20;
  auto* trace = app.add_subcommand("trace", "trace a wringing leaf");
  trace->add_option("--from", from, "base parameter c,v or reC,imC,reV,imV")->required();
  trace->add_option("--constraint", constraint, "none|per-plus-N[-K]|per-minus-N[-K]|multiplier-P")->capture_default_str();
  trace->add_option("--s-end", s_end, "final Re u")->capture_default_str();
  trace->add_option("--t-end", t_end, "final Im u")->capture_default_str();
  trace->add_option("--steps", steps, "number of steps")->capture_default_str();

  // transversal
  std::string k_text, window = "-3,3,-3,3";
  std::size_t chart = 64;
  double k_min = default_k_min();
  auto* transversal = app.add_subcommand("transversal", "solve a transversal chart phi- = k");
  transversal->add_option("--k", k_text, "k as re,im")->required();
  transversal->add_option("--window", window, "y-window reMin,reMax,imMin,imMax")->capture_default_str();
  transversal->add_option("--resolution", chart, "points per axis")->capture_default_str();
  transversal->add_option("--k-min", k_min, "smallest allowed |k|")->capture_default_str();

  // misiurewicz
  std::string spec_text, mis_region;
  auto* misiurewicz = app.add_subcommand("misiurewicz", "solve Per+(n,k) and Per-(m,l) together");
  misiurewicz->add_option("--spec", spec_text, "n,k,m,l")->required();
  misiurewicz->add_option("--region", mis_region, "keep solutions with c in reMin,reMax,imMin,imMax");

  // equidist
  std::string sign = "plus", at;
  int n = 1, k = 0;
  auto* equidist = app.add_subcommand("equidist", "3^-n log|f^n(+-c) - f^k(+-c)|");
  equidist->add_option("--sign", sign, "plus or minus")->capture_default_str();
  equidist->add_option("--n", n, "n")->capture_default_str();
  equidist->add_option("--k", k, "k")->capture_default_str();
  equidist->add_option("--at", at, "parameter c,v or reC,imC,reV,imV")->required();

  // curve
  std::string curve_sign = "plus", curve_window = "-2,2,-2,2";
  int curve_n = 1, curve_k = 0;
  std::size_t curve_res = 64;
  auto* curve = app.add_subcommand("curve", "sample Per(n,k) over a grid of c");
  curve->add_option("--sign", curve_sign, "plus or minus")->capture_default_str();
  curve->add_option("--n", curve_n, "n")->capture_default_str();
  curve->add_option("--k", curve_k, "k")->capture_default_str();
  curve->add_option("--window", curve_window, "c-window reMin,reMax,imMin,imMax")->capture_default_str();
  curve->add_option("--resolution", curve_res, "grid points per axis")->capture_default_str();

  for (auto* sub : {slice, verify, trace, transversal, misiurewicz, equidist, curve}) {
    sub->add_option("--out", run.prefix, "output path prefix (default: the command name)");
    sub->add_flag("--dry-run", run.dry_run, "print the plan and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    if (run.prefix.empty()) run.prefix = chosen->get_name();
    Plan plan;
    if (chosen == slice) plan = slice_plan(plane, fixed, region, res, field);
    if (chosen == verify) plan = verify_plan(suite, chart_res, ma_res);
    if (chosen == trace) plan = trace_plan(from, constraint, s_end, t_end, steps);
    if (chosen == transversal) plan = transversal_plan(k_text, window, chart, k_min);
    if (chosen == misiurewicz) plan = misiurewicz_plan(spec_text, mis_region);
    if (chosen == equidist) plan = equidist_plan(sign, n, k, at);
    if (chosen == curve) plan = curve_plan(curve_sign, curve_n, curve_k, curve_window, curve_res);
    return execute(run, plan);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ResolutionError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
}
