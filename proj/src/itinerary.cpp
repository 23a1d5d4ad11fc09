#include "bifcc/itinerary.hpp"

#include <cmath>
#include <deque>
#include <numbers>

#include "bifcc/parallel.hpp"

namespace bifcc {

namespace {

class WindowTooSmall : public ResolutionError {
 public:
  using ResolutionError::ResolutionError;
};

std::size_t flood_fill(GridField& labels, const std::vector<char>& inside) {
  const std::size_t nx = labels.nx;
  const std::size_t ny = labels.ny;
  std::vector<int> component(inside.size(), -1);
  std::size_t count = 0;
  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < inside.size(); ++start) {
    if (!inside[start] || component[start] >= 0) continue;
    const int id = static_cast<int>(count++);
    component[start] = id;
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      const std::size_t ix = i % nx;
      const std::size_t iy = i / nx;
      auto visit = [&](std::size_t j) {
        if (inside[j] && component[j] < 0) {
          component[j] = id;
          queue.push_back(j);
        }
      };
      if (ix > 0) visit(i - 1);
      if (ix + 1 < nx) visit(i + 1);
      if (iy > 0) visit(i - nx);
      if (iy + 1 < ny) visit(i + nx);
    }
  }
  // Temporarily store component ids + 1; the caller maps them to pieces.
  for (std::size_t i = 0; i < inside.size(); ++i) labels.values[i] = component[i] + 1.0;
  return count;
}

FigureEight label_once(const CubicParam& p, const Region& window, std::size_t resolution,
                       double threshold) {
  FigureEight fe;
  fe.threshold = threshold;
  GridField inside_field = sample_grid(
      window, resolution, [&](cplx z) { return green_below(p, z, threshold) ? 1.0 : 0.0; });
  std::vector<char> inside(inside_field.size());
  for (std::size_t i = 0; i < inside.size(); ++i) inside[i] = inside_field.values[i] > 0.5;
  const std::size_t n = resolution;
  for (std::size_t i = 0; i < n; ++i) {
    if (inside[i] || inside[(n - 1) * n + i] || inside[i * n] || inside[i * n + n - 1]) {
      throw WindowTooSmall("figure_eight_labels: coding region touches the window border");
    }
  }
  fe.labels = inside_field;
  fe.components = flood_fill(fe.labels, inside);
  if (fe.components != 2) return fe;
  const auto cell = fe.labels.cell_of(p.c);
  if (!cell) throw DomainError("figure_eight_labels: +c outside the window");
  const double c_component = fe.labels.at(cell->first, cell->second);
  if (c_component == 0.0) throw ResolutionError("figure_eight_labels: +c cell is unlabelled");
  for (double& v : fe.labels.values) {
    if (v == 0.0) continue;
    v = static_cast<double>(v == c_component ? Piece::U2 : Piece::U1);
  }
  return fe;
}

// Flood fill of the component of {G_f < threshold} containing +c only,
// evaluating cells on demand. Cells of the coding region outside that
// component are taken to be U1.
class LazyFigureEight {
 public:
  LazyFigureEight(const CubicParam& p, const Region& window, std::size_t n, double threshold)
      : p_(p), window_(window), n_(n), threshold_(threshold), dx_(window.width() / n),
        dy_(window.height() / n), state_(n * n, -1), in_u2_(n * n, 0) {}

  void fill() {
    const auto start = cell(p_.c);
    const auto other = cell(-2.0 * p_.c);
    if (!start || !other) throw WindowTooSmall("figure-eight: critical value off the window");
    if (!inside(*start)) throw ResolutionError("figure-eight: +c cell is unlabelled");
    std::deque<std::size_t> queue{*start};
    in_u2_[*start] = 1;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      const std::size_t ix = i % n_;
      const std::size_t iy = i / n_;
      if (ix == 0 || iy == 0 || ix + 1 == n_ || iy + 1 == n_) {
        throw WindowTooSmall("figure-eight: coding region touches the window border");
      }
      if (i == *other) throw ResolutionError("figure-eight: pieces merge at this resolution");
      for (std::size_t j : {i - 1, i + 1, i - n_, i + n_}) {
        if (!in_u2_[j] && inside(j)) {
          in_u2_[j] = 1;
          queue.push_back(j);
        }
      }
    }
  }

  std::optional<Piece> piece(cplx z) {
    if (!green_below(p_, z, threshold_)) return Piece::Outside;
    const auto i = cell(z);
    if (!i || !inside(*i)) return std::nullopt;
    const std::size_t ix = *i % n_;
    const std::size_t iy = *i / n_;
    if (ix == 0 || iy == 0 || ix + 1 == n_ || iy + 1 == n_) return std::nullopt;
    const char label = in_u2_[*i];
    for (std::size_t jy = iy - 1; jy <= iy + 1; ++jy) {
      for (std::size_t jx = ix - 1; jx <= ix + 1; ++jx) {
        const std::size_t j = jy * n_ + jx;
        if (inside(j) && in_u2_[j] != label) return std::nullopt;
      }
    }
    return label ? Piece::U2 : Piece::U1;
  }

 private:
  std::optional<std::size_t> cell(cplx z) const {
    const double fx = (z.real() - window_.re_min) / dx_;
    const double fy = (z.imag() - window_.im_min) / dy_;
    if (!(fx >= 0.0 && fy >= 0.0 && fx < static_cast<double>(n_) && fy < static_cast<double>(n_))) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(fy) * n_ + static_cast<std::size_t>(fx);
  }

  bool inside(std::size_t i) {
    if (state_[i] < 0) {
      const cplx z(window_.re_min + (static_cast<double>(i % n_) + 0.5) * dx_,
                   window_.im_min + (static_cast<double>(i / n_) + 0.5) * dy_);
      state_[i] = green_below(p_, z, threshold_) ? 1 : 0;
    }
    return state_[i] == 1;
  }

  CubicParam p_;
  Region window_;
  std::size_t n_;
  double threshold_;
  double dx_, dy_;
  std::vector<signed char> state_;
  std::vector<char> in_u2_;
};

}  // namespace

Region default_dynamical_window(const CubicParam& p) {
  const double h = 3.3 * std::abs(p.c) + 1.0;
  return {-h, h, -h, h};
}

FigureEight figure_eight_labels(const CubicParam& p, const Region& window, std::size_t resolution) {
  const GreenResult gp = green_plus(p);
  const GreenResult gm = green_minus(p);
  if (gm.bounded || !(gp.value < gm.value)) {
    throw DomainError("figure_eight_labels: requires G+ < G-");
  }
  const double threshold = (1.0 - kComponentMargin) * gm.value;
  if (!(gp.value < threshold)) throw DomainError("figure_eight_labels: +c lies in the margin band");
  FigureEight fe = label_once(p, window, resolution, threshold);
  if (fe.components == 2) return fe;
  fe = label_once(p, window, 2 * resolution, threshold);
  if (fe.components == 2) return fe;
  throw ResolutionError("figure_eight_labels: found " + std::to_string(fe.components) +
                        " components instead of 2");
}

std::optional<Piece> piece_of(const FigureEight& fe, const CubicParam& p, cplx z) {
  if (!green_below(p, z, fe.threshold)) return Piece::Outside;
  const auto cell = fe.labels.cell_of(z);
  if (!cell) return std::nullopt;
  const auto [ix, iy] = *cell;
  const int label = static_cast<int>(fe.labels.at(ix, iy));
  if (label == 0) return std::nullopt;
  for (std::size_t jy = iy == 0 ? 0 : iy - 1; jy <= std::min(iy + 1, fe.labels.ny - 1); ++jy) {
    for (std::size_t jx = ix == 0 ? 0 : ix - 1; jx <= std::min(ix + 1, fe.labels.nx - 1); ++jx) {
      const int other = static_cast<int>(fe.labels.at(jx, jy));
      if (other != 0 && other != label) return std::nullopt;
    }
  }
  return static_cast<Piece>(label);
}

bool Itinerary::clean_prefix(int length) const {
  if (defined_depth < length) return false;
  for (int i = 0; i < length; ++i) {
    if (symbols[static_cast<std::size_t>(i)] == Symbol::Ambiguous) return false;
  }
  return true;
}

std::string Itinerary::word(int length) const {
  std::string w;
  for (int i = 0; i < std::min<int>(length, static_cast<int>(symbols.size())); ++i) {
    const Symbol s = symbols[static_cast<std::size_t>(i)];
    w += s == Symbol::One ? '1' : s == Symbol::Two ? '2' : '?';
  }
  return w;
}

Itinerary itinerary_of_critical(const CubicParam& p, int depth, std::size_t resolution,
                                int min_defined) {
  Itinerary it;
  it.depth = depth;
  if (depth <= 0) return it;
  const GreenResult gp = green_plus(p);
  const GreenResult gm = green_minus(p);
  if (gm.bounded || !(gp.value < (1.0 - kComponentMargin) * gm.value)) return it;
  const double threshold = (1.0 - kComponentMargin) * gm.value;

  std::vector<cplx> orbit;
  cplx z = p.c;
  for (int i = 0; i < depth; ++i) {
    if (!green_below(p, z, threshold)) break;
    orbit.push_back(z);
    z = eval_poly(p, z);
  }
  it.defined_depth = static_cast<int>(orbit.size());
  if (it.defined_depth < min_defined) return it;

  Region window = default_dynamical_window(p);
  std::optional<LazyFigureEight> fe;
  std::size_t n = resolution;
  for (int attempt = 0; attempt < 5 && !fe; ++attempt) {
    try {
      LazyFigureEight candidate(p, window, n, threshold);
      candidate.fill();
      fe.emplace(std::move(candidate));
    } catch (const WindowTooSmall&) {
      window = {1.5 * window.re_min, 1.5 * window.re_max, 1.5 * window.im_min, 1.5 * window.im_max};
    } catch (const ResolutionError&) {
      if (n > resolution) break;
      n *= 2;
    }
  }
  for (const cplx& w : orbit) {
    const auto piece = fe ? fe->piece(w) : std::nullopt;
    if (piece == Piece::U1) {
      it.symbols.push_back(Symbol::One);
    } else if (piece == Piece::U2) {
      it.symbols.push_back(Symbol::Two);
    } else {
      it.symbols.push_back(Symbol::Ambiguous);
    }
  }
  return it;
}

Rational nu_cylinder_mass(const std::vector<int>& word) {
  Rational mass(1);
  for (int letter : word) {
    if (letter != 1 && letter != 2) throw DomainError("nu_cylinder_mass: letters must be 1 or 2");
    mass *= Rational(letter, 3);
  }
  return mass;
}

Rational nu_cylinder_mass(const std::string& word) {
  std::vector<int> letters;
  for (char ch : word) letters.push_back(ch - '0');
  return nu_cylinder_mass(letters);
}

TransverseMeasure transverse_measure(const Transversal& t) {
  TransverseMeasure m;
  m.grid = t.grid;
  const std::size_t n = t.grid.resolution;
  m.cell_masses.assign(t.grid.size(), 0.0);
  std::vector<double> potential(t.grid.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(t.grid.size(), [&](std::size_t i) {
    if (t.has(i)) potential[i] = green_plus(t.param(i)).value;
  });
  const double hx = t.grid.dy_re();
  const double hy = t.grid.dy_im();
  const double wx = hy / hx / (2.0 * std::numbers::pi);
  const double wy = hx / hy / (2.0 * std::numbers::pi);
  const bool square = std::abs(hx - hy) <= 1e-12 * hx;
  CompensatedSum total;
  CompensatedSum clamped;
  std::size_t missing = 0;
  for (std::size_t iy = 1; iy + 1 < n; ++iy) {
    for (std::size_t ix = 1; ix + 1 < n; ++ix) {
      const std::size_t i = iy * n + ix;
      const double u = potential[i];
      const double e = potential[i + 1], w = potential[i - 1];
      const double no = potential[i + n], so = potential[i - n];
      const double ne = potential[i + n + 1], nw = potential[i + n - 1];
      const double se = potential[i - n + 1], sw = potential[i - n - 1];
      if (!std::isfinite(u + e + w + no + so + ne + nw + se + sw)) {
        ++missing;
        continue;
      }
      // Isotropic 9-point stencil; reduces to 5-point weights when cells are not square.
      double lap = 0.0;
      if (square) {
        lap = (4.0 * (e + w + no + so) + (ne + nw + se + sw) - 20.0 * u) / (6.0 * 2.0 * std::numbers::pi);
      } else {
        lap = wx * (e + w - 2.0 * u) + wy * (no + so - 2.0 * u);
      }
      if (lap < 0.0) {
        clamped.add(lap);
        continue;
      }
      m.cell_masses[i] = lap;
      total.add(lap);
    }
  }
  m.total = total.value();
  m.clamped = clamped.value();
  m.missing_fraction = static_cast<double>(missing) / static_cast<double>(t.grid.size());
  return m;
}

CylinderStatistics cylinder_statistics(const Transversal& t, const TransverseMeasure& measure,
                                       int depth, const CylinderOptions& options) {
  CylinderStatistics stats;
  stats.k = t.k;
  stats.depth = depth;
  stats.resolution = t.grid.resolution;
  stats.total_mass = measure.total;
  if (!(measure.total > 0.0)) return stats;

  double largest = 0.0;
  for (double m : measure.cell_masses) largest = std::max(largest, m);
  const double cutoff = options.noise_fraction * largest;
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < measure.cell_masses.size(); ++i) {
    if (measure.cell_masses[i] > cutoff && measure.cell_masses[i] > 0.0) cells.push_back(i);
  }
  std::vector<std::string> words(cells.size());
  parallel_for(cells.size(), [&](std::size_t j) {
    const Itinerary it =
        itinerary_of_critical(t.param(cells[j]), depth, options.dynamical_resolution, depth);
    if (it.clean_prefix(depth)) words[j] = it.word(depth);
  });

  std::map<std::string, CompensatedSum> sums;
  CompensatedSum defined;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (words[j].empty()) continue;
    const double mass = measure.cell_masses[cells[j]];
    sums[words[j]].add(mass);
    defined.add(mass);
  }
  const double defined_mass = defined.value();
  for (const auto& [word, sum] : sums) stats.fractions[word] = sum.value() / defined_mass;
  stats.excluded_mass = std::max(0.0, 1.0 - defined_mass / measure.total);
  if (depth == 0) stats.excluded_mass = 0.0;
  return stats;
}

CylinderStatistics cylinder_statistics(const Transversal& t, int depth,
                                       const CylinderOptions& options) {
  return cylinder_statistics(t, transverse_measure(t), depth, options);
}

std::vector<std::string> period_consistent_words(int depth) {
  std::vector<std::string> out;
  if (depth <= 0) return out;
  const std::size_t count = std::size_t{1} << (depth - 1);
  for (std::size_t bits = 0; bits < count; ++bits) {
    std::string w = "2";
    for (int i = 1; i < depth; ++i) w += (bits >> (i - 1)) & 1 ? '2' : '1';
    for (int q = 1; q <= depth / 2; ++q) {
      bool periodic = true;
      for (int i = 0; i + q < depth && periodic; ++i) periodic = w[i] == w[i + q];
      if (periodic) {
        out.push_back(w);
        break;
      }
    }
  }
  return out;
}

Rational periodic_nu_bound(int depth) {
  Rational sum(0);
  for (const std::string& w : period_consistent_words(depth)) sum += nu_cylinder_mass(w);
  return sum / Rational(2, 3);
}

double periodic_fraction(const CylinderStatistics& stats) {
  // below this the "mass" is rounding noise of the Laplacian
  constexpr double kMassFloor = 1e-9;
  if (!(stats.total_mass > kMassFloor)) return 0.0;
  double sum = 0.0;
  for (const std::string& w : period_consistent_words(stats.depth)) {
    if (auto it = stats.fractions.find(w); it != stats.fractions.end()) sum += it->second;
  }
  return sum * (1.0 - stats.excluded_mass);
}

double periodic_fraction(const Transversal& t, int depth, const CylinderOptions& options) {
  return periodic_fraction(cylinder_statistics(t, depth, options));
}

}  // namespace bifcc
