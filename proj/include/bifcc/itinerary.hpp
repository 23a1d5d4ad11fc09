#pragma once

// Figure-eight decomposition {G_f < G^-} = U1 u U2 (c in U2), two-symbol
// itineraries of +c, the (1/3, 2/3) Bernoulli measure and the statistics of
// the transverse measure of T+ on a transversal chart.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "bifcc/parameter_plane.hpp"
#include "bifcc/wringing.hpp"

namespace bifcc {

using Rational = boost::rational<std::int64_t>;

/// Labels stored in a figure-eight GridField.
enum class Piece : int { Outside = 0, U1 = 1, U2 = 2 };

/// Cells with G_f >= (1 - kComponentMargin) G^- are left unlabelled.
inline constexpr double kComponentMargin = 0.02;
inline constexpr std::size_t kDefaultDynamicalResolution = 128;

struct FigureEight {
  GridField labels;  // values are Piece codes
  double threshold = 0.0;  // (1 - margin) G^-
  std::size_t components = 0;
};

/// Flood-fill labelling of {G_f < (1 - margin) G^-} on a grid over window.
/// The component containing +c becomes U2. Requires G+ < G- (DomainError).
/// Retries once at double resolution if the fill does not find exactly two
/// components, then throws ResolutionError.
FigureEight figure_eight_labels(const CubicParam& p, const Region& window, std::size_t resolution);

/// Square window centred at 0 that contains {G_f < G^-} with a margin.
Region default_dynamical_window(const CubicParam& p);

/// Piece of z using the figure-eight grid: Outside when z is off the
/// coding region, nullopt when the grid cannot decide (unlabelled cell
/// inside the region, or neighbouring cells disagree).
std::optional<Piece> piece_of(const FigureEight& fe, const CubicParam& p, cplx z);

enum class Symbol : int { One = 1, Two = 2, Ambiguous = 0 };

struct Itinerary {
  std::vector<Symbol> symbols;
  int depth = 0;
  /// Length of the prefix computed before the orbit left the coding region.
  int defined_depth = 0;

  bool clean_prefix(int length) const;
  std::string word(int length) const;  // e.g. "221"
};

/// Itinerary of +c with respect to U1/U2, computed up to `depth` symbols.
/// When fewer than min_defined orbit points lie in the coding region the
/// symbols are left empty (only defined_depth is reported).
Itinerary itinerary_of_critical(const CubicParam& p, int depth,
                                std::size_t resolution = kDefaultDynamicalResolution,
                                int min_defined = 0);

/// prod d_{a_i} / 3^{|word|} with d1 = 1, d2 = 2. Word letters are 1 or 2.
Rational nu_cylinder_mass(const std::vector<int>& word);
Rational nu_cylinder_mass(const std::string& word);

struct TransverseMeasure {
  ChartGrid grid;
  std::vector<double> cell_masses;  // clamped at 0
  double total = 0.0;
  /// Fraction of grid cells excluded because they or a neighbour are gaps.
  double missing_fraction = 0.0;
  double clamped = 0.0;
};

/// Discrete dd^c of G+ restricted to the chart, in the y coordinate.
TransverseMeasure transverse_measure(const Transversal& t);

struct CylinderStatistics {
  cplx k{};
  int depth = 0;
  std::size_t resolution = 0;
  /// word -> fraction of the defined mass (all words start with '2').
  std::map<std::string, double> fractions;
  /// Fraction of the total mass whose prefix was undefined or ambiguous.
  double excluded_mass = 0.0;
  double total_mass = 0.0;
};

struct CylinderOptions {
  std::size_t dynamical_resolution = kDefaultDynamicalResolution;
  /// Cells below this fraction of the largest cell mass are treated as
  /// discretisation noise and not given an itinerary; their mass is
  /// still counted in the total (as excluded).
  double noise_fraction = 0.0;
};

CylinderStatistics cylinder_statistics(const Transversal& t, const TransverseMeasure& measure,
                                       int depth, const CylinderOptions& options = {});
CylinderStatistics cylinder_statistics(const Transversal& t, int depth,
                                       const CylinderOptions& options = {});

/// Words of `depth` letters starting with 2 that repeat with some period q <= depth / 2.
std::vector<std::string> period_consistent_words(int depth);

/// nu-mass of the period-consistent words conditioned on the first letter 2.
Rational periodic_nu_bound(int depth);

/// Fraction of the total chart mass carried by cells whose depth-prefix is
/// defined and period-consistent; 0 on a chart with no mass (total below
/// 1e-9).
double periodic_fraction(const CylinderStatistics& stats);
double periodic_fraction(const Transversal& t, int depth, const CylinderOptions& options = {});

}  // namespace bifcc
