#include <cmath>
#include <numeric>
#include <queue>
#include <random>

#include "bifcc/itinerary.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bifcc;

namespace {
const double k23 = std::pow(2.0, 2.0 / 3.0);

// Breadth-first fill of {G < (1 - margin) G-} from the cell of `from`, on an
// n x n grid of cell centres over `window`; true if the cell of `to` is reached.
bool connected_in_coding_region(const CubicParam& p, const Region& window, int n, cplx from, cplx to) {
  const double threshold = (1 - kComponentMargin) * oracle::green(p, -p.c);
  const double hx = window.width() / n, hy = window.height() / n;
  auto index = [&](cplx z) {
    const int ix = static_cast<int>((z.real() - window.re_min) / hx);
    const int iy = static_cast<int>((z.imag() - window.im_min) / hy);
    return iy * n + ix;
  };
  std::vector<signed char> state(static_cast<std::size_t>(n) * n, -1);
  auto inside = [&](int i) {
    if (state[i] < 0) {
      const cplx z(window.re_min + (i % n + 0.5) * hx, window.im_min + (i / n + 0.5) * hy);
      state[i] = oracle::green(p, z) < threshold ? 1 : 0;
    }
    return state[i] == 1;
  };
  std::vector<bool> seen(state.size(), false);
  std::queue<int> queue;
  const int start = index(from), goal = index(to);
  queue.push(start);
  seen[start] = true;
  while (!queue.empty()) {
    const int i = queue.front();
    queue.pop();
    if (i == goal) return true;
    const int x = i % n, y = i / n;
    const int nb[4][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
    for (const auto& q : nb) {
      if (q[0] < 0 || q[1] < 0 || q[0] >= n || q[1] >= n) continue;
      const int j = q[1] * n + q[0];
      if (!seen[j] && inside(j)) {
        seen[j] = true;
        queue.push(j);
      }
    }
  }
  return false;
}

// the three roots of f(z) = w
std::vector<cplx> preimages(const CubicParam& p, cplx w) {
  return oracle::monic_roots({2.0 * p.c * p.c * p.c + p.v - w, -3.0 * p.c * p.c, 0.0, 1.0});
}

Transversal cylinder_chart(std::size_t resolution) {
  return transversal_disk(k23 * 1.5, ChartGrid{{-3, 3, -3, 3}, resolution}, std::nullopt, 0.0);
}
}  // namespace

TEST_CASE("figure eight at (10, 0)") {
  const CubicParam p{10.0, 0.0};
  const Region window = default_dynamical_window(p);
  const auto fe = figure_eight_labels(p, window, 512);
  CHECK(fe.components == 2);
  CHECK(piece_of(fe, p, 10.0) == Piece::U2);
  const bool zero_with_c = connected_in_coding_region(p, window, 2048, 10.0, 0.0);
  const auto zero = piece_of(fe, p, 0.0);
  REQUIRE(zero.has_value());
  CHECK(*zero == (zero_with_c ? Piece::U2 : Piece::U1));
  CHECK_THROWS_AS(figure_eight_labels({0.0, 0.0}, window, 64), DomainError);
}

TEST_CASE("preimages split one in U1 and two in U2") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> arg(0, 2 * M_PI);
  for (const CubicParam p : {CubicParam{10.0, 0.0}, CubicParam{2.0, cplx(0.5, 1.0)}, CubicParam{cplx(0, 3), 1.0}}) {
    const auto fe = figure_eight_labels(p, default_dynamical_window(p), 512);
    const double target = 0.9 * 3.0 * green_minus(p).value;
    int tested = 0;
    for (int i = 0; i < 200 && tested < 20; ++i) {
      // a point with G slightly below 3 G-: walk out along a ray until G crosses target
      cplx w = std::polar(1.0, arg(rng));
      while (green_dynamical(p, w).value < target) w *= 1.02;
      int u1 = 0, u2 = 0;
      bool decided = true;
      for (cplx z : preimages(p, w / 1.02)) {
        const auto piece = piece_of(fe, p, z);
        if (!piece || *piece == Piece::Outside) {
          decided = false;
          break;
        }
        (*piece == Piece::U1 ? u1 : u2) += 1;
      }
      if (!decided) continue;
      ++tested;
      CHECK(u1 == 1);
      CHECK(u2 == 2);
    }
    CHECK(tested >= 10);
  }
}

TEST_CASE("two components on random escape parameters") {
  std::mt19937_64 rng(13);
  int n = 0;
  while (n < 20) {
    const CubicParam p{oracle::random_cplx(rng, 3.0), oracle::random_cplx(rng, 6.0)};
    const double gp = green_plus(p).value, gm = green_minus(p).value;
    if (!(gm > 0.3) || !(gp < 0.5 * gm)) continue;
    ++n;
    CHECK(figure_eight_labels(p, default_dynamical_window(p), 256).components == 2);
  }
}

TEST_CASE("itineraries of the critical point") {
  const auto fixed = itinerary_of_critical({10.0, 10.0}, 6);
  CHECK(fixed.defined_depth == 6);
  for (Symbol s : fixed.symbols) CHECK(s == Symbol::Two);

  const auto shift = itinerary_of_critical({10.0, 0.0}, 4);
  CHECK(shift.defined_depth >= 2);
  REQUIRE(!shift.symbols.empty());
  CHECK(shift.symbols[0] == Symbol::Two);

  const auto empty = itinerary_of_critical({10.0, 0.0}, 0);
  CHECK(empty.symbols.empty());
  CHECK(empty.depth == 0);
}

TEST_CASE("nu cylinder masses") {
  CHECK(nu_cylinder_mass("2") == Rational(2, 3));
  CHECK(nu_cylinder_mass("21") == Rational(2, 9));
  CHECK(nu_cylinder_mass(std::vector<int>{2, 2}) == Rational(4, 9));
  for (int depth = 1; depth <= 8; ++depth) {
    Rational sum = 0;
    for (int bits = 0; bits < (1 << depth); ++bits) {
      std::string w;
      for (int i = 0; i < depth; ++i) w += (bits >> i & 1) ? '2' : '1';
      sum += nu_cylinder_mass(w);
    }
    CHECK(sum == Rational(1));
  }
}

TEST_CASE("period-consistent words and their nu bound") {
  for (int depth = 2; depth <= 8; ++depth) {
    std::vector<std::string> expect;
    Rational mass = 0;
    for (int bits = 0; bits < (1 << (depth - 1)); ++bits) {
      std::string w = "2";
      for (int i = 0; i < depth - 1; ++i) w += (bits >> i & 1) ? '2' : '1';
      bool periodic = false;
      for (int q = 1; q <= depth / 2 && !periodic; ++q) {
        bool ok = true;
        for (int i = 0; i + q < depth; ++i) ok = ok && w[i] == w[i + q];
        periodic = ok;
      }
      if (periodic) {
        expect.push_back(w);
        mass += nu_cylinder_mass(w);
      }
    }
    auto got = period_consistent_words(depth);
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    CHECK(got == expect);
    CHECK(periodic_nu_bound(depth) == mass / Rational(2, 3));
  }
}

TEST_CASE("transverse measure") {
  const cplx k = k23 * 1000.0;
  const auto away = transverse_measure(transversal_disk(k, ChartGrid{{-0.3, 0.3, -0.3, 0.3}, 32}));
  CHECK(away.total < 1e-9);

  const auto crossing = transverse_measure(transversal_disk(k, ChartGrid{{0.5, 1.5, -0.5, 0.5}, 32}));
  CHECK(crossing.total > 0.1);

  const double coarse = transverse_measure(cylinder_chart(128)).total;
  const double fine = transverse_measure(cylinder_chart(256)).total;
  CHECK(std::abs(fine - coarse) < 0.02 * fine);
}

TEST_CASE("cylinder statistics at small resolution") {
  const auto t = cylinder_chart(128);
  const auto one = cylinder_statistics(t, 1);
  REQUIRE(one.fractions.size() == 1);
  CHECK(one.fractions.at("2") == doctest::Approx(1.0));

  const auto two = cylinder_statistics(t, 2);
  double sum = 0;
  for (const auto& [word, f] : two.fractions) {
    CHECK(word[0] == '2');
    sum += f;
  }
  CHECK(sum == doctest::Approx(1.0));
  CHECK(two.excluded_mass < 0.1);
}

TEST_CASE("periodic fraction of a massless chart is zero") {
  const auto t = transversal_disk(k23 * 1000.0, ChartGrid{{-0.3, 0.3, -0.3, 0.3}, 16});
  CHECK(periodic_fraction(t, 2) == 0.0);
}
