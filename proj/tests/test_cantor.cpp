#include "doctest.h"

#include "normproj/cantor.hpp"
#include "normproj/error.hpp"

#include <cmath>
#include <cstdint>
#include <random>

using namespace normproj;

namespace {

// Middle-thirds staircase of the exact binary value of t, from its ternary digits.
// Uses integer arithmetic on t = M / 2^E, independent of the interval descent.
struct DigitOracle {
  double value;
  double error;
};

DigitOracle ternary_digits(double t, int digits = 36) {
  if (t == 1.0) return {1.0, 0.0};
  int e;
  double frac = std::frexp(t, &e);  // t = frac * 2^e, frac in [0.5, 1)
  const int shift = 53 - e;         // t = m / 2^shift
  REQUIRE(shift <= 120);
  unsigned __int128 m = static_cast<unsigned __int128>(std::ldexp(frac, 53));
  const unsigned __int128 one = static_cast<unsigned __int128>(1) << shift;
  double value = 0.0, weight = 0.5;
  for (int i = 0; i < digits; ++i) {
    m *= 3;
    unsigned digit = static_cast<unsigned>(m >> shift);
    m &= one - 1;
    if (digit == 1) return {value + weight, 0.0};
    if (digit == 2) value += weight;
    if (m == 0) return {value, 0.0};
    weight /= 2;
  }
  return {value + weight, weight};
}

}  // namespace

TEST_CASE("staircase reference values") {
  CantorSet k;
  CHECK(staircase(k, 1.0).value == 1.0);
  CHECK(staircase(k, 0.0).value == 0.0);
  CHECK(staircase(k, 1.0 / 3.0).value == 0.5);
  CHECK(staircase(k, 1.0 / 3.0).error_bound == 0.0);
  CHECK(staircase(k, 2.0 / 3.0).value == 0.5);
  CHECK(staircase(k, 0.5).value == 0.5);
  CHECK(staircase(k, 1.0 / 9.0).value == 0.25);
  CHECK(staircase(k, 7.0 / 9.0).value == 0.75);
  Bracketed q = staircase(k, 0.25);
  CHECK(q.error_bound > 0.0);
  CHECK(q.error_bound < 1e-8);
  CHECK(std::abs(q.value - 1.0 / 3.0) <= q.error_bound + 1e-12);
}

TEST_CASE("staircase agrees with the ternary digit oracle") {
  CantorSet k;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int exact = 0;
  for (int i = 0; i < 4000; ++i) {
    double t = u(rng);
    if (i % 4 == 0) {
      // Points of the Cantor set itself: random digits 0/2.
      t = 0.0;
      double w = 1.0;
      for (int d = 0; d < 30; ++d) {
        w /= 3.0;
        if (rng() & 1) t += 2.0 * w;
      }
    }
    Bracketed s = staircase(k, t);
    DigitOracle o = ternary_digits(t);
    // Snapping within a few ulps costs at most the Hölder modulus of that offset.
    CHECK(std::abs(s.value - o.value) <= s.error_bound + o.error + 2e-10);
    if (s.error_bound == 0.0) ++exact;
  }
  CHECK(exact > 1000);
}

TEST_CASE("staircase is nondecreasing and flat on gaps") {
  CantorSet k;
  double prev = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    double t = i / 20000.0;
    double v = staircase(k, t).value;
    CHECK(v >= prev - 1e-9);
    prev = v;
  }
  for (const Interval& g : k.gaps(6)) {
    double a = staircase(k, g.lo).value;
    CHECK(staircase(k, 0.5 * (g.lo + g.hi)).value == a);
    CHECK(staircase(k, g.hi).value == a);
    CHECK(staircase(k, g.lo).error_bound == 0.0);
  }
}

TEST_CASE("f is increasing with slope one half on gaps") {
  CantorSet k;
  CHECK(f_eval(k, 0.0).value == 0.0);
  CHECK(f_eval(k, 1.0).value == 1.0);
  CHECK(f_eval(k, 1.0 / 3.0).value == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  for (const Interval& g : k.gaps(8)) {
    double slope = (f_eval(k, g.hi).value - f_eval(k, g.lo).value) / (g.hi - g.lo);
    CHECK(slope == doctest::Approx(0.5).epsilon(1e-9));
  }
  double prev = -1.0;
  for (int i = 0; i <= 5000; ++i) {
    double v = f_eval(k, i / 5000.0).value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("F matches exact rational values") {
  CantorSet k;
  CHECK(F_eval(k, 0.0).value == 0.0);
  Bracketed one = F_eval(k, 1.0);
  CHECK(std::abs(one.value - 0.125) <= 1e-15);
  CHECK(one.value <= 0.25);
  // Exact fractions from the recursive integral of the middle-thirds staircase.
  const std::pair<double, double> cases[] = {
      {1.0 / 3.0, 5.0 / 288.0},    {2.0 / 9.0, 43.0 / 5184.0},  {7.0 / 27.0, 1013.0 / 93312.0},
      {0.5, 7.0 / 192.0},          {20.0 / 27.0, 6629.0 / 93312.0},
  };
  for (auto [u, expect] : cases) {
    Bracketed b = F_eval(k, u);
    CHECK(std::abs(b.value - expect) <= b.error_bound + 1e-15);
    CHECK(b.error_bound < 1e-12);
  }
}

TEST_CASE("F is strictly convex on a uniform grid") {
  CantorSet k;
  const int n = 2000;
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = F_eval(k, static_cast<double>(i) / n).value;
  for (int i = 1; i < n; ++i) CHECK(v[i + 1] - 2 * v[i] + v[i - 1] > 0.0);
}

TEST_CASE("general Cantor sets") {
  CantorSet k(3, 0.2);
  CHECK(k.dimension() == doctest::Approx(std::log(3.0) / std::log(5.0)));
  CHECK(k.gap() == doctest::Approx(0.2));
  CHECK(k.staircase_integral() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(staircase(k, 0.4).value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(staircase(k, 0.6).value == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(staircase(k, 0.2).value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(F_eval(k, 1.0).value == doctest::Approx(0.125).epsilon(1e-14));
  auto cover = k.level_intervals(3);
  CHECK(cover.size() == 27);
  for (const Interval& i : cover) CHECK(i.length() == doctest::Approx(0.008));
  CHECK(k.gaps(3).size() == 26);
  CHECK(k.covering_length(3) == doctest::Approx(0.216));
}

TEST_CASE("rejects invalid parameters") {
  CHECK_THROWS_AS(CantorSet(1, 0.3), Error);
  CHECK_THROWS_AS(CantorSet(2, 0.5), Error);
  CHECK_THROWS_AS(CantorSet(3, 0.4), Error);
  CantorSet k;
  CHECK_THROWS_AS(staircase(k, 1.5), Error);
  CHECK_THROWS_AS(F_eval(k, -0.1), Error);
}
