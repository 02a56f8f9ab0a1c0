#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <stdexcept>

#include "gci/convex_sets.hpp"
#include "gci/gaussian.hpp"

using namespace gci;
using namespace gci::gaussian;

namespace {

double standard_normal_density(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

// Independent oracle for the normal CDF: composite Simpson on [-12, x] with
// a step small enough that the rule error is far below 1e-13.
double simpson_normal_cdf(double x) {
  const double lo = -12.0;
  const int intervals = 600000;  // must be even
  const double h = (x - lo) / intervals;
  double sum = standard_normal_density(lo) + standard_normal_density(x);
  for (int i = 1; i < intervals; ++i) {
    const double weight = (i % 2 == 1) ? 4.0 : 2.0;
    sum += weight * standard_normal_density(lo + i * h);
  }
  return sum * h / 3.0;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("normal cdf matches an independent Simpson integration") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.0) - simpson_normal_cdf(1.0)) <= 1e-12);
  CHECK(std::abs(normal_cdf(0.5) - simpson_normal_cdf(0.5)) <= 1e-12);
  CHECK(std::abs(normal_cdf(-2.0) - simpson_normal_cdf(-2.0)) <= 1e-12);
  for (double x = -3.0; x <= 3.0; x += 0.25) {
    CHECK(std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0) <= 1e-14);
    CHECK(normal_cdf(x) < normal_cdf(x + 0.25));
  }
  CHECK(normal_cdf(9.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(normal_cdf(-9.0) > 0.0);
}

TEST_CASE("normal quantile inverts the cdf") {
  for (double x = -4.0; x <= 4.0; x += 0.5) {
    CHECK(std::abs(normal_quantile(normal_cdf(x)) - x) <= 1e-9);
  }
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("exact ball measure matches closed forms") {
  // In dimension 2 the measure of Ball(r) is 1 - exp(-r^2/2).
  const double half_radius = std::sqrt(2.0 * std::log(2.0));
  CHECK(std::abs(measure_ball_exact(half_radius, 2).value - 0.5) <= 1e-14);
  for (double r = 0.3; r <= 3.0; r += 0.4) {
    CHECK(std::abs(measure_ball_exact(r, 2).value + std::expm1(-0.5 * r * r)) <= 1e-14);
  }

  // In dimension 1 it is 2*Phi(r) - 1, cross-checked against the Simpson oracle.
  CHECK(std::abs(measure_ball_exact(1.0, 1).value - (2.0 * simpson_normal_cdf(1.0) - 1.0)) <=
        1e-12);

  // In dimension 4 the chi-square CDF has the elementary form 1 - e^{-x}(1+x)
  // at x = r^2/2.
  const double x = 0.5;
  CHECK(std::abs(measure_ball_exact(1.0, 4).value - (1.0 - std::exp(-x) * (1.0 + x))) <= 1e-14);

  CHECK(std::abs(measure_ball_exact(1000.0, 3).value - 1.0) <= 1e-12);
  CHECK(measure_ball_exact(1e-8, 3).value <= 1e-12);

  const auto e = measure_ball_exact(1.0, 2);
  CHECK(e.ci_low == e.value);
  CHECK(e.ci_high == e.value);
  CHECK(e.source == Source::exact);
  CHECK(e.samples == 0);

  CHECK_THROWS_AS(measure_ball_exact(0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(measure_ball_exact(1.0, 0), std::invalid_argument);
}

TEST_CASE("exact box measure is the product of axis factors") {
  const double one_axis = 2.0 * simpson_normal_cdf(1.0) - 1.0;
  CHECK(std::abs(measure_box_exact(vec2(1.0, 1.0)).value - one_axis * one_axis) <= 1e-12);

  Vector w(1);
  w << 1.0;
  CHECK(std::abs(measure_box_exact(w).value - measure_ball_exact(1.0, 1).value) <= 1e-15);
  CHECK(std::abs(measure_box_exact(vec2(100.0, 100.0)).value - 1.0) <= 1e-12);
  CHECK_THROWS_AS(measure_box_exact(vec2(1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("wilson interval brackets the point estimate") {
  for (double successes : {0.0, 1.0, 12.5, 70.0, 100.0}) {
    const auto iv = wilson_interval(successes, 100.0, 0.95);
    const double p = successes / 100.0;
    CHECK(iv.low >= 0.0);
    CHECK(iv.high <= 1.0);
    CHECK(iv.low <= p);
    CHECK(iv.high >= p);
  }
  CHECK(wilson_interval(0.0, 50.0, 0.99).low == 0.0);
  CHECK(wilson_interval(50.0, 50.0, 0.99).high >= 1.0 - 1e-12);

  // More data tightens the interval at the same proportion.
  const auto coarse = wilson_interval(50.0, 100.0, 0.95);
  const auto fine = wilson_interval(500.0, 1000.0, 0.95);
  CHECK(fine.high - fine.low < coarse.high - coarse.low);

  // Higher confidence widens it.
  const auto loose = wilson_interval(50.0, 100.0, 0.99);
  CHECK(loose.high - loose.low > coarse.high - coarse.low);

  CHECK_THROWS_AS(wilson_interval(1.0, 0.0, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(5.0, 4.0, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(1.0, 10.0, 1.0), std::invalid_argument);
}

TEST_CASE("monte carlo estimates are reproducible and honest") {
  const auto body = make_ball(2, 1.0);
  McOptions opt;
  opt.samples = 200000;
  opt.seed = 7;
  opt.confidence = 0.99;

  const auto first = measure_mc(body, opt);
  const auto second = measure_mc(body, opt);
  CHECK(first.value == second.value);
  CHECK(first.ci_low == second.ci_low);
  CHECK(first.ci_high == second.ci_high);
  CHECK(first.samples == 200000);
  CHECK(first.source == Source::monte_carlo);
  REQUIRE(first.seed.has_value());
  CHECK(*first.seed == 7);

  const double exact = measure_ball_exact(1.0, 2).value;
  CHECK(first.ci_low <= exact);
  CHECK(first.ci_high >= exact);
  CHECK(first.ci_high - first.ci_low < 0.01);

  // A different seed moves the draw but stays near the target.
  opt.seed = 8;
  const auto third = measure_mc(body, opt);
  CHECK(std::abs(third.value - exact) < 0.01);
}

TEST_CASE("monte carlo saturates on the whole space") {
  const auto wide = make_box(vec2(50.0, 50.0));
  McOptions opt;
  opt.samples = 10000;
  const auto e = measure_mc(wide, opt);
  CHECK(e.value == 1.0);
  CHECK(e.ci_high == 1.0);
  // 5000 antithetic pairs at 99% leave the lower bound within ~z^2/pairs of 1.
  CHECK(e.ci_low > 0.995);
}

TEST_CASE("antithetic pairing makes reflected indicators identical") {
  // f and its reflection share every hit because each pair evaluates x and -x.
  McOptions opt;
  opt.samples = 100000;
  opt.seed = 21;
  const auto plain = measure_mc(
      2, [](const Vector& x) { return x(0) >= 0.3 && x.norm() <= 2.0; }, opt);
  const auto reflected = measure_mc(
      2, [](const Vector& x) { return -x(0) >= 0.3 && x.norm() <= 2.0; }, opt);
  CHECK(plain.value == reflected.value);
  CHECK(plain.ci_low == reflected.ci_low);
  CHECK(plain.ci_high == reflected.ci_high);
}

TEST_CASE("tristate sampling widens only the upper bound") {
  McOptions opt;
  opt.samples = 400000;
  opt.seed = 3;
  const auto e = measure_mc_tristate(
      2,
      [](const Vector& x) {
        const double r = x.norm();
        if (r < 0.5) return Tristate::hit;
        if (r <= 1.0) return Tristate::maybe;
        return Tristate::miss;
      },
      opt);
  const double inner = measure_ball_exact(0.5, 2).value;
  const double outer = measure_ball_exact(1.0, 2).value;
  CHECK(std::abs(e.value - inner) < 0.005);
  CHECK(e.ci_high > outer - 0.005);  // the maybes cover the full annulus
  CHECK(e.ci_low <= e.value);
  CHECK(e.ci_high <= 1.0);
}

TEST_CASE("tetrad sampling is invariant under sign flips of either block") {
  McOptions opt;
  opt.samples = 100000;
  opt.seed = 5;
  const auto base = measure_mc_tetrad(
      1, 1, [](const Vector& x, const Vector& z) { return x(0) <= 1.0 && z(0) + x(0) <= 1.0; },
      opt);
  const auto flip_x = measure_mc_tetrad(
      1, 1, [](const Vector& x, const Vector& z) { return -x(0) <= 1.0 && z(0) - x(0) <= 1.0; },
      opt);
  const auto flip_z = measure_mc_tetrad(
      1, 1, [](const Vector& x, const Vector& z) { return x(0) <= 1.0 && -z(0) + x(0) <= 1.0; },
      opt);
  CHECK(base.value == flip_x.value);
  CHECK(base.value == flip_z.value);
  CHECK(base.ci_low == flip_x.ci_low);
  CHECK(base.ci_high == flip_z.ci_high);

  // Product of independent coordinates against the closed form.
  const auto product = measure_mc_tetrad(
      1, 1,
      [](const Vector& x, const Vector& z) {
        return std::abs(x(0)) <= 1.0 && std::abs(z(0)) <= 1.0;
      },
      opt);
  const double one_axis = measure_ball_exact(1.0, 1).value;
  CHECK(std::abs(product.value - one_axis * one_axis) < 0.01);
}

TEST_CASE("quadrature reproduces closed forms in low dimension") {
  // Cell edges land exactly on +-1, so boundary cells contribute nothing and
  // the remaining error is the midpoint rule's O(width^2) density bias,
  // roughly 1.2e-6 per unit of mass at the default 1/128 cell width.
  const auto line = measure_quadrature(make_ball(1, 1.0));
  CHECK(std::abs(line.value - measure_ball_exact(1.0, 1).value) <= 2e-5);
  CHECK(line.source == Source::quadrature);
  CHECK(line.samples == 0);

  const auto disk = measure_quadrature(make_ball(2, 1.0));
  CHECK(std::abs(disk.value - measure_ball_exact(1.0, 2).value) <= 1e-4);

  const auto square = measure_quadrature(make_box(vec2(1.0, 1.0)));
  CHECK(std::abs(square.value - measure_box_exact(vec2(1.0, 1.0)).value) <= 2e-5);

  QuadratureOptions coarse;
  coarse.cells_per_axis = 256;
  const auto solid = measure_quadrature(make_ball(3, 1.0), coarse);
  CHECK(std::abs(solid.value - measure_ball_exact(1.0, 3).value) <= 2e-3);

  // The interval accounts for truncation and skipped cells.
  CHECK(disk.ci_low <= disk.value);
  CHECK(disk.ci_high >= disk.value);
}

TEST_CASE("quadrature reports an empty-looking tiny body as zero") {
  const auto e = measure_quadrature(make_ball(2, 1e-9));
  CHECK(e.value == 0.0);
  CHECK(e.ci_high <= 1e-6);
}

TEST_CASE("quadrature rejects unsupported requests") {
  CHECK_THROWS_AS(measure_quadrature(make_ball(4, 1.0)), std::invalid_argument);
  QuadratureOptions bad;
  bad.bounds = 4.0;
  CHECK_THROWS_AS(measure_quadrature(make_ball(2, 1.0), bad), std::invalid_argument);
  bad.bounds = 8.0;
  bad.cells_per_axis = 32;
  CHECK_THROWS_AS(measure_quadrature(make_ball(2, 1.0), bad), std::invalid_argument);
}

TEST_CASE("measure dispatch picks closed forms where they exist") {
  McOptions budget;
  budget.samples = 50000;

  CHECK(measure(make_ball(3, 0.8), budget).source == Source::exact);
  CHECK(measure(make_box(vec2(1.0, 0.5)), budget).source == Source::exact);

  // A rotated ball snaps back to the closed form bit-exactly.
  Matrix rot(2, 2);
  const double c = std::cos(0.7), s = std::sin(0.7);
  rot << c, -s, s, c;
  const auto rotated = measure(linear_image(rot, make_ball(2, 1.0)), budget);
  CHECK(rotated.source == Source::exact);
  CHECK(rotated.value == measure_ball_exact(1.0, 2).value);

  // A scaled rotation keeps the closed form with the scaled radius.
  const auto scaled = measure(linear_image(2.0 * rot, make_ball(2, 1.0)), budget);
  CHECK(scaled.source == Source::exact);
  CHECK(scaled.value == doctest::Approx(measure_ball_exact(2.0, 2).value).epsilon(1e-14));

  // Anisotropic maps and compound shapes fall back to sampling.
  Matrix stretch = Matrix::Identity(2, 2);
  stretch(1, 1) = 2.0;
  CHECK(measure(linear_image(stretch, make_ball(2, 1.0)), budget).source == Source::monte_carlo);
  CHECK(measure(linear_image(rot, make_box(vec2(1.0, 1.0))), budget).source ==
        Source::monte_carlo);
  CHECK(measure(intersect(make_ball(2, 1.0), make_box(vec2(1.0, 1.0))), budget).source ==
        Source::monte_carlo);

  // The sampled path still agrees with the truth it replaces.
  const auto sampled = measure(linear_image(rot, make_box(vec2(1.0, 1.0))), budget);
  const double truth = measure_box_exact(vec2(1.0, 1.0)).value;
  CHECK(sampled.ci_low <= truth);
  CHECK(sampled.ci_high >= truth);
}

TEST_CASE("interval coverage holds across seeds") {
  // A cheap pre-check of the calibration gate: 40 seeds, 95% intervals.
  const auto body = make_ball(1, 1.0);
  const double exact = measure_ball_exact(1.0, 1).value;
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    McOptions opt;
    opt.samples = 20000;
    opt.seed = seed;
    opt.confidence = 0.95;
    const auto e = measure_mc(body, opt);
    if (e.ci_low <= exact && exact <= e.ci_high) ++covered;
  }
  CHECK(covered >= 33);
}
