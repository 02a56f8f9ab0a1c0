#ifndef GCI_GAUSSIAN_HPP
#define GCI_GAUSSIAN_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "gci/convex_sets.hpp"

namespace gci::gaussian {

enum class Source { exact, quadrature, monte_carlo };

/// A Gaussian-measure value with a two-sided interval.
/// Exact values carry a collapsed interval. Monte Carlo intervals are Wilson
/// scores whose trial count is the number of independent draws (antithetic
/// pairs or sign tetrads), not the number of evaluations, so they stay honest
/// when the evaluations within a pair are perfectly correlated. Quadrature
/// intervals account for domain truncation and skipped or undecided cells,
/// not for the midpoint discretization error of boundary cells.
struct MeasureEstimate {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  Source source = Source::exact;
  std::int64_t samples = 0;  // 0 for exact and quadrature
  std::optional<std::uint64_t> seed;
};

MeasureEstimate exact_estimate(double value);

/// Standard normal CDF, absolute error below 1e-12.
double normal_cdf(double x);

/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Measure of Ball(radius) in dimension n: the regularized lower incomplete
/// gamma P(n/2, radius^2/2).
MeasureEstimate measure_ball_exact(double radius, int n);

/// Measure of Box(halfwidths): the product of 2*Phi(w_i) - 1.
MeasureEstimate measure_box_exact(const Vector& halfwidths);

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for `successes` out of `trials` at the given
/// two-sided confidence. `successes` may be fractional (averages over
/// antithetic groups); the interval always contains successes/trials.
Interval wilson_interval(double successes, double trials, double confidence);

struct McOptions {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  double confidence = 0.99;
};

enum class Tristate { miss, hit, maybe };

/// Seeded Monte Carlo estimate. Draws are organized in fixed 4096-evaluation
/// chunks, each seeded from (seed, chunk index), and accumulated in chunk
/// order, so the result depends only on (seed, samples, confidence).
/// Antithetic pairing is always on: each base draw x is evaluated together
/// with -x, and negation propagates through membership bit-exactly.
MeasureEstimate measure_mc(const SymmetricConvexBody& body, const McOptions& opt);

/// Same estimator for an arbitrary indicator on R^n.
MeasureEstimate measure_mc(int n, const std::function<bool(const Vector&)>& member,
                           const McOptions& opt);

/// Indicators that can abstain. A maybe never enters the point estimate; it
/// widens the upper confidence bound as if it could have been a hit.
MeasureEstimate measure_mc_tristate(int n, const std::function<Tristate(const Vector&)>& member,
                                    const McOptions& opt);

/// Joint estimator on R^m x R^n that evaluates the predicate on all four
/// sign combinations (+-x, +-z) of each base draw. The hit count is then
/// invariant, bit-exactly, under predicates that differ by either sign flip.
MeasureEstimate measure_mc_tetrad(int m, int n,
                                  const std::function<bool(const Vector&, const Vector&)>& member,
                                  const McOptions& opt);

struct QuadratureOptions {
  double bounds = 8.0;     // integrate over [-bounds, bounds]^n
  int cells_per_axis = 2048;
};

/// Midpoint-rule tensor grid of the Gaussian density times the indicator,
/// dimension at most 3. Cells whose density weight falls below a fixed
/// threshold are skipped and their mass is added to the interval instead.
MeasureEstimate measure_quadrature(const SymmetricConvexBody& body,
                                   const QuadratureOptions& opt = {});
MeasureEstimate measure_quadrature(int n, const std::function<bool(const Vector&)>& member,
                                   const QuadratureOptions& opt = {});
MeasureEstimate measure_quadrature_tristate(int n,
                                            const std::function<Tristate(const Vector&)>& member,
                                            const QuadratureOptions& opt = {});

/// Dispatch: Ball and Box use the closed forms; a LinearImage chain over a
/// Ball whose composite map is a scalar multiple of an orthogonal matrix uses
/// the scaled-radius closed form (the scale snaps to 1 when within 1e-12, so
/// rotating a ball keeps its measure bit-exactly); everything else falls back
/// to measure_mc.
MeasureEstimate measure(const SymmetricConvexBody& body, const McOptions& budget);

}  // namespace gci::gaussian

#endif  // GCI_GAUSSIAN_HPP
