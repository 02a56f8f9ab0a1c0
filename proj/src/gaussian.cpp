#include "gci/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <variant>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gci/rng.hpp"

namespace gci::gaussian {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

// Evaluations per deterministic chunk. Each chunk reseeds its own engine, so
// estimates are reproducible regardless of how the loop is scheduled.
constexpr std::int64_t kChunkEvaluations = 4096;

// Compensated accumulator for long sums of small cell weights.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

MeasureEstimate exact_estimate(double value) {
  require(value >= 0.0 && value <= 1.0, "exact measure outside [0, 1]");
  MeasureEstimate e;
  e.value = value;
  e.ci_low = value;
  e.ci_high = value;
  e.source = Source::exact;
  e.samples = 0;
  return e;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "quantile argument outside (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

MeasureEstimate measure_ball_exact(double radius, int n) {
  require(n >= 1, "dimension must be positive");
  require(radius > 0.0, "radius must be positive");
  return exact_estimate(boost::math::gamma_p(0.5 * n, 0.5 * radius * radius));
}

MeasureEstimate measure_box_exact(const Vector& halfwidths) {
  require(halfwidths.size() >= 1, "dimension must be positive");
  double value = 1.0;
  for (int i = 0; i < halfwidths.size(); ++i) {
    require(halfwidths(i) > 0.0, "halfwidths must be positive");
    value *= 2.0 * normal_cdf(halfwidths(i)) - 1.0;
  }
  return exact_estimate(std::clamp(value, 0.0, 1.0));
}

Interval wilson_interval(double successes, double trials, double confidence) {
  require(trials > 0.0, "trial count must be positive");
  require(confidence > 0.0 && confidence < 1.0, "confidence outside (0, 1)");
  require(successes >= 0.0 && successes <= trials, "successes outside [0, trials]");
  const double z = normal_quantile(0.5 + 0.5 * confidence);
  const double z2 = z * z;
  const double p = successes / trials;
  const double denom = 1.0 + z2 / trials;
  const double center = (p + z2 / (2.0 * trials)) / denom;
  const double half =
      (z / denom) * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials));
  // In exact arithmetic the interval brackets p and stays in [0, 1]; rounding
  // at the edges (p near 0 or 1) can break both, so restore them here.
  const double low = std::min(std::clamp(center - half, 0.0, 1.0), p);
  const double high = std::max(std::clamp(center + half, 0.0, 1.0), p);
  return {low, high};
}

MeasureEstimate measure_mc_tristate(int n, const std::function<Tristate(const Vector&)>& member,
                                    const McOptions& opt) {
  require(n >= 1, "dimension must be positive");
  require(opt.samples >= 100, "sample budget too small");
  require(opt.confidence > 0.0 && opt.confidence < 1.0, "confidence outside (0, 1)");
  const std::int64_t pairs = opt.samples / 2;
  const std::int64_t evaluations = 2 * pairs;
  const std::int64_t pairs_per_chunk = kChunkEvaluations / 2;
  std::int64_t hits = 0;
  std::int64_t maybes = 0;
  Vector x(n);
  Vector neg(n);
  const auto tally = [&](const Vector& point) {
    switch (member(point)) {
      case Tristate::hit: ++hits; break;
      case Tristate::maybe: ++maybes; break;
      case Tristate::miss: break;
    }
  };
  const std::int64_t chunks = (pairs + pairs_per_chunk - 1) / pairs_per_chunk;
  for (std::int64_t chunk = 0; chunk < chunks; ++chunk) {
    auto engine = chunk_engine(opt.seed, static_cast<std::uint64_t>(chunk));
    std::normal_distribution<double> normal;
    const std::int64_t in_chunk = std::min(pairs_per_chunk, pairs - chunk * pairs_per_chunk);
    for (std::int64_t i = 0; i < in_chunk; ++i) {
      for (int j = 0; j < n; ++j) x(j) = normal(engine);
      neg = -x;
      tally(x);
      tally(neg);
    }
  }
  // Antithetic halves of one pair are dependent, so the Wilson score counts
  // pairs as trials with the pair-average success. That variance is never
  // larger than the Bernoulli variance at the same mean, so the interval
  // stays conservative.
  const double trials = static_cast<double>(pairs);
  MeasureEstimate e;
  e.value = static_cast<double>(hits) / static_cast<double>(evaluations);
  e.ci_low = wilson_interval(0.5 * static_cast<double>(hits), trials, opt.confidence).low;
  e.ci_high =
      wilson_interval(std::min(0.5 * static_cast<double>(hits + maybes), trials), trials,
                      opt.confidence)
          .high;
  e.source = Source::monte_carlo;
  e.samples = evaluations;
  e.seed = opt.seed;
  return e;
}

MeasureEstimate measure_mc(int n, const std::function<bool(const Vector&)>& member,
                           const McOptions& opt) {
  return measure_mc_tristate(
      n, [&](const Vector& x) { return member(x) ? Tristate::hit : Tristate::miss; }, opt);
}

MeasureEstimate measure_mc(const SymmetricConvexBody& body, const McOptions& opt) {
  return measure_mc(
      body.dimension(), [&](const Vector& x) { return body.contains(x); }, opt);
}

MeasureEstimate measure_mc_tetrad(int m, int n,
                                  const std::function<bool(const Vector&, const Vector&)>& member,
                                  const McOptions& opt) {
  require(m >= 1 && n >= 1, "dimensions must be positive");
  require(opt.samples >= 100, "sample budget too small");
  require(opt.confidence > 0.0 && opt.confidence < 1.0, "confidence outside (0, 1)");
  const std::int64_t tetrads = opt.samples / 4;
  require(tetrads >= 1, "sample budget too small");
  const std::int64_t evaluations = 4 * tetrads;
  const std::int64_t tetrads_per_chunk = kChunkEvaluations / 4;
  std::int64_t hits = 0;
  Vector x(m);
  Vector z(n);
  Vector xneg(m);
  Vector zneg(n);
  const std::int64_t chunks = (tetrads + tetrads_per_chunk - 1) / tetrads_per_chunk;
  for (std::int64_t chunk = 0; chunk < chunks; ++chunk) {
    auto engine = chunk_engine(opt.seed, static_cast<std::uint64_t>(chunk));
    std::normal_distribution<double> normal;
    const std::int64_t in_chunk =
        std::min(tetrads_per_chunk, tetrads - chunk * tetrads_per_chunk);
    for (std::int64_t i = 0; i < in_chunk; ++i) {
      for (int j = 0; j < m; ++j) x(j) = normal(engine);
      for (int j = 0; j < n; ++j) z(j) = normal(engine);
      xneg = -x;
      zneg = -z;
      hits += member(x, z) ? 1 : 0;
      hits += member(xneg, z) ? 1 : 0;
      hits += member(x, zneg) ? 1 : 0;
      hits += member(xneg, zneg) ? 1 : 0;
    }
  }
  const double trials = static_cast<double>(tetrads);
  MeasureEstimate e;
  e.value = static_cast<double>(hits) / static_cast<double>(evaluations);
  const Interval ci =
      wilson_interval(0.25 * static_cast<double>(hits), trials, opt.confidence);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.source = Source::monte_carlo;
  e.samples = evaluations;
  e.seed = opt.seed;
  return e;
}

MeasureEstimate measure_quadrature_tristate(int n,
                                            const std::function<Tristate(const Vector&)>& member,
                                            const QuadratureOptions& opt) {
  require(n >= 1 && n <= 3, "quadrature supports dimensions 1 to 3");
  require(opt.bounds >= 8.0, "quadrature bounds below 8");
  require(opt.cells_per_axis >= 64, "fewer than 64 cells per axis");
  const int cells = opt.cells_per_axis;
  const double step = 2.0 * opt.bounds / cells;
  std::vector<double> mids(cells);
  std::vector<double> weights(cells);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (int i = 0; i < cells; ++i) {
    mids[i] = -opt.bounds + (i + 0.5) * step;
    weights[i] = norm * std::exp(-0.5 * mids[i] * mids[i]) * step;
  }

  KahanSum hit_mass;
  KahanSum maybe_mass;
  KahanSum skipped_mass;
  Vector point(n);
  std::vector<int> index(n, 0);
  const double skip_threshold = 1e-18;
  while (true) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) w *= weights[index[d]];
    if (w < skip_threshold) {
      skipped_mass.add(w);
    } else {
      for (int d = 0; d < n; ++d) point(d) = mids[index[d]];
      switch (member(point)) {
        case Tristate::hit: hit_mass.add(w); break;
        case Tristate::maybe: maybe_mass.add(w); break;
        case Tristate::miss: break;
      }
    }
    int d = 0;
    for (; d < n; ++d) {
      if (++index[d] < cells) break;
      index[d] = 0;
    }
    if (d == n) break;
  }

  // Mass certifiably unaccounted for: everything beyond the truncation box
  // (union bound over axes) plus the cells skipped as negligible. The
  // midpoint-rule discretization error on boundary cells is not certified.
  const double tail = n * (1.0 - (2.0 * normal_cdf(opt.bounds) - 1.0));
  const double slack = tail + skipped_mass.sum;
  MeasureEstimate e;
  e.value = hit_mass.sum;
  e.ci_low = std::max(0.0, hit_mass.sum - slack);
  e.ci_high = std::min(1.0, hit_mass.sum + maybe_mass.sum + slack);
  e.source = Source::quadrature;
  e.samples = 0;
  return e;
}

MeasureEstimate measure_quadrature(int n, const std::function<bool(const Vector&)>& member,
                                   const QuadratureOptions& opt) {
  return measure_quadrature_tristate(
      n, [&](const Vector& x) { return member(x) ? Tristate::hit : Tristate::miss; }, opt);
}

MeasureEstimate measure_quadrature(const SymmetricConvexBody& body, const QuadratureOptions& opt) {
  return measure_quadrature(
      body.dimension(), [&](const Vector& x) { return body.contains(x); }, opt);
}

namespace {

// Radius of the ball a body is an exact rotation/scaling of, when that is
// recognizable: a ball itself, or a chain of linear images over a ball whose
// maps satisfy t' * t = c^2 * I to within 1e-12. A factor within 1e-12 of
// one snaps to exactly one so that identity-like maps keep the base value
// bit for bit.
std::optional<double> scaled_ball_radius(const SymmetricConvexBody& body) {
  if (const auto* ball = std::get_if<Ball>(&body.shape())) return ball->radius;
  const auto* image = std::get_if<LinearImage>(&body.shape());
  if (image == nullptr) return std::nullopt;
  const auto base = scaled_ball_radius(*image->base);
  if (!base) return std::nullopt;
  const Matrix gram = image->transform.transpose() * image->transform;
  const double c2 = gram.trace() / gram.rows();
  const Matrix deviation = gram - c2 * Matrix::Identity(gram.rows(), gram.cols());
  if (deviation.cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, std::abs(c2))) return std::nullopt;
  if (c2 <= 0.0) return std::nullopt;
  const double c = std::abs(c2 - 1.0) <= 1e-12 ? 1.0 : std::sqrt(c2);
  return c * *base;
}

}  // namespace

MeasureEstimate measure(const SymmetricConvexBody& body, const McOptions& opt) {
  if (const auto* ball = std::get_if<Ball>(&body.shape()))
    return measure_ball_exact(ball->radius, body.dimension());
  if (const auto* box = std::get_if<Box>(&body.shape())) return measure_box_exact(box->halfwidths);
  if (std::get_if<LinearImage>(&body.shape()) != nullptr) {
    if (const auto radius = scaled_ball_radius(body))
      return measure_ball_exact(*radius, body.dimension());
  }
  return measure_mc(body, opt);
}

}  // namespace gci::gaussian
