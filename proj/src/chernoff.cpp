#include "gci/chernoff.hpp"

#include <cmath>
#include <stdexcept>

#include "gci/gaussian.hpp"

namespace gci::chernoff {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

double chernoff_bound(double k, int n) {
  require(k > 0.0 && k <= 1.0, "k must lie in (0, 1]");
  require(n >= 1, "dimension must be positive");
  return std::exp(0.5 * n * (2.0 * std::log(k) + 1.0 - k * k));
}

double markov_bound(double k, int n, double t) {
  require(k > 0.0 && k <= 1.0, "k must lie in (0, 1]");
  require(n >= 1, "dimension must be positive");
  require(t > -1.0, "t must exceed -1");
  return std::exp(0.5 * n * (t * k * k - std::log1p(t)));
}

double optimal_t(double k) {
  require(k > 0.0 && k <= 1.0, "k must lie in (0, 1]");
  const double t = (1.0 - k * k) / (k * k);
  const double h = 1e-5 * std::max(1.0, std::abs(t));
  const double derivative = (markov_bound(k, 1, t + h) - markov_bound(k, 1, t - h)) / (2.0 * h);
  if (std::abs(derivative) > 1e-8)
    throw std::logic_error("first-order optimality check failed for optimal_t");
  return t;
}

double find_c1(double tol) {
  require(tol > 0.0, "tolerance must be positive");
  const auto g = [](double c) { return 3.0 * c * c * std::exp(1.0 - 3.0 * c * c) - 0.75; };
  double lo = 0.0;
  double hi = 1.0 / std::sqrt(3.0);
  if (!(g(lo) < 0.0 && g(hi) > 0.0))
    throw std::logic_error("root bracket for find_c1 failed validation");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  if (hi - lo > tol) throw std::logic_error("bisection for find_c1 did not converge");
  return 0.5 * (lo + hi);
}

double constant_c0() { return 0.5 * std::exp(-0.5); }

BoundComparison bound_vs_exact(double k, int n) {
  require(k > 0.0 && k <= 1.0, "k must lie in (0, 1]");
  require(n >= 1, "dimension must be positive");
  const double exact =
      gaussian::measure_ball_exact(k * std::sqrt(static_cast<double>(n)), n).value;
  return {exact, chernoff_bound(k, n)};
}

}  // namespace gci::chernoff
