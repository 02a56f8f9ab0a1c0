#ifndef GCI_CHERNOFF_HPP
#define GCI_CHERNOFF_HPP

namespace gci::chernoff {

/// (k^2 e^{1-k^2})^{n/2} for 0 < k <= 1, evaluated in log space so large n
/// cannot underflow intermediate factors.
double chernoff_bound(double k, int n);

/// The pre-optimization tail bound (e^{t k^2} / (1+t))^{n/2} for t > -1.
double markov_bound(double k, int n, double t);

/// The minimizer t = (1-k^2)/k^2 of markov_bound in t. First-order
/// optimality is re-verified by central differences before returning.
double optimal_t(double k);

/// Smallest positive root of 3c^2 e^{1-3c^2} = 3/4, by bisection on
/// (0, 3^{-1/2}). The sign change across the bracket is validated at
/// runtime; a failure signals an implementation bug, not bad input.
double find_c1(double tol);

/// (1/2) e^{-1/2}.
double constant_c0();

struct BoundComparison {
  double exact;  // measure of Ball(k sqrt(n)) in dimension n
  double bound;  // chernoff_bound(k, n)
};

/// The two sides of the tail comparison; exact <= bound for all valid k, n.
BoundComparison bound_vs_exact(double k, int n);

}  // namespace gci::chernoff

#endif  // GCI_CHERNOFF_HPP
