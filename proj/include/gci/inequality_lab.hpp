#ifndef GCI_INEQUALITY_LAB_HPP
#define GCI_INEQUALITY_LAB_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gci/convex_sets.hpp"
#include "gci/gaussian.hpp"
#include "gci/matrix_lab.hpp"

namespace gci::inequality_lab {

using gaussian::MeasureEstimate;

/// One side of an inequality: a value with a two-sided interval, possibly
/// built from several measure estimates.
struct ValueWithCi {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

ValueWithCi from_estimate(const MeasureEstimate& e);

/// Interval for c * v with c >= 0. Scaling by exactly 1.0 is a no-op.
ValueWithCi scaled(const ValueWithCi& v, double c);

/// Conservative enclosure of the product of two probability estimates:
/// first-order error propagation (kept conservative by including the
/// quadratic remainder) when both relative half-widths are at most 0.1, the
/// full interval product otherwise; clamped to [0, 1].
ValueWithCi product(const ValueWithCi& x, const ValueWithCi& y);

enum class Verdict { confirmed, violated, inconclusive };

/// confirmed  iff lhs.ci_high <= rhs.ci_low,
/// violated   iff lhs.ci_low  >  rhs.ci_high,
/// inconclusive otherwise. Ties of collapsed exact intervals confirm (the
/// inequalities are non-strict); overlapping statistical intervals stay
/// inconclusive, so equality constructions under sampling report
/// inconclusive rather than a spurious verdict.
Verdict decide(const ValueWithCi& lhs, const ValueWithCi& rhs);

const char* to_string(Verdict v);

struct InequalityReport {
  std::string name;
  int n = 0;
  ValueWithCi lhs;
  ValueWithCi rhs;
  double margin = 0.0;  // rhs.value - lhs.value
  Verdict verdict = Verdict::inconclusive;
  std::int64_t samples = 0;  // per-measure budget
  std::uint64_t seed = 0;
  std::string params;  // serialized inputs
};

enum class Engine { monte_carlo, quadrature };

/// Sampling budget shared by all checkers. One user-facing seed expands into
/// per-measure seeds through derive_seed, so each factor of an inequality
/// draws an independent stream while the whole report stays reproducible.
struct CheckBudget {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  double confidence = 0.99;
  Engine engine = Engine::monte_carlo;
  gaussian::QuadratureOptions quadrature{};
  MinkowskiOptions minkowski{};
};

/// g(A) g(B) <= g(A cap B), the full correlation inequality. Only run where
/// it is a theorem (dimension 2, ellipsoid factor, small-radius bodies).
InequalityReport check_gcc(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                           const CheckBudget& budget);

/// det(I - M'M)^{1/2} g(PA) g(RB) <= g((S+T)^{-1}(A+B)) g(A cap B).
/// The quintuple must pass check_hypotheses. Membership in the sum body is
/// decided by minkowski_member on (S+T)x; undecided probes never enter the
/// point estimate and only widen the interval, which lowers the reported
/// right side, so a confirmed verdict is conservative. Singular P or R makes
/// the left side zero and the verdict trivially confirmed.
InequalityReport check_main_theorem(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                                    const matrix_lab::MatrixQuintuple& q,
                                    const CheckBudget& budget);

/// g(2^{-1/2}A) g(2^{-1/2}B) <= g((A+B)/2) g(A cap B). Runs the quintuple
/// evaluator with M = 0, P = R = 2^{-1/2}I, S = T = I, so it is bit-identical
/// to check_main_theorem on that quintuple under a shared seed.
InequalityReport check_ssz(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                           const CheckBudget& budget);

/// g(pA) g(rB) <= g(pr(A+B)) g(A cap B) for p, r > 0 with p^2 + r^2 = 1.
/// Same evaluator, with the scalar quintuple; p = r = 2^{-1/2} reproduces
/// check_ssz bit-for-bit on a shared seed.
InequalityReport check_li(const SymmetricConvexBody& a, const SymmetricConvexBody& b, double p,
                          double r, const CheckBudget& budget);

/// g(A) g(B) <= (4/3)^{n/2} g((sqrt(3)/2)(A+B)) g(A cap B). When both bodies
/// are balls every factor has a closed form and the report is fully exact.
InequalityReport check_corollary1(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                                  const CheckBudget& budget);

/// The correlation inequality restricted to bodies inside 0.374 sqrt(n) Ball.
/// Containment is certified probabilistically before checking; a violation
/// throws instead of producing a report.
InequalityReport check_small_radius(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                                    const CheckBudget& budget);

/// Probabilistic containment certificate body within Ball(radius): along
/// `probes` random directions the body must exclude the point just outside
/// the ball boundary. For a symmetric convex body with the origin interior
/// this tests exactly whether its radial function stays within the radius.
bool contained_in_ball(const SymmetricConvexBody& body, double radius, int probes,
                       std::uint64_t seed);

/// det(I - M'M)^{1/2} g_m(A) g_n(B) <= g_{m+n}[ Q^{1/2} (A x B) ] where
/// Q = [[I, M], [M', I]]. Both sides are estimated as joint measures over
/// R^{m+n} on one shared stream (the left side through the product set
/// A x B), so at M = 0 the margin is exactly zero before any widening.
InequalityReport check_lemma1(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                              const Matrix& mmat, const CheckBudget& budget);

/// P(X in A) P(Y in B) <= det(I - M'M)^{-1/2} P(X in A, Y in B) for jointly
/// normal X, Y with cross-covariance M. The joint probability samples
/// Y = M'X + (I - M'M)^{1/2} Z over sign tetrads of (X, Z), which makes the
/// estimate invariant under M -> -M bit-exactly.
InequalityReport check_shao(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                            const Matrix& mmat, const CheckBudget& budget);

/// g(C) <= g((I+K)C) for positive-semidefinite K. Both sides share one
/// stream, so at K = 0 the margin is exactly zero.
InequalityReport check_anderson(const SymmetricConvexBody& c, const Matrix& k,
                                const CheckBudget& budget);

/// The section profile h(y) = g((A - Sy) cap (B + Ty)) on a list of shifts,
/// estimated with common random numbers: one seed shared by every y, so
/// comparisons between shifts difference out shared noise and h(-y) equals
/// h(y) bit-exactly under antithetic pairing.
struct HProfile {
  SymmetricConvexBody a;
  SymmetricConvexBody b;
  Matrix s;
  Matrix t;
  std::vector<Vector> ys;
  std::vector<MeasureEstimate> values;
};

HProfile h_profile(const SymmetricConvexBody& a, const SymmetricConvexBody& b, const Matrix& s,
                   const Matrix& t, const std::vector<Vector>& ys, const CheckBudget& budget);

/// Property scan of a profile that contains y = 0 and midpoint triples
/// (y1, y2, (y1+y2)/2), recognized by exact vector match.
///   max_at_zero:        no y with h(y) > h(0) beyond the joint interval
///   midpoint log-concavity: no triple with h(mid) < sqrt(h(y1) h(y2))
///                       beyond the joint interval
///   support_condition:  h(y) > 0 implies (S+T)y in A+B is not excluded
struct HPropertyReport {
  bool includes_zero = false;
  bool max_at_zero = false;
  int triples = 0;
  int certain_log_concavity_violations = 0;
  bool midpoint_log_concave = false;
  bool support_condition = false;
};

HPropertyReport h_property_suite(const HProfile& profile, const MinkowskiOptions& opt = {});

/// Fixed CSV schema:
/// name,n,lhs,lhs_lo,lhs_hi,rhs,rhs_lo,rhs_hi,margin,verdict,samples,seed,params
std::string csv_header();
std::string csv_row(const InequalityReport& report);

}  // namespace gci::inequality_lab

#endif  // GCI_INEQUALITY_LAB_HPP
