#ifndef GCI_MATRIX_LAB_HPP
#define GCI_MATRIX_LAB_HPP

#include <cstdint>

#include "gci/convex_sets.hpp"

namespace gci::matrix_lab {

using gci::Matrix;
using gci::Vector;

/// Candidate (M, P, R, S, T) for the correlation inequality
///   det(I - M'M)^{1/2} g(PA) g(RB) <= g((S+T)^{-1}(A+B)) g(A cap B).
struct MatrixQuintuple {
  Matrix m, p, r, s, t;
  int n = 0;
};

/// Commuting symmetric pair held by construction: alpha and beta share one
/// orthogonal eigenbasis and differ only in their eigenvalue vectors.
struct AnglePair {
  Matrix alpha;
  Matrix beta;
  Matrix shared_eigenbasis;
  int n = 0;
};

enum class ScalarFn { sin, cos, tan, inverse, sqrt };

/// U f(Lambda) U' by dense eigendecomposition of a symmetric matrix; the
/// result is symmetrized. Throws when an eigenvalue sits within 1e-8 of a
/// pole of f (tan, inverse) or below -1e-8 for sqrt.
Matrix matrix_function(const Matrix& a, ScalarFn f);

AnglePair make_angle_pair(const Matrix& shared_eigenbasis, const Vector& alpha_eigenvalues,
                          const Vector& beta_eigenvalues);

/// Random commuting pair: orthogonal basis from the QR factorization of a
/// Gaussian matrix, eigenvalues uniform in (lo, hi). The default range keeps
/// tan finite and sin(alpha+beta) invertible.
AnglePair random_angle_pair(int n, std::uint64_t seed, double lo = 0.1,
                            double hi = 1.4707963267948966);

/// The trigonometric family
///   M = cos(a+b), P = cos(a) sin(a+b)^{-1}, R = cos(b) sin(a+b)^{-1},
///   S = tan(a),  T = tan(b),
/// which satisfies the quintuple equations whenever a, b commute and have
/// eigenvalues in (0, pi/2).
MatrixQuintuple build_from_angles(const AnglePair& angles);

/// Frobenius residuals of the three quintuple equations
///   P(I + SS')P' = (I - MM')^{-1}
///   P(I - ST')R' = M(I - M'M)^{-1}
///   R(I + TT')R' = (I - M'M)^{-1}
/// and of the equivalent block form [[I, -M], [-M', I]]^{-1} = FF' with
/// F = [[P, PS], [R, -RT]]. The off-diagonal sign of the inverted block
/// matches the sign the three equations force on FF'.
struct HypothesesReport {
  double residual_p = 0.0;
  double residual_cross = 0.0;
  double residual_r = 0.0;
  double residual_block = 0.0;
  double min_eigenvalue = 0.0;  // of I - M'M
  bool validated = false;

  double max_residual() const;
};

HypothesesReport check_hypotheses(const MatrixQuintuple& q, double tol = 1e-8);

/// Relative residual of det [[I, M], [M', I]] = det(I - M'M) for an
/// m x n matrix, both sides evaluated independently.
double det_block_identity(const Matrix& m);

/// Frobenius residual between the assembled block matrix
/// [[(I-MM')^{-1}, M(I-M'M)^{-1}], [M'(I-MM')^{-1}, (I-M'M)^{-1}]]
/// and the numerically inverted [[I, -M], [-M', I]].
double shao_block_inverse(const Matrix& m);

/// The unique symmetric positive-definite square root. Exactly diagonal
/// input takes a componentwise path, so the square root of the identity is
/// the identity bit-exactly.
Matrix symmetric_psd_sqrt(const Matrix& a);

/// M = 0, P = R = 2^{-1/2} I, S = T = I.
MatrixQuintuple ssz_quintuple(int n);

/// M = 0, P = pI, R = rI, S = (r/p)I, T = (p/r)I for p^2 + r^2 = 1.
MatrixQuintuple li_quintuple(double p, double r, int n);

/// M = (1/2)I, P = R = I, S = T = 3^{-1/2} I; the trigonometric family at
/// alpha = beta = (pi/6)I.
MatrixQuintuple corollary1_quintuple(int n);

}  // namespace gci::matrix_lab

#endif  // GCI_MATRIX_LAB_HPP
