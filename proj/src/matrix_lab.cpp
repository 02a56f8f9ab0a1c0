#include "gci/matrix_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "gci/rng.hpp"

namespace gci::matrix_lab {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_symmetric(const Matrix& a, double tol, const char* message) {
  require(a.rows() == a.cols(), message);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  require((a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale, message);
}

double apply_scalar(double x, ScalarFn f) {
  switch (f) {
    case ScalarFn::sin: return std::sin(x);
    case ScalarFn::cos: return std::cos(x);
    case ScalarFn::tan:
      if (std::abs(std::remainder(x - std::numbers::pi / 2.0, std::numbers::pi)) <= 1e-8)
        throw std::invalid_argument("eigenvalue within 1e-8 of a tan pole");
      return std::tan(x);
    case ScalarFn::inverse:
      if (std::abs(x) <= 1e-8) throw std::invalid_argument("eigenvalue within 1e-8 of zero");
      return 1.0 / x;
    case ScalarFn::sqrt:
      if (x < -1e-8) throw std::invalid_argument("negative eigenvalue passed to sqrt");
      return std::sqrt(std::max(x, 0.0));
  }
  throw std::logic_error("unknown scalar function");
}

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

Matrix identity_like(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace

Matrix matrix_function(const Matrix& a, ScalarFn f) {
  require_symmetric(a, 1e-10, "matrix function requires a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a));
  require(solver.info() == Eigen::Success, "eigendecomposition failed");
  Vector values = solver.eigenvalues();
  for (int i = 0; i < values.size(); ++i) values(i) = apply_scalar(values(i), f);
  const Matrix result =
      solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().transpose();
  return symmetrized(result);
}

AnglePair make_angle_pair(const Matrix& shared_eigenbasis, const Vector& alpha_eigenvalues,
                          const Vector& beta_eigenvalues) {
  const Eigen::Index n = shared_eigenbasis.rows();
  require(shared_eigenbasis.cols() == n && n >= 1, "eigenbasis must be square");
  require(alpha_eigenvalues.size() == n && beta_eigenvalues.size() == n,
          "eigenvalue count must match the basis dimension");
  const Matrix gram = shared_eigenbasis.transpose() * shared_eigenbasis;
  require((gram - identity_like(n)).cwiseAbs().maxCoeff() <= 1e-10,
          "eigenbasis must be orthogonal");
  AnglePair pair;
  pair.alpha = symmetrized(shared_eigenbasis * alpha_eigenvalues.asDiagonal() *
                           shared_eigenbasis.transpose());
  pair.beta = symmetrized(shared_eigenbasis * beta_eigenvalues.asDiagonal() *
                          shared_eigenbasis.transpose());
  pair.shared_eigenbasis = shared_eigenbasis;
  pair.n = static_cast<int>(n);
  return pair;
}

AnglePair random_angle_pair(int n, std::uint64_t seed, double lo, double hi) {
  require(n >= 1, "dimension must be positive");
  require(0.0 < lo && lo < hi && hi < std::numbers::pi / 2.0,
          "eigenvalue range must sit inside (0, pi/2)");
  auto engine = chunk_engine(seed, 0);
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(engine);
  const Matrix basis = Eigen::HouseholderQR<Matrix>(g).householderQ();
  std::uniform_real_distribution<double> uniform(lo, hi);
  Vector alpha_eigenvalues(n);
  Vector beta_eigenvalues(n);
  for (int i = 0; i < n; ++i) alpha_eigenvalues(i) = uniform(engine);
  for (int i = 0; i < n; ++i) beta_eigenvalues(i) = uniform(engine);
  return make_angle_pair(basis, alpha_eigenvalues, beta_eigenvalues);
}

MatrixQuintuple build_from_angles(const AnglePair& angles) {
  const int n = angles.n;
  require(n >= 1 && angles.alpha.rows() == n && angles.beta.rows() == n,
          "angle pair dimensions are inconsistent");
  require_symmetric(angles.alpha, 1e-12, "alpha must be symmetric");
  require_symmetric(angles.beta, 1e-12, "beta must be symmetric");
  const Matrix commutator = angles.alpha * angles.beta - angles.beta * angles.alpha;
  require(commutator.cwiseAbs().maxCoeff() <= 1e-10, "alpha and beta must commute");
  for (const Matrix* part : {&angles.alpha, &angles.beta}) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(*part);
    require(solver.info() == Eigen::Success, "eigendecomposition failed");
    require(solver.eigenvalues().minCoeff() > 0.0 &&
                solver.eigenvalues().maxCoeff() < std::numbers::pi / 2.0,
            "angle eigenvalues must lie in (0, pi/2)");
  }
  const Matrix sum = angles.alpha + angles.beta;
  const Matrix sin_sum_inv = matrix_function(matrix_function(sum, ScalarFn::sin), ScalarFn::inverse);
  MatrixQuintuple q;
  q.m = matrix_function(sum, ScalarFn::cos);
  q.p = matrix_function(angles.alpha, ScalarFn::cos) * sin_sum_inv;
  q.r = matrix_function(angles.beta, ScalarFn::cos) * sin_sum_inv;
  q.s = matrix_function(angles.alpha, ScalarFn::tan);
  q.t = matrix_function(angles.beta, ScalarFn::tan);
  q.n = n;
  return q;
}

double HypothesesReport::max_residual() const {
  return std::max({residual_p, residual_cross, residual_r, residual_block});
}

HypothesesReport check_hypotheses(const MatrixQuintuple& q, double tol) {
  require(tol > 0.0, "tolerance must be positive");
  const Eigen::Index n = q.m.rows();
  require(n >= 1 && q.n == n, "quintuple dimension is inconsistent");
  for (const Matrix* part : {&q.m, &q.p, &q.r, &q.s, &q.t})
    require(part->rows() == n && part->cols() == n, "quintuple blocks must be n x n");
  const Matrix id = identity_like(n);

  Matrix block_pos(2 * n, 2 * n);
  block_pos << id, q.m, q.m.transpose(), id;
  Eigen::SelfAdjointEigenSolver<Matrix> block_solver(block_pos);
  require(block_solver.info() == Eigen::Success, "eigendecomposition failed");
  require(block_solver.eigenvalues().minCoeff() >= 1e-12,
          "block matrix [[I, M], [M', I]] is numerically singular");

  const Matrix inv_left = (id - q.m * q.m.transpose()).lu().solve(id);
  const Matrix inv_right = (id - q.m.transpose() * q.m).lu().solve(id);

  HypothesesReport report;
  report.residual_p = (q.p * (id + q.s * q.s.transpose()) * q.p.transpose() - inv_left).norm();
  report.residual_cross =
      (q.p * (id - q.s * q.t.transpose()) * q.r.transpose() - q.m * inv_right).norm();
  report.residual_r = (q.r * (id + q.t * q.t.transpose()) * q.r.transpose() - inv_right).norm();

  Matrix block_neg(2 * n, 2 * n);
  block_neg << id, -q.m, -q.m.transpose(), id;
  Matrix f(2 * n, 2 * n);
  f << q.p, q.p * q.s, q.r, -q.r * q.t;
  const Matrix block_inv = block_neg.lu().solve(Matrix::Identity(2 * n, 2 * n));
  report.residual_block = (block_inv - f * f.transpose()).norm();

  Eigen::SelfAdjointEigenSolver<Matrix> gram_solver(
      symmetrized(id - q.m.transpose() * q.m));
  require(gram_solver.info() == Eigen::Success, "eigendecomposition failed");
  report.min_eigenvalue = gram_solver.eigenvalues().minCoeff();
  report.validated = report.max_residual() <= tol && report.min_eigenvalue > 0.0;
  return report;
}

double det_block_identity(const Matrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  require(rows >= 1 && cols >= 1, "matrix must be nonempty");
  const Matrix gram = identity_like(cols) - m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(gram));
  require(solver.info() == Eigen::Success, "eigendecomposition failed");
  require(solver.eigenvalues().minCoeff() > 1e-12, "I - M'M must be positive definite");
  Matrix block(rows + cols, rows + cols);
  block << identity_like(rows), m, m.transpose(), identity_like(cols);
  const double direct = gram.determinant();
  return std::abs(block.determinant() - direct) / std::abs(direct);
}

double shao_block_inverse(const Matrix& m) {
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  require(rows >= 1 && cols >= 1, "matrix must be nonempty");
  const Matrix gram = identity_like(cols) - m.transpose() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(gram));
  require(solver.info() == Eigen::Success, "eigendecomposition failed");
  require(solver.eigenvalues().minCoeff() > 1e-12, "I - M'M must be positive definite");

  const Matrix inv_left = (identity_like(rows) - m * m.transpose()).lu().solve(identity_like(rows));
  const Matrix inv_right = gram.lu().solve(identity_like(cols));
  Matrix assembled(rows + cols, rows + cols);
  assembled << inv_left, m * inv_right, m.transpose() * inv_left, inv_right;

  Matrix block_neg(rows + cols, rows + cols);
  block_neg << identity_like(rows), -m, -m.transpose(), identity_like(cols);
  const Matrix direct = block_neg.lu().solve(Matrix::Identity(rows + cols, rows + cols));
  return (assembled - direct).norm();
}

Matrix symmetric_psd_sqrt(const Matrix& a) {
  require_symmetric(a, 1e-10, "square root requires a symmetric matrix");
  const Eigen::Index n = a.rows();
  bool diagonal = true;
  for (Eigen::Index i = 0; i < n && diagonal; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && a(i, j) != 0.0) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    require(a.diagonal().minCoeff() > 1e-12, "matrix is not positive definite");
    Matrix root = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) root(i, i) = std::sqrt(a(i, i));
    return root;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a));
  require(solver.info() == Eigen::Success, "eigendecomposition failed");
  require(solver.eigenvalues().minCoeff() > 1e-12, "matrix is not positive definite");
  const Matrix root = solver.eigenvectors() *
                      solver.eigenvalues().cwiseSqrt().asDiagonal() *
                      solver.eigenvectors().transpose();
  return symmetrized(root);
}

MatrixQuintuple ssz_quintuple(int n) { return li_quintuple(std::sqrt(0.5), std::sqrt(0.5), n); }

MatrixQuintuple li_quintuple(double p, double r, int n) {
  require(n >= 1, "dimension must be positive");
  require(p > 0.0 && r > 0.0, "scalars must be positive");
  require(std::abs(p * p + r * r - 1.0) <= 1e-12, "p^2 + r^2 must equal 1");
  MatrixQuintuple q;
  q.m = Matrix::Zero(n, n);
  q.p = p * identity_like(n);
  q.r = r * identity_like(n);
  q.s = (r / p) * identity_like(n);
  q.t = (p / r) * identity_like(n);
  q.n = n;
  return q;
}

MatrixQuintuple corollary1_quintuple(int n) {
  require(n >= 1, "dimension must be positive");
  MatrixQuintuple q;
  q.m = 0.5 * identity_like(n);
  q.p = identity_like(n);
  q.r = identity_like(n);
  q.s = (1.0 / std::sqrt(3.0)) * identity_like(n);
  q.t = q.s;
  q.n = n;
  return q;
}

}  // namespace gci::matrix_lab
