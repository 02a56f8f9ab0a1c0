#include "gci/convex_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "gci/rng.hpp"

namespace gci {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

Ellipsoid::Ellipsoid(Matrix q) : q_(std::move(q)) {
  require(q_.rows() == q_.cols() && q_.rows() >= 1, "ellipsoid matrix must be square");
  const double scale = std::max(1.0, q_.norm());
  require((q_ - q_.transpose()).norm() <= 1e-10 * scale, "ellipsoid matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(q_);
  require(solver.info() == Eigen::Success, "ellipsoid eigendecomposition failed");
  require(solver.eigenvalues().minCoeff() >= -1e-12 * scale,
          "ellipsoid matrix must be positive semidefinite");
  basis_ = solver.eigenvectors();
  eigenvalues_ = solver.eigenvalues().cwiseMax(0.0);
}

Polytope::Polytope(std::vector<Halfspace> representatives) {
  require(!representatives.empty(), "polytope needs at least one half-space");
  halfspaces_.reserve(2 * representatives.size());
  for (auto& h : representatives) {
    require(h.normal.size() >= 1, "half-space normal is empty");
    require(std::abs(h.normal.norm() - 1.0) <= 1e-9, "half-space normal must be unit length");
    require(h.offset >= 0.0, "half-space offset must be nonnegative");
    halfspaces_.push_back(h);
    halfspaces_.push_back(Halfspace{-h.normal, h.offset});
  }
}

std::vector<Halfspace> Polytope::representatives() const {
  std::vector<Halfspace> reps;
  reps.reserve(halfspaces_.size() / 2);
  for (std::size_t i = 0; i < halfspaces_.size(); i += 2) reps.push_back(halfspaces_[i]);
  return reps;
}

namespace {

int shape_dimension(const SymmetricConvexBody::Shape& shape, int declared) {
  struct Visitor {
    int declared;
    int operator()(const Ball& b) const {
      require(b.radius > 0.0, "ball radius must be positive");
      return declared;
    }
    int operator()(const Box& b) const {
      require(b.halfwidths.size() >= 1 && (b.halfwidths.array() > 0.0).all(),
              "box halfwidths must be positive");
      return static_cast<int>(b.halfwidths.size());
    }
    int operator()(const Ellipsoid& e) const { return static_cast<int>(e.q().rows()); }
    int operator()(const Polytope& p) const {
      return static_cast<int>(p.halfspaces().front().normal.size());
    }
    int operator()(const LinearImage& li) const {
      require(li.base != nullptr && li.lu != nullptr, "linear image is incomplete");
      return static_cast<int>(li.transform.rows());
    }
    int operator()(const Intersection& is) const {
      require(is.left != nullptr && is.right != nullptr, "intersection is incomplete");
      return is.left->dimension();
    }
  };
  return std::visit(Visitor{declared}, shape);
}

}  // namespace

SymmetricConvexBody::SymmetricConvexBody(int dimension, Shape shape)
    : dimension_(dimension), shape_(std::move(shape)) {
  require(dimension_ >= 1, "dimension must be positive");
  require(shape_dimension(shape_, dimension_) == dimension_, "shape dimension mismatch");
  if (const auto* p = std::get_if<Polytope>(&shape_)) {
    for (const auto& h : p->halfspaces())
      require(h.normal.size() == dimension_, "half-space dimension mismatch");
  }
  if (const auto* is = std::get_if<Intersection>(&shape_)) {
    require(is->left->dimension() == dimension_ && is->right->dimension() == dimension_,
            "intersection dimension mismatch");
  }
}

bool SymmetricConvexBody::contains(const Vector& x) const {
  require(x.size() == dimension_, "probe dimension mismatch");
  struct Visitor {
    const Vector& x;
    bool operator()(const Ball& b) const { return x.squaredNorm() <= b.radius * b.radius; }
    bool operator()(const Box& b) const {
      return (x.array().abs() <= b.halfwidths.array()).all();
    }
    bool operator()(const Ellipsoid& e) const { return x.dot(e.q() * x) <= 1.0; }
    bool operator()(const Polytope& p) const {
      for (const auto& h : p.halfspaces())
        if (h.normal.dot(x) > h.offset) return false;
      return true;
    }
    bool operator()(const LinearImage& li) const { return li.base->contains(li.lu->solve(x)); }
    bool operator()(const Intersection& is) const {
      return is.left->contains(x) && is.right->contains(x);
    }
  };
  return std::visit(Visitor{x}, shape_);
}

SymmetricConvexBody make_ball(int n, double radius) {
  return SymmetricConvexBody(n, Ball{radius});
}

SymmetricConvexBody make_box(Vector halfwidths) {
  const int n = static_cast<int>(halfwidths.size());
  return SymmetricConvexBody(n, Box{std::move(halfwidths)});
}

SymmetricConvexBody make_ellipsoid(Matrix q) {
  const int n = static_cast<int>(q.rows());
  return SymmetricConvexBody(n, Ellipsoid(std::move(q)));
}

SymmetricConvexBody make_polytope(int n, std::vector<Halfspace> representatives) {
  return SymmetricConvexBody(n, Polytope(std::move(representatives)));
}

SymmetricConvexBody linear_image(const Matrix& t, SymmetricConvexBody body) {
  const int n = body.dimension();
  require(t.rows() == n && t.cols() == n, "transform must be square of matching size");
  Eigen::JacobiSVD<Matrix> svd(t);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(n - 1);
  require(std::isfinite(smax) && smin > 0.0 && smax / smin < 1e12,
          "transform is singular or near-singular");
  LinearImage image{t, std::make_shared<const SymmetricConvexBody>(std::move(body)),
                    std::make_shared<const Eigen::PartialPivLU<Matrix>>(t)};
  return SymmetricConvexBody(n, std::move(image));
}

SymmetricConvexBody intersect(SymmetricConvexBody a, SymmetricConvexBody b) {
  require(a.dimension() == b.dimension(), "intersection dimension mismatch");
  const int n = a.dimension();
  Intersection is{std::make_shared<const SymmetricConvexBody>(std::move(a)),
                  std::make_shared<const SymmetricConvexBody>(std::move(b))};
  return SymmetricConvexBody(n, std::move(is));
}

TranslatedBody translate(SymmetricConvexBody body, Vector v) {
  require(v.size() == body.dimension(), "translation dimension mismatch");
  return TranslatedBody{std::move(body), std::move(v)};
}

namespace {

Vector project_ellipsoid(const Ellipsoid& e, const Vector& x) {
  if (x.dot(e.q() * x) <= 1.0) return x;
  // Nearest point is (I + lam Q)^{-1} x for the multiplier lam > 0 at which
  // the image returns to the unit level set. In the eigenbasis of Q the
  // level g(lam) = sum_i  l_i y_i^2 / (1 + lam l_i)^2 - 1 is decreasing.
  const Vector y = e.basis().transpose() * x;
  const Vector& l = e.eigenvalues();
  const auto level = [&](double lam) {
    double g = -1.0;
    for (int i = 0; i < y.size(); ++i) {
      const double d = 1.0 + lam * l(i);
      g += l(i) * y(i) * y(i) / (d * d);
    }
    return g;
  };
  const auto level_grad = [&](double lam) {
    double g = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double d = 1.0 + lam * l(i);
      g += -2.0 * l(i) * l(i) * y(i) * y(i) / (d * d * d);
    }
    return g;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (level(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) throw std::runtime_error("ellipsoid projection bracket failed");
  }
  double lam = 0.5 * (lo + hi);
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const double g = level(lam);
    if (std::abs(g) <= 1e-12) {
      converged = true;
      break;
    }
    (g > 0.0 ? lo : hi) = lam;
    const double step = g / level_grad(lam);
    double next = lam - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // safeguard: bisect
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) {
      lam = 0.5 * (lo + hi);
      converged = true;
      break;
    }
    lam = next;
  }
  if (!converged) throw std::runtime_error("ellipsoid projection did not converge");
  Vector z(y.size());
  for (int i = 0; i < y.size(); ++i) z(i) = y(i) / (1.0 + lam * l(i));
  return e.basis() * z;
}

Vector project_halfspace(const Halfspace& h, const Vector& x) {
  const double excess = h.normal.dot(x) - h.offset;
  if (excess <= 0.0) return x;
  return x - excess * h.normal;
}

Vector project_polytope(const Polytope& p, const Vector& x) {
  const auto& hs = p.halfspaces();
  bool inside = true;
  for (const auto& h : hs)
    if (h.normal.dot(x) > h.offset) {
      inside = false;
      break;
    }
  if (inside) return x;
  // Dykstra with one correction term per half-space.
  Vector point = x;
  std::vector<Vector> corrections(hs.size(), Vector::Zero(x.size()));
  Vector previous = point;
  for (int cycle = 0; cycle < 10000; ++cycle) {
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const Vector shifted = point + corrections[i];
      point = project_halfspace(hs[i], shifted);
      corrections[i] = shifted - point;
    }
    if ((point - previous).norm() <= 1e-10) break;
    previous = point;
  }
  return point;
}

}  // namespace

Vector project(const SymmetricConvexBody& body, const Vector& x) {
  require(x.size() == body.dimension(), "probe dimension mismatch");
  struct Visitor {
    const Vector& x;
    Vector operator()(const Ball& b) const {
      const double norm = x.norm();
      if (norm <= b.radius) return x;
      return x * (b.radius / norm);
    }
    Vector operator()(const Box& b) const {
      return x.cwiseMax(-b.halfwidths).cwiseMin(b.halfwidths);
    }
    Vector operator()(const Ellipsoid& e) const { return project_ellipsoid(e, x); }
    Vector operator()(const Polytope& p) const { return project_polytope(p, x); }
    Vector operator()(const LinearImage&) const {
      throw std::invalid_argument("projection onto a linear image is not supported");
    }
    Vector operator()(const Intersection&) const {
      throw std::invalid_argument("projection onto an intersection is not supported");
    }
  };
  return std::visit(Visitor{x}, body.shape());
}

namespace {

// Radius of a ball certainly inside the body (0 when unknown).
double inner_radius(const SymmetricConvexBody& body) {
  struct Visitor {
    double operator()(const Ball& b) const { return b.radius; }
    double operator()(const Box& b) const { return b.halfwidths.minCoeff(); }
    double operator()(const Ellipsoid& e) const {
      const double lmax = e.eigenvalues().maxCoeff();
      return lmax > 0.0 ? 1.0 / std::sqrt(lmax) : kInf;
    }
    double operator()(const Polytope& p) const {
      double r = kInf;
      for (const auto& h : p.halfspaces()) r = std::min(r, h.offset);
      return r;
    }
    double operator()(const LinearImage&) const { return 0.0; }
    double operator()(const Intersection& is) const {
      return std::min(inner_radius(*is.left), inner_radius(*is.right));
    }
  };
  return std::visit(Visitor{}, body.shape());
}

// Upper bound on the support function max_{a in body} <a, d>. Exact for
// balls, boxes and ellipsoids; infinite where no cheap bound exists, which
// only makes the separation certificate below fire less often.
double support_bound(const SymmetricConvexBody& body, const Vector& d) {
  struct Visitor {
    const Vector& d;
    double operator()(const Ball& b) const { return b.radius * d.norm(); }
    double operator()(const Box& b) const { return b.halfwidths.dot(d.cwiseAbs()); }
    double operator()(const Ellipsoid& e) const {
      const Vector y = e.basis().transpose() * d;
      double s = 0.0;
      for (int i = 0; i < y.size(); ++i) {
        if (e.eigenvalues()(i) <= 0.0) {
          if (y(i) != 0.0) return kInf;
        } else {
          s += y(i) * y(i) / e.eigenvalues()(i);
        }
      }
      return std::sqrt(s);
    }
    double operator()(const Polytope&) const { return kInf; }
    double operator()(const LinearImage& li) const {
      return support_bound(*li.base, li.transform.transpose() * d);
    }
    double operator()(const Intersection& is) const {
      return std::min(support_bound(*is.left, d), support_bound(*is.right, d));
    }
  };
  return std::visit(Visitor{d}, body.shape());
}

}  // namespace

MinkowskiVerdict minkowski_member(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                                  const Vector& x, const MinkowskiOptions& opt) {
  require(a.dimension() == b.dimension() && x.size() == a.dimension(),
          "minkowski dimension mismatch");
  require(opt.tol > 0.0 && opt.max_iter > 0, "invalid minkowski options");
  if (x.norm() <= inner_radius(a) + inner_radius(b)) return MinkowskiVerdict::member;
  // x outside A+B iff some direction separates: <x,v> > h_A(v) + h_B(v).
  const auto separated = [&](const Vector& v) {
    return x.dot(v) > support_bound(a, v) + support_bound(b, v);
  };
  if (separated(x)) return MinkowskiVerdict::non_member;

  // Alternating projections of (a, b) in A x B against the affine constraint
  // a + b = x. The split residual is measured before the affine correction;
  // its direction is the candidate separating direction.
  Vector wa = 0.5 * x;
  Vector wb = wa;
  double window_residual = kInf;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const Vector pa = project(a, wa);
    const Vector pb = project(b, wb);
    const Vector gap = x - pa - pb;
    const double residual = gap.norm();
    if (residual < opt.tol) return MinkowskiVerdict::member;
    if (separated(gap)) return MinkowskiVerdict::non_member;
    if (it % 50 == 0) {
      const bool stalled = std::abs(window_residual - residual) < (opt.tol / 10.0) * residual;
      if (stalled && residual > 10.0 * opt.tol) return MinkowskiVerdict::non_member;
      window_residual = residual;
    }
    const Vector half_gap = 0.5 * gap;
    wa = pa + half_gap;
    wb = pb + half_gap;
  }
  return MinkowskiVerdict::undecided;
}

SymmetricConvexBody random_body(ShapeKind kind, int n, double scale, std::uint64_t seed) {
  require(n >= 1 && scale > 0.0, "invalid generator parameters");
  auto engine = chunk_engine(seed, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  switch (kind) {
    case ShapeKind::ball:
      return make_ball(n, (0.5 + unit(engine)) * scale);
    case ShapeKind::box: {
      Vector w(n);
      for (int i = 0; i < n; ++i) w(i) = (0.2 + 0.8 * unit(engine)) * scale;
      return make_box(std::move(w));
    }
    case ShapeKind::ellipsoid: {
      Matrix g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = normal(engine);
      Matrix q = (g.transpose() * g) / (scale * scale);
      // Symmetrize away the last-bit asymmetry of the float product.
      q = 0.5 * (q + q.transpose()).eval();
      return make_ellipsoid(std::move(q));
    }
    case ShapeKind::polytope: {
      std::vector<Halfspace> reps;
      reps.reserve(2 * static_cast<std::size_t>(n));
      for (int i = 0; i < 2 * n; ++i) {
        Vector direction(n);
        do {
          for (int j = 0; j < n; ++j) direction(j) = normal(engine);
        } while (direction.norm() < 1e-6);
        direction.normalize();
        reps.push_back(Halfspace{std::move(direction), (0.5 + unit(engine)) * scale});
      }
      return make_polytope(n, std::move(reps));
    }
  }
  throw std::invalid_argument("unknown shape kind");
}

}  // namespace gci
