#ifndef GCI_CONVEX_SETS_HPP
#define GCI_CONVEX_SETS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace gci {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class SymmetricConvexBody;
using BodyPtr = std::shared_ptr<const SymmetricConvexBody>;

/// Euclidean ball of given radius centred at the origin.
struct Ball {
  double radius;
};

/// Axis-aligned box { x : |x_i| <= halfwidths_i }.
struct Box {
  Vector halfwidths;
};

/// Level set { x : <x, Qx> <= 1 } for symmetric positive-semidefinite Q.
/// The eigendecomposition of Q is cached for projection.
class Ellipsoid {
 public:
  explicit Ellipsoid(Matrix q);
  const Matrix& q() const { return q_; }
  const Matrix& basis() const { return basis_; }
  const Vector& eigenvalues() const { return eigenvalues_; }

 private:
  Matrix q_;
  Matrix basis_;
  Vector eigenvalues_;
};

struct Halfspace {
  Vector normal;  // unit length
  double offset;  // >= 0
};

/// Finite intersection of half-spaces stored as mirror pairs (n, o), (-n, o),
/// so central symmetry holds structurally.
class Polytope {
 public:
  // Takes one representative per pair; the mirrored copies are added here.
  explicit Polytope(std::vector<Halfspace> representatives);
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  // Every even index is a representative, the following odd index its mirror.
  std::vector<Halfspace> representatives() const;

 private:
  std::vector<Halfspace> halfspaces_;
};

/// Image t(base) of a body under an invertible matrix. Membership solves
/// t z = x with a factorization computed once at construction.
struct LinearImage {
  Matrix transform;
  BodyPtr base;
  std::shared_ptr<const Eigen::PartialPivLU<Matrix>> lu;
};

struct Intersection {
  BodyPtr left;
  BodyPtr right;
};

/// A convex set symmetric about the origin, one of a closed shape grammar.
/// Bodies are immutable after construction; membership and projection are
/// pure and safe for concurrent use.
class SymmetricConvexBody {
 public:
  using Shape = std::variant<Ball, Box, Ellipsoid, Polytope, LinearImage, Intersection>;

  SymmetricConvexBody(int dimension, Shape shape);

  int dimension() const { return dimension_; }
  const Shape& shape() const { return shape_; }

  bool contains(const Vector& x) const;

 private:
  int dimension_;
  Shape shape_;
};

/// Body shifted by a fixed offset; not symmetric in general.
struct TranslatedBody {
  SymmetricConvexBody base;
  Vector offset;

  int dimension() const { return base.dimension(); }
  bool contains(const Vector& x) const { return base.contains(x - offset); }
};

SymmetricConvexBody make_ball(int n, double radius);
SymmetricConvexBody make_box(Vector halfwidths);
SymmetricConvexBody make_ellipsoid(Matrix q);
SymmetricConvexBody make_polytope(int n, std::vector<Halfspace> representatives);

/// Image of `body` under the invertible matrix `t`. Throws if `t` is not
/// square of matching size or its condition estimate exceeds 1e12.
SymmetricConvexBody linear_image(const Matrix& t, SymmetricConvexBody body);

SymmetricConvexBody intersect(SymmetricConvexBody a, SymmetricConvexBody b);

TranslatedBody translate(SymmetricConvexBody body, Vector v);

/// Euclidean-nearest point of the body to x. Supported for Ball, Box,
/// Ellipsoid (safeguarded Newton on the multiplier, tolerance 1e-12) and
/// Polytope (Dykstra over the half-spaces, tolerance 1e-10).
Vector project(const SymmetricConvexBody& body, const Vector& x);

enum class MinkowskiVerdict { member, non_member, undecided };

struct MinkowskiOptions {
  double tol = 1e-7;
  int max_iter = 10000;
};

/// Decides x ∈ A + B by alternating projections of a candidate pair
/// (a, b) ∈ A × B against the affine constraint a + b = x.
/// member: the split residual ||a + b - x|| fell below tol.
/// non_member: a separating hyperplane was certified (<x, v> exceeds the
/// summed support values of A and B along v, checked at v = x and at the
/// current gap each iteration), or the residual stabilized (relative change
/// < tol/10 over a 50-iteration window) above 10*tol.
/// undecided: anything else, including iteration exhaustion.
MinkowskiVerdict minkowski_member(const SymmetricConvexBody& a,
                                  const SymmetricConvexBody& b, const Vector& x,
                                  const MinkowskiOptions& opt = {});

enum class ShapeKind { ball, box, ellipsoid, polytope };

/// Deterministic generator of well-scaled random bodies for test suites.
SymmetricConvexBody random_body(ShapeKind kind, int n, double scale, std::uint64_t seed);

}  // namespace gci

#endif  // GCI_CONVEX_SETS_HPP
