#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gci/convex_sets.hpp"
#include "gci/rng.hpp"

using namespace gci;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

std::vector<Vector> gaussian_probes(int n, int count, std::uint64_t seed) {
  auto engine = chunk_engine(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> probes;
  probes.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vector x(n);
    for (int j = 0; j < n; ++j) x(j) = normal(engine);
    probes.push_back(std::move(x));
  }
  return probes;
}

// A member found by shrinking a probe toward the origin, which every body
// here contains in its interior.
Vector shrink_to_member(const SymmetricConvexBody& body, Vector x) {
  for (int i = 0; i < 200 && !body.contains(x); ++i) x *= 0.5;
  REQUIRE(body.contains(x));
  return x;
}

SymmetricConvexBody rotated_square(double angle) {
  Matrix rot(2, 2);
  rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  Vector w(2);
  w << 1.0, 1.0;
  return linear_image(rot, make_box(w));
}

}  // namespace

TEST_CASE("ball membership matches the norm") {
  const auto ball = make_ball(2, 1.0);
  CHECK(ball.dimension() == 2);
  CHECK(ball.contains(vec2(0.9999, 0.0)));
  CHECK(ball.contains(vec2(1.0, 0.0)));  // boundary is included
  CHECK_FALSE(ball.contains(vec2(1.0001, 0.0)));
  CHECK(ball.contains(vec2(0.6, -0.6)));
  CHECK_FALSE(ball.contains(vec2(0.8, 0.7)));
}

TEST_CASE("box membership is componentwise") {
  const auto box = make_box(vec2(1.0, 0.8));
  CHECK(box.contains(vec2(0.9, -0.79)));
  CHECK(box.contains(vec2(1.0, 0.8)));
  CHECK_FALSE(box.contains(vec2(1.01, 0.0)));
  CHECK_FALSE(box.contains(vec2(0.0, 0.81)));
}

TEST_CASE("ellipsoid membership matches the quadratic form") {
  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 1.0;
  q(1, 1) = 4.0;
  const auto e = make_ellipsoid(q);
  CHECK(e.contains(vec2(0.0, 0.5)));  // 4 * 0.25 = 1, boundary
  CHECK_FALSE(e.contains(vec2(0.0, 0.51)));
  CHECK(e.contains(vec2(1.0, 0.0)));
  CHECK_FALSE(e.contains(vec2(0.9, 0.3)));  // 0.81 + 0.36 > 1
}

TEST_CASE("polytope stores mirror pairs and clips both sides") {
  const double inv = 1.0 / std::sqrt(2.0);
  std::vector<Halfspace> reps;
  reps.push_back(Halfspace{vec2(inv, inv), 1.0});
  reps.push_back(Halfspace{vec2(inv, -inv), 1.0});
  const auto poly = make_polytope(2, reps);

  const auto* shape = std::get_if<Polytope>(&poly.shape());
  REQUIRE(shape != nullptr);
  CHECK(shape->halfspaces().size() == 4);
  CHECK(shape->representatives().size() == 2);

  // |x1 + x2| <= sqrt(2) and |x1 - x2| <= sqrt(2): a square with corners on
  // the axes at distance sqrt(2).
  CHECK(poly.contains(vec2(1.0, 0.0)));
  CHECK_FALSE(poly.contains(vec2(1.5, 0.0)));
  CHECK(poly.contains(vec2(-1.0, 0.0)));
  CHECK_FALSE(poly.contains(vec2(-1.5, 0.0)));
  CHECK(poly.contains(vec2(0.7, 0.7)));
  CHECK_FALSE(poly.contains(vec2(0.8, 0.8)));
}

TEST_CASE("construction rejects malformed inputs") {
  CHECK_THROWS_AS(make_ball(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_ball(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_ball(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_box(vec2(1.0, -0.5)), std::invalid_argument);

  Matrix asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(make_ellipsoid(asym), std::invalid_argument);
  Matrix indefinite = Matrix::Zero(2, 2);
  indefinite(0, 0) = 1.0;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(make_ellipsoid(indefinite), std::invalid_argument);

  CHECK_THROWS_AS(make_polytope(2, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_polytope(2, {Halfspace{vec2(2.0, 0.0), 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_polytope(2, {Halfspace{vec2(1.0, 0.0), -0.1}}), std::invalid_argument);

  Matrix singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(linear_image(singular, make_ball(2, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(linear_image(Matrix::Identity(3, 3), make_ball(2, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(intersect(make_ball(2, 1.0), make_ball(3, 1.0)), std::invalid_argument);
}

TEST_CASE("linear image membership pulls the probe back through the map") {
  SUBCASE("pure scaling") {
    const auto doubled = linear_image(2.0 * Matrix::Identity(2, 2), make_ball(2, 1.0));
    CHECK(doubled.contains(vec2(1.5, 0.0)));
    CHECK_FALSE(doubled.contains(vec2(2.5, 0.0)));
  }
  SUBCASE("rotation by pi/4 of the unit square") {
    const auto diamond = rotated_square(M_PI / 4.0);
    const double corner = std::sqrt(2.0);
    CHECK(diamond.contains(vec2(corner - 0.01, 0.0)));
    CHECK_FALSE(diamond.contains(vec2(corner + 0.01, 0.0)));
    // The original corner direction is now flat: (1,1) maps to distance
    // sqrt(2) along the y-axis.
    CHECK(diamond.contains(vec2(0.0, corner - 0.01)));
    CHECK_FALSE(diamond.contains(vec2(1.0, 1.0)));
  }
  SUBCASE("nested images compose") {
    Matrix rot(2, 2);
    const double c = std::cos(0.3), s = std::sin(0.3);
    rot << c, -s, s, c;
    const auto body = linear_image(rot, linear_image(2.0 * Matrix::Identity(2, 2), make_ball(2, 1.0)));
    CHECK(body.contains(vec2(1.9, 0.0)));
    CHECK_FALSE(body.contains(vec2(2.1, 0.0)));
  }
}

TEST_CASE("intersection requires membership in both factors") {
  const auto body = intersect(make_ball(2, 1.0), make_box(vec2(0.5, 2.0)));
  CHECK(body.contains(vec2(0.4, 0.9)));
  CHECK_FALSE(body.contains(vec2(0.6, 0.0)));   // fails the box
  CHECK_FALSE(body.contains(vec2(0.4, 0.95)));  // fails the ball
  CHECK(body.contains(vec2(0.0, 0.0)));
}

TEST_CASE("translate shifts membership by the offset") {
  const auto shifted = translate(make_ball(2, 1.0), vec2(3.0, 0.0));
  CHECK(shifted.contains(vec2(3.5, 0.0)));
  CHECK(shifted.contains(vec2(3.0, 0.9)));
  CHECK_FALSE(shifted.contains(vec2(0.0, 0.0)));
  CHECK_FALSE(shifted.contains(vec2(1.9, 0.0)));

  const auto in_place = translate(make_box(vec2(1.0, 1.0)), Vector::Zero(2));
  for (const auto& x : gaussian_probes(2, 100, 7)) {
    CHECK(in_place.contains(x) == make_box(vec2(1.0, 1.0)).contains(x));
  }
}

TEST_CASE("every shape is symmetric about the origin") {
  const ShapeKind kinds[] = {ShapeKind::ball, ShapeKind::box, ShapeKind::ellipsoid,
                             ShapeKind::polytope};
  int seed = 100;
  for (const auto kind : kinds) {
    const auto body = random_body(kind, 3, 1.0, static_cast<std::uint64_t>(seed++));
    CHECK(body.contains(Vector::Zero(3)));
    for (const auto& x : gaussian_probes(3, 300, 11)) {
      const Vector neg = -x;
      CHECK(body.contains(x) == body.contains(neg));
    }
  }
}

TEST_CASE("membership is midpoint convex") {
  const ShapeKind kinds[] = {ShapeKind::ball, ShapeKind::box, ShapeKind::ellipsoid,
                             ShapeKind::polytope};
  int seed = 200;
  for (const auto kind : kinds) {
    const auto body = random_body(kind, 3, 1.0, static_cast<std::uint64_t>(seed++));
    const auto probes = gaussian_probes(3, 60, 13);
    for (std::size_t i = 0; i + 1 < probes.size(); i += 2) {
      const Vector p = shrink_to_member(body, 2.0 * probes[i]);
      const Vector q = shrink_to_member(body, 2.0 * probes[i + 1]);
      const Vector mid = 0.5 * (p + q);
      CHECK(body.contains(mid));
    }
  }
}

TEST_CASE("projection lands on known nearest points") {
  CHECK((project(make_ball(2, 2.0), vec2(6.0, 0.0)) - vec2(2.0, 0.0)).norm() <= 1e-12);
  CHECK((project(make_box(vec2(1.0, 1.0)), vec2(3.0, 0.5)) - vec2(1.0, 0.5)).norm() <= 1e-12);

  Matrix q = Matrix::Zero(2, 2);
  q(0, 0) = 1.0;
  q(1, 1) = 4.0;
  // From a point on the minor axis the nearest boundary point stays on it.
  CHECK((project(make_ellipsoid(q), vec2(0.0, 5.0)) - vec2(0.0, 0.5)).norm() <= 1e-9);
  CHECK((project(make_ellipsoid(Matrix::Identity(2, 2)), vec2(0.0, 5.0)) - vec2(0.0, 1.0)).norm() <=
        1e-9);

  std::vector<Halfspace> reps;
  reps.push_back(Halfspace{vec2(1.0, 0.0), 1.0});
  reps.push_back(Halfspace{vec2(0.0, 1.0), 1.0});
  CHECK((project(make_polytope(2, reps), vec2(3.0, 0.5)) - vec2(1.0, 0.5)).norm() <= 1e-9);
}

TEST_CASE("projection is idempotent and fixes members") {
  const ShapeKind kinds[] = {ShapeKind::ball, ShapeKind::box, ShapeKind::ellipsoid,
                             ShapeKind::polytope};
  int seed = 300;
  for (const auto kind : kinds) {
    const auto body = random_body(kind, 3, 1.0, static_cast<std::uint64_t>(seed++));
    for (const auto& x : gaussian_probes(3, 40, 17)) {
      const Vector p = project(body, 3.0 * x);
      // Iterative projectors stop within ~1e-9 of the boundary, possibly on
      // the outside, so pull well past that before testing membership.
      CHECK(body.contains(p * (1.0 - 1e-6)));
      CHECK((project(body, p) - p).norm() <= 1e-9);

      const Vector member = shrink_to_member(body, x);
      CHECK((project(body, member) - member).norm() <= 1e-10);
    }
  }
}

TEST_CASE("projection satisfies the supporting-hyperplane optimality test") {
  // p = proj(x) minimizes distance iff <x - p, q - p> <= 0 for all members q.
  const ShapeKind kinds[] = {ShapeKind::ball, ShapeKind::box, ShapeKind::ellipsoid,
                             ShapeKind::polytope};
  int seed = 400;
  for (const auto kind : kinds) {
    const auto body = random_body(kind, 3, 1.0, static_cast<std::uint64_t>(seed++));
    const auto outside = gaussian_probes(3, 10, 19);
    const auto inside = gaussian_probes(3, 100, 23);
    for (const auto& x0 : outside) {
      const Vector x = 4.0 * x0;
      const Vector p = project(body, x);
      for (const auto& q0 : inside) {
        const Vector q = shrink_to_member(body, q0);
        CHECK((x - p).dot(q - p) <= 1e-8 * (1.0 + x.norm()));
      }
    }
  }
}

TEST_CASE("minkowski membership agrees with the closed-form ball sum") {
  const auto a = make_ball(2, 1.0);
  const auto b = make_ball(2, 0.5);
  auto engine = chunk_engine(5, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    Vector u(2);
    u << normal(engine), normal(engine);
    u.normalize();
    CHECK(minkowski_member(a, b, Vector(1.3 * u)) == MinkowskiVerdict::member);
    CHECK(minkowski_member(a, b, Vector(1.7 * u)) == MinkowskiVerdict::non_member);
  }
  CHECK(minkowski_member(a, b, Vector(Vector::Zero(2))) == MinkowskiVerdict::member);
  CHECK(minkowski_member(a, b, Vector(100.0 * Vector::Ones(2))) == MinkowskiVerdict::non_member);
}

TEST_CASE("minkowski membership agrees with the closed-form box sum") {
  const auto a = make_box(vec2(1.0, 0.5));
  const auto b = make_box(vec2(0.5, 0.5));
  // The sum is the box with halfwidths (1.5, 1.0).
  CHECK(minkowski_member(a, b, vec2(1.45, 0.9)) == MinkowskiVerdict::member);
  CHECK(minkowski_member(a, b, vec2(1.49, 0.99)) == MinkowskiVerdict::member);
  CHECK(minkowski_member(a, b, vec2(1.55, 0.2)) == MinkowskiVerdict::non_member);
  CHECK(minkowski_member(a, b, vec2(0.0, 1.05)) == MinkowskiVerdict::non_member);
  CHECK(minkowski_member(a, b, vec2(-1.45, -0.9)) == MinkowskiVerdict::member);
}

TEST_CASE("minkowski membership handles mixed and transformed summands") {
  const auto ball = make_ball(2, 1.0);
  const auto box = make_box(vec2(0.5, 0.5));
  // Support along e1 is 1 + 0.5.
  CHECK(minkowski_member(ball, box, vec2(1.4, 0.0)) == MinkowskiVerdict::member);
  CHECK(minkowski_member(ball, box, vec2(1.6, 0.0)) == MinkowskiVerdict::non_member);

  // |x1 + x2| <= sqrt(2), |x1 - x2| <= sqrt(2): the square rotated 45 degrees,
  // vertices on the axes at distance sqrt(2). Sum with the unit ball along e1
  // reaches sqrt(2) + 1.
  const double isq2 = 1.0 / std::sqrt(2.0);
  std::vector<Halfspace> cuts;
  cuts.push_back(Halfspace{vec2(isq2, isq2), 1.0});
  cuts.push_back(Halfspace{vec2(isq2, -isq2), 1.0});
  const auto diamond = make_polytope(2, cuts);
  const double edge = std::sqrt(2.0) + 1.0;
  CHECK(minkowski_member(diamond, ball, vec2(edge - 0.05, 0.0)) == MinkowskiVerdict::member);
  CHECK(minkowski_member(diamond, ball, vec2(edge + 0.05, 0.0)) == MinkowskiVerdict::non_member);

  // Linear images have no projector, so near-boundary queries that survive
  // the quick accept and the separation certificate cannot be decided.
  CHECK_THROWS_AS(minkowski_member(rotated_square(M_PI / 4.0), ball, vec2(edge - 0.05, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("minkowski membership rejects mismatched dimensions") {
  CHECK_THROWS_AS(minkowski_member(make_ball(2, 1.0), make_ball(3, 1.0), Vector::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(minkowski_member(make_ball(2, 1.0), make_ball(2, 1.0), Vector::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("random bodies are reproducible from their seed") {
  const ShapeKind kinds[] = {ShapeKind::ball, ShapeKind::box, ShapeKind::ellipsoid,
                             ShapeKind::polytope};
  for (const auto kind : kinds) {
    const auto first = random_body(kind, 4, 0.8, 99);
    const auto second = random_body(kind, 4, 0.8, 99);
    CHECK(first.dimension() == 4);
    for (const auto& x : gaussian_probes(4, 200, 29)) {
      CHECK(first.contains(x) == second.contains(x));
    }
  }
  CHECK_THROWS_AS(random_body(ShapeKind::ball, 0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_body(ShapeKind::ball, 2, 0.0, 1), std::invalid_argument);
}
