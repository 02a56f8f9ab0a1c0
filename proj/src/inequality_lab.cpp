#include "gci/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "gci/rng.hpp"
#include "gci/serialization.hpp"

namespace gci::inequality_lab {

namespace {

using json = nlohmann::ordered_json;

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

// Per-measure seed streams. Every checker draws each factor of its
// inequality from its own stream, in a fixed order, so one budget seed
// reproduces the whole report.
constexpr std::uint64_t kStreamLeftA = 0;
constexpr std::uint64_t kStreamLeftB = 1;
constexpr std::uint64_t kStreamIntersection = 2;
constexpr std::uint64_t kStreamSum = 3;
constexpr std::uint64_t kStreamContainA = 4;
constexpr std::uint64_t kStreamContainB = 5;

gaussian::McOptions mc_options(const CheckBudget& budget, std::uint64_t stream) {
  return {budget.samples, derive_seed(budget.seed, stream), budget.confidence};
}

MeasureEstimate measure_body(const SymmetricConvexBody& body, const CheckBudget& budget,
                             std::uint64_t stream) {
  if (budget.engine == Engine::quadrature) return gaussian::measure_quadrature(body, budget.quadrature);
  return gaussian::measure(body, mc_options(budget, stream));
}

MeasureEstimate measure_indicator(int n, const std::function<bool(const Vector&)>& member,
                                  const CheckBudget& budget, std::uint64_t stream) {
  if (budget.engine == Engine::quadrature)
    return gaussian::measure_quadrature(n, member, budget.quadrature);
  return gaussian::measure_mc(n, member, mc_options(budget, stream));
}

MeasureEstimate measure_indicator_tristate(int n,
                                           const std::function<gaussian::Tristate(const Vector&)>& member,
                                           const CheckBudget& budget, std::uint64_t stream) {
  if (budget.engine == Engine::quadrature)
    return gaussian::measure_quadrature_tristate(n, member, budget.quadrature);
  return gaussian::measure_mc_tristate(n, member, mc_options(budget, stream));
}

gaussian::Tristate to_tristate(MinkowskiVerdict v) {
  switch (v) {
    case MinkowskiVerdict::member: return gaussian::Tristate::hit;
    case MinkowskiVerdict::non_member: return gaussian::Tristate::miss;
    case MinkowskiVerdict::undecided: return gaussian::Tristate::maybe;
  }
  throw std::logic_error("unknown minkowski verdict");
}

// Measure of { x : st * x in A + B }. Undecided membership probes abstain:
// they never enter the point estimate and only widen the upper bound.
MeasureEstimate sum_body_measure(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                                 const Matrix& st, const CheckBudget& budget,
                                 std::uint64_t stream) {
  return measure_indicator_tristate(
      a.dimension(),
      [&](const Vector& x) { return to_tristate(minkowski_member(a, b, st * x, budget.minkowski)); },
      budget, stream);
}

json body_json(const SymmetricConvexBody& body) { return json::parse(to_text(body)); }

InequalityReport finish(std::string name, int n, const ValueWithCi& lhs, const ValueWithCi& rhs,
                        const CheckBudget& budget, std::string params) {
  InequalityReport report;
  report.name = std::move(name);
  report.n = n;
  report.lhs = lhs;
  report.rhs = rhs;
  report.margin = rhs.value - lhs.value;
  report.verdict = decide(lhs, rhs);
  report.samples = budget.samples;
  report.seed = budget.seed;
  report.params = std::move(params);
  return report;
}

InequalityReport main_theorem_report(const char* name, const SymmetricConvexBody& a,
                                     const SymmetricConvexBody& b,
                                     const matrix_lab::MatrixQuintuple& q,
                                     const CheckBudget& budget, json params) {
  const int n = a.dimension();
  require(b.dimension() == n && q.n == n, "dimension mismatch");

  const Matrix st = q.s + q.t;
  {
    const Eigen::JacobiSVD<Matrix> svd(st);
    require(svd.singularValues().minCoeff() >
                1e-12 * std::max(1.0, svd.singularValues().maxCoeff()),
            "S + T is numerically singular");
  }

  const auto nearly_singular = [](const Matrix& m) {
    const Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().minCoeff() <=
           1e-12 * std::max(1.0, svd.singularValues().maxCoeff());
  };
  const bool degenerate = nearly_singular(q.p) || nearly_singular(q.r);

  const double det_factor =
      std::sqrt((Matrix::Identity(n, n) - q.m.transpose() * q.m).determinant());

  ValueWithCi lhs;
  if (degenerate) {
    // gamma of a lower-dimensional image is zero; the inequality is trivial.
    lhs = ValueWithCi{0.0, 0.0, 0.0};
  } else {
    const auto hypotheses = matrix_lab::check_hypotheses(q, 1e-8);
    require(hypotheses.validated, "quintuple fails the hypothesis equations");
    const auto est_pa = measure_body(linear_image(q.p, a), budget, kStreamLeftA);
    const auto est_rb = measure_body(linear_image(q.r, b), budget, kStreamLeftB);
    lhs = scaled(product(from_estimate(est_pa), from_estimate(est_rb)), det_factor);
  }
  const auto est_cap = measure_body(intersect(a, b), budget, kStreamIntersection);
  const auto est_sum = sum_body_measure(a, b, st, budget, kStreamSum);
  const ValueWithCi rhs = product(from_estimate(est_sum), from_estimate(est_cap));

  params["quintuple"] = json::parse(to_text(q));
  return finish(name, n, lhs, rhs, budget, params.dump());
}

}  // namespace

ValueWithCi from_estimate(const MeasureEstimate& e) { return {e.value, e.ci_low, e.ci_high}; }

ValueWithCi scaled(const ValueWithCi& v, double c) {
  require(c >= 0.0, "scale factor must be nonnegative");
  return {c * v.value, c * v.ci_low, c * v.ci_high};
}

ValueWithCi product(const ValueWithCi& x, const ValueWithCi& y) {
  require(x.ci_low <= x.value && x.value <= x.ci_high, "malformed interval");
  require(y.ci_low <= y.value && y.value <= y.ci_high, "malformed interval");
  const double value = x.value * y.value;
  const double down_x = x.value - x.ci_low;
  const double up_x = x.ci_high - x.value;
  const double down_y = y.value - y.ci_low;
  const double up_y = y.ci_high - y.value;
  const bool tight = std::max(down_x, up_x) <= 0.1 * x.value || (down_x == 0.0 && up_x == 0.0);
  const bool tight_y = std::max(down_y, up_y) <= 0.1 * y.value || (down_y == 0.0 && up_y == 0.0);
  double low;
  double high;
  if (tight && tight_y) {
    // First-order propagation plus the quadratic remainder, which keeps the
    // enclosure valid: (x-dx)(y-dy) >= xy - x*dy - y*dx - dx*dy exactly.
    low = value - (x.value * down_y + y.value * down_x + down_x * down_y);
    high = value + (x.value * up_y + y.value * up_x + up_x * up_y);
  } else {
    low = x.ci_low * y.ci_low;
    high = x.ci_high * y.ci_high;
  }
  low = std::clamp(std::min(low, value), 0.0, 1.0);
  high = std::clamp(std::max(high, value), 0.0, 1.0);
  return {value, low, high};
}

Verdict decide(const ValueWithCi& lhs, const ValueWithCi& rhs) {
  if (lhs.ci_high <= rhs.ci_low) return Verdict::confirmed;
  if (lhs.ci_low > rhs.ci_high) return Verdict::violated;
  return Verdict::inconclusive;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::confirmed: return "confirmed";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
  }
  throw std::logic_error("unknown verdict");
}

InequalityReport check_gcc(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                           const CheckBudget& budget) {
  require(a.dimension() == b.dimension(), "dimension mismatch");
  const auto est_a = measure_body(a, budget, kStreamLeftA);
  const auto est_b = measure_body(b, budget, kStreamLeftB);
  const auto est_cap = measure_body(intersect(a, b), budget, kStreamIntersection);
  json params{{"a", body_json(a)}, {"b", body_json(b)}};
  return finish("gcc", a.dimension(), product(from_estimate(est_a), from_estimate(est_b)),
                from_estimate(est_cap), budget, params.dump());
}

InequalityReport check_main_theorem(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                                    const matrix_lab::MatrixQuintuple& q,
                                    const CheckBudget& budget) {
  json params{{"a", body_json(a)}, {"b", body_json(b)}};
  return main_theorem_report("main_theorem", a, b, q, budget, std::move(params));
}

InequalityReport check_ssz(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                           const CheckBudget& budget) {
  json params{{"a", body_json(a)}, {"b", body_json(b)}};
  return main_theorem_report("ssz", a, b, matrix_lab::ssz_quintuple(a.dimension()), budget,
                             std::move(params));
}

InequalityReport check_li(const SymmetricConvexBody& a, const SymmetricConvexBody& b, double p,
                          double r, const CheckBudget& budget) {
  json params{{"p", p}, {"r", r}, {"a", body_json(a)}, {"b", body_json(b)}};
  return main_theorem_report("li", a, b, matrix_lab::li_quintuple(p, r, a.dimension()), budget,
                             std::move(params));
}

InequalityReport check_corollary1(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                                  const CheckBudget& budget) {
  const int n = a.dimension();
  require(b.dimension() == n, "dimension mismatch");
  const double factor = std::pow(4.0 / 3.0, 0.5 * n);

  MeasureEstimate est_a;
  MeasureEstimate est_b;
  MeasureEstimate est_cap;
  MeasureEstimate est_sum;
  const auto* ball_a = std::get_if<Ball>(&a.shape());
  const auto* ball_b = std::get_if<Ball>(&b.shape());
  if (ball_a != nullptr && ball_b != nullptr) {
    // Balls make every factor closed-form: A+B is the ball of summed radii
    // and the intersection is the smaller ball.
    est_a = gaussian::measure_ball_exact(ball_a->radius, n);
    est_b = gaussian::measure_ball_exact(ball_b->radius, n);
    est_cap = gaussian::measure_ball_exact(std::min(ball_a->radius, ball_b->radius), n);
    est_sum = gaussian::measure_ball_exact(
        0.5 * std::sqrt(3.0) * (ball_a->radius + ball_b->radius), n);
  } else {
    est_a = measure_body(a, budget, kStreamLeftA);
    est_b = measure_body(b, budget, kStreamLeftB);
    est_cap = measure_body(intersect(a, b), budget, kStreamIntersection);
    // x in (sqrt(3)/2)(A+B) iff (2/sqrt(3)) x in A+B.
    const Matrix st = (2.0 / std::sqrt(3.0)) * Matrix::Identity(n, n);
    est_sum = sum_body_measure(a, b, st, budget, kStreamSum);
  }

  const ValueWithCi lhs = product(from_estimate(est_a), from_estimate(est_b));
  const ValueWithCi rhs =
      scaled(product(from_estimate(est_sum), from_estimate(est_cap)), factor);
  json params{{"a", body_json(a)}, {"b", body_json(b)}};
  return finish("corollary1", n, lhs, rhs, budget, params.dump());
}

bool contained_in_ball(const SymmetricConvexBody& body, double radius, int probes,
                       std::uint64_t seed) {
  require(radius > 0.0, "radius must be positive");
  require(probes >= 1, "probe count must be positive");
  const int n = body.dimension();
  const double probe_radius = radius * (1.0 + 1e-9);
  auto engine = chunk_engine(seed, 0);
  std::normal_distribution<double> normal;
  Vector direction(n);
  for (int i = 0; i < probes; ++i) {
    double norm = 0.0;
    do {
      for (int j = 0; j < n; ++j) direction(j) = normal(engine);
      norm = direction.norm();
    } while (norm < 1e-6);
    if (body.contains((probe_radius / norm) * direction)) return false;
  }
  return true;
}

InequalityReport check_small_radius(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                                    const CheckBudget& budget) {
  const int n = a.dimension();
  require(b.dimension() == n, "dimension mismatch");
  const double radius = 0.374 * std::sqrt(static_cast<double>(n));
  constexpr int kContainmentProbes = 100000;
  if (!contained_in_ball(a, radius, kContainmentProbes, derive_seed(budget.seed, kStreamContainA)))
    throw std::invalid_argument("first body is not inside the small-radius ball");
  if (!contained_in_ball(b, radius, kContainmentProbes, derive_seed(budget.seed, kStreamContainB)))
    throw std::invalid_argument("second body is not inside the small-radius ball");

  const auto est_a = measure_body(a, budget, kStreamLeftA);
  const auto est_b = measure_body(b, budget, kStreamLeftB);
  const auto est_cap = measure_body(intersect(a, b), budget, kStreamIntersection);
  json params{{"radius", radius}, {"a", body_json(a)}, {"b", body_json(b)}};
  return finish("small_radius", n, product(from_estimate(est_a), from_estimate(est_b)),
                from_estimate(est_cap), budget, params.dump());
}

InequalityReport check_lemma1(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                              const Matrix& mmat, const CheckBudget& budget) {
  const int m = a.dimension();
  const int n = b.dimension();
  require(mmat.rows() == m && mmat.cols() == n, "cross-covariance has the wrong shape");
  const Matrix gram = Matrix::Identity(n, n) - mmat.transpose() * mmat;
  {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (gram + gram.transpose()));
    require(solver.info() == Eigen::Success && solver.eigenvalues().minCoeff() > 1e-12,
            "I - M'M must be positive definite");
  }
  const double det_factor = std::sqrt(gram.determinant());

  Matrix block(m + n, m + n);
  block << Matrix::Identity(m, m), mmat, mmat.transpose(), Matrix::Identity(n, n);
  const Matrix root = matrix_lab::symmetric_psd_sqrt(block);
  const Eigen::PartialPivLU<Matrix> lu(root);

  const auto split_member = [&](const Vector& w) {
    return a.contains(w.head(m)) && b.contains(w.tail(n));
  };
  // Both sides are joint measures over R^{m+n} on one shared stream; at
  // M = 0 the square root is the identity bit-exactly and the margin is
  // exactly zero.
  const auto est_product_set = measure_indicator(m + n, split_member, budget, kStreamLeftA);
  const auto est_image = measure_indicator(
      m + n, [&](const Vector& w) { return split_member(lu.solve(w)); }, budget, kStreamLeftA);

  const ValueWithCi lhs = scaled(from_estimate(est_product_set), det_factor);
  const ValueWithCi rhs = from_estimate(est_image);
  json params{{"m", m}, {"n", n}, {"a", body_json(a)}, {"b", body_json(b)}};
  {
    json rows = json::array();
    for (Eigen::Index i = 0; i < mmat.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < mmat.cols(); ++j) row.push_back(mmat(i, j));
      rows.push_back(row);
    }
    params["mmat"] = rows;
  }
  return finish("lemma1", m + n, lhs, rhs, budget, params.dump());
}

InequalityReport check_shao(const SymmetricConvexBody& a, const SymmetricConvexBody& b,
                            const Matrix& mmat, const CheckBudget& budget) {
  const int m = a.dimension();
  const int n = b.dimension();
  require(mmat.rows() == m && mmat.cols() == n, "cross-covariance has the wrong shape");
  const Matrix gram = Matrix::Identity(n, n) - mmat.transpose() * mmat;
  {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (gram + gram.transpose()));
    require(solver.info() == Eigen::Success && solver.eigenvalues().minCoeff() > 1e-12,
            "I - M'M must be positive definite");
  }
  const double factor = 1.0 / std::sqrt(gram.determinant());

  const auto est_a = measure_body(a, budget, kStreamLeftA);
  const auto est_b = measure_body(b, budget, kStreamLeftB);
  MeasureEstimate est_joint;
  if (budget.engine == Engine::quadrature) {
    Matrix block(m + n, m + n);
    block << Matrix::Identity(m, m), mmat, mmat.transpose(), Matrix::Identity(n, n);
    const Matrix root = matrix_lab::symmetric_psd_sqrt(block);
    est_joint = gaussian::measure_quadrature(
        m + n,
        [&](const Vector& w) {
          const Vector v = root * w;
          return a.contains(v.head(m)) && b.contains(v.tail(n));
        },
        budget.quadrature);
  } else {
    // Y = M'X + (I - M'M)^{1/2} Z; the tetrad over (+-x, +-z) makes the hit
    // count invariant under M -> -M bit-exactly.
    const Matrix cross = mmat.transpose();
    const Matrix root = matrix_lab::symmetric_psd_sqrt(gram);
    est_joint = gaussian::measure_mc_tetrad(
        m, n,
        [&](const Vector& x, const Vector& z) {
          return a.contains(x) && b.contains(cross * x + root * z);
        },
        mc_options(budget, kStreamIntersection));
  }

  const ValueWithCi lhs = product(from_estimate(est_a), from_estimate(est_b));
  const ValueWithCi rhs = scaled(from_estimate(est_joint), factor);
  json params{{"m", m}, {"n", n}, {"a", body_json(a)}, {"b", body_json(b)}};
  {
    json rows = json::array();
    for (Eigen::Index i = 0; i < mmat.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < mmat.cols(); ++j) row.push_back(mmat(i, j));
      rows.push_back(row);
    }
    params["mmat"] = rows;
  }
  return finish("shao", m + n, lhs, rhs, budget, params.dump());
}

InequalityReport check_anderson(const SymmetricConvexBody& c, const Matrix& k,
                                const CheckBudget& budget) {
  const int n = c.dimension();
  require(k.rows() == n && k.cols() == n, "K has the wrong shape");
  require((k - k.transpose()).cwiseAbs().maxCoeff() <=
              1e-10 * std::max(1.0, k.cwiseAbs().maxCoeff()),
          "K must be symmetric");
  {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (k + k.transpose()));
    require(solver.info() == Eigen::Success && solver.eigenvalues().minCoeff() >= -1e-12,
            "K must be positive semidefinite");
  }
  const Matrix transform = Matrix::Identity(n, n) + k;
  // Shared stream on both sides: at K = 0 the image membership is the
  // identity solve and the margin is exactly zero.
  const auto est_c = measure_body(c, budget, kStreamLeftA);
  const auto est_image = measure_body(linear_image(transform, c), budget, kStreamLeftA);
  json params{{"c", body_json(c)}};
  {
    json rows = json::array();
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < k.cols(); ++j) row.push_back(k(i, j));
      rows.push_back(row);
    }
    params["k"] = rows;
  }
  return finish("anderson", n, from_estimate(est_c), from_estimate(est_image), budget,
                params.dump());
}

HProfile h_profile(const SymmetricConvexBody& a, const SymmetricConvexBody& b, const Matrix& s,
                   const Matrix& t, const std::vector<Vector>& ys, const CheckBudget& budget) {
  const int n = a.dimension();
  require(b.dimension() == n, "dimension mismatch");
  require(s.rows() == n && s.cols() == n && t.rows() == n && t.cols() == n,
          "shift matrices must be n x n");
  HProfile profile{a, b, s, t, ys, {}};
  profile.values.reserve(ys.size());
  for (const Vector& y : ys) {
    require(y.size() == n, "shift dimension mismatch");
    const Vector sy = s * y;
    const Vector ty = t * y;
    const TranslatedBody section_a = translate(a, -sy);  // A - Sy
    const TranslatedBody section_b = translate(b, ty);   // B + Ty
    profile.values.push_back(measure_indicator(
        n, [&](const Vector& x) { return section_a.contains(x) && section_b.contains(x); },
        budget, kStreamLeftA));
  }
  return profile;
}

HPropertyReport h_property_suite(const HProfile& profile, const MinkowskiOptions& opt) {
  const std::size_t count = profile.ys.size();
  require(profile.values.size() == count, "profile has no estimates");
  HPropertyReport report;

  const auto exact_match = [](const Vector& u, const Vector& v) {
    return u.size() == v.size() && (u.array() == v.array()).all();
  };

  std::ptrdiff_t zero_index = -1;
  for (std::size_t i = 0; i < count; ++i) {
    if ((profile.ys[i].array() == 0.0).all()) {
      zero_index = static_cast<std::ptrdiff_t>(i);
      break;
    }
  }
  report.includes_zero = zero_index >= 0;
  if (report.includes_zero) {
    const auto& at_zero = profile.values[static_cast<std::size_t>(zero_index)];
    report.max_at_zero = true;
    for (std::size_t i = 0; i < count; ++i) {
      if (profile.values[i].ci_low > at_zero.ci_high) {
        report.max_at_zero = false;
        break;
      }
    }
  }

  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const Vector mid = 0.5 * (profile.ys[i] + profile.ys[j]);
      std::ptrdiff_t mid_index = -1;
      for (std::size_t k = 0; k < count; ++k) {
        if (k != i && k != j && exact_match(profile.ys[k], mid)) {
          mid_index = static_cast<std::ptrdiff_t>(k);
          break;
        }
      }
      if (mid_index < 0) continue;
      ++report.triples;
      const auto& h_mid = profile.values[static_cast<std::size_t>(mid_index)];
      const double mean_floor =
          std::sqrt(profile.values[i].ci_low * profile.values[j].ci_low);
      if (h_mid.ci_high < mean_floor) ++report.certain_log_concavity_violations;
    }
  }
  report.midpoint_log_concave = report.certain_log_concavity_violations == 0;

  report.support_condition = true;
  const Matrix st = profile.s + profile.t;
  for (std::size_t i = 0; i < count; ++i) {
    if (profile.values[i].value <= 0.0) continue;
    if (minkowski_member(profile.a, profile.b, st * profile.ys[i], opt) ==
        MinkowskiVerdict::non_member) {
      report.support_condition = false;
      break;
    }
  }
  return report;
}

std::string csv_header() {
  return "name,n,lhs,lhs_lo,lhs_hi,rhs,rhs_lo,rhs_hi,margin,verdict,samples,seed,params";
}

namespace {

std::string csv_quote(const std::string& field) {
  std::string quoted = "\"";
  for (const char ch : field) {
    quoted += ch;
    if (ch == '"') quoted += '"';
  }
  quoted += '"';
  return quoted;
}

}  // namespace

std::string csv_row(const InequalityReport& report) {
  std::string row;
  row += report.name;
  row += ',';
  row += std::to_string(report.n);
  for (const double v : {report.lhs.value, report.lhs.ci_low, report.lhs.ci_high,
                         report.rhs.value, report.rhs.ci_low, report.rhs.ci_high,
                         report.margin}) {
    row += ',';
    row += format_double(v);
  }
  row += ',';
  row += to_string(report.verdict);
  row += ',';
  row += std::to_string(report.samples);
  row += ',';
  row += std::to_string(report.seed);
  row += ',';
  row += csv_quote(report.params);
  return row;
}

}  // namespace gci::inequality_lab
