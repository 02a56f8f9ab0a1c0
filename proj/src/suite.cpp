#include "gci/suite.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gci/chernoff.hpp"
#include "gci/rng.hpp"
#include "gci/serialization.hpp"

namespace gci::cli {

namespace {

using inequality_lab::CheckBudget;
using inequality_lab::InequalityReport;
using inequality_lab::ValueWithCi;
using inequality_lab::Verdict;
using json = nlohmann::ordered_json;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

// Suite indices feed the per-trial seed derivation, so a trial reproduces
// identically whether its suite runs alone or as part of `all`.
constexpr std::uint64_t kGcc2d = 0;
constexpr std::uint64_t kEllipsoid = 1;
constexpr std::uint64_t kMainTheorem = 2;
constexpr std::uint64_t kCorollary1 = 3;
constexpr std::uint64_t kSmallRadius = 4;
constexpr std::uint64_t kLemmaShao = 5;
constexpr std::uint64_t kHProfile = 6;
constexpr std::uint64_t kChernoff = 7;

std::uint64_t trial_seed(const SuiteConfig& config, std::uint64_t suite_index, int trial) {
  return derive_seed(config.seed, suite_index * 1'000'000 + static_cast<std::uint64_t>(trial));
}

CheckBudget budget_for(const SuiteConfig& config, std::uint64_t seed) {
  CheckBudget budget;
  budget.samples = config.samples;
  budget.seed = seed;
  budget.confidence = config.confidence;
  return budget;
}

ShapeKind kind_cycle4(int index) {
  constexpr ShapeKind kinds[] = {ShapeKind::ball, ShapeKind::box, ShapeKind::ellipsoid,
                                 ShapeKind::polytope};
  return kinds[index % 4];
}

// Sum-body membership runs minkowski_member per sample; balls, boxes and
// ellipsoids all carry closed-form separation certificates there, so the
// randomized sum-measure suites draw from these three kinds.
ShapeKind kind_cycle3(int index) {
  constexpr ShapeKind kinds[] = {ShapeKind::ball, ShapeKind::box, ShapeKind::ellipsoid};
  return kinds[index % 3];
}

// Random body rescaled to fit inside Ball(limit) with slack: the outer
// radius lands at a fraction in [0.3, 0.95) of the limit.
SymmetricConvexBody small_body(ShapeKind kind, int n, double limit, std::uint64_t seed) {
  auto engine = chunk_engine(seed, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  const double fill = 0.3 + 0.65 * unit(engine);
  const double reach = fill * limit;
  switch (kind) {
    case ShapeKind::ball: return make_ball(n, reach);
    case ShapeKind::box: {
      Vector halfwidths(n);
      for (int i = 0; i < n; ++i) halfwidths(i) = 0.2 + 0.8 * unit(engine);
      halfwidths *= reach / halfwidths.norm();
      return make_box(halfwidths);
    }
    case ShapeKind::ellipsoid: {
      Matrix g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = normal(engine);
      Matrix q = (g.transpose() * g).eval();
      q = (0.5 * (q + q.transpose())).eval();
      q += (0.3 * q.trace() / n) * Matrix::Identity(n, n);  // temper the aspect ratio
      Eigen::SelfAdjointEigenSolver<Matrix> solver(q);
      // Outer radius of { x : <x, Qx> <= 1 } is 1/sqrt(min eigenvalue).
      q *= 1.0 / (solver.eigenvalues().minCoeff() * reach * reach);
      return make_ellipsoid(q);
    }
    case ShapeKind::polytope: break;
  }
  throw std::invalid_argument("unsupported shape kind for the small-radius generator");
}

Matrix random_cross_covariance(int m, int n, std::uint64_t seed) {
  auto engine = chunk_engine(seed, 0);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> strength(0.2, 0.9);
  Matrix g(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(engine);
  const double target = strength(engine);
  const Eigen::JacobiSVD<Matrix> svd(g);
  return (target / svd.singularValues().maxCoeff()) * g;
}

std::vector<InequalityReport> run_gcc2d(const SuiteConfig& config) {
  std::vector<InequalityReport> reports;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config, kGcc2d, t);
    const auto a = random_body(kind_cycle4(t), 2, 1.0, derive_seed(seed, 10));
    const auto b = random_body(kind_cycle4(t / 4), 2, 1.0, derive_seed(seed, 11));
    reports.push_back(inequality_lab::check_gcc(a, b, budget_for(config, seed)));
  }
  return reports;
}

std::vector<InequalityReport> run_ellipsoid(const SuiteConfig& config) {
  std::vector<InequalityReport> reports;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config, kEllipsoid, t);
    const auto a = random_body(kind_cycle4(t), config.n, 1.0, derive_seed(seed, 10));
    const auto b = random_body(ShapeKind::ellipsoid, config.n, 1.0, derive_seed(seed, 11));
    reports.push_back(inequality_lab::check_gcc(a, b, budget_for(config, seed)));
  }
  return reports;
}

std::vector<InequalityReport> run_main_theorem(const SuiteConfig& config) {
  std::vector<InequalityReport> reports;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config, kMainTheorem, t);
    const auto a = random_body(kind_cycle3(t), config.n, 1.0, derive_seed(seed, 10));
    const auto b = random_body(kind_cycle3(t / 3), config.n, 1.0, derive_seed(seed, 11));
    const auto angles = matrix_lab::random_angle_pair(config.n, derive_seed(seed, 12), 0.3, 1.2);
    const auto q = matrix_lab::build_from_angles(angles);
    reports.push_back(inequality_lab::check_main_theorem(a, b, q, budget_for(config, seed)));
  }
  return reports;
}

std::vector<InequalityReport> run_corollary1(const SuiteConfig& config) {
  std::vector<InequalityReport> reports;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config, kCorollary1, t);
    const auto a = random_body(kind_cycle3(t), config.n, 1.0, derive_seed(seed, 10));
    const auto b = random_body(kind_cycle3(t / 3), config.n, 1.0, derive_seed(seed, 11));
    reports.push_back(inequality_lab::check_corollary1(a, b, budget_for(config, seed)));
  }
  return reports;
}

std::vector<InequalityReport> run_small_radius(const SuiteConfig& config) {
  std::vector<InequalityReport> reports;
  const double limit = 0.374 * std::sqrt(static_cast<double>(config.n));
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config, kSmallRadius, t);
    const auto a = small_body(kind_cycle3(t), config.n, limit, derive_seed(seed, 10));
    const auto b = small_body(kind_cycle3(t / 3), config.n, limit, derive_seed(seed, 11));
    reports.push_back(inequality_lab::check_small_radius(a, b, budget_for(config, seed)));
  }
  return reports;
}

std::vector<InequalityReport> run_lemma_shao(const SuiteConfig& config) {
  std::vector<InequalityReport> reports;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config, kLemmaShao, t);
    const auto a = random_body(kind_cycle3(t), config.n, 1.0, derive_seed(seed, 10));
    const auto b = random_body(kind_cycle3(t / 3), config.n, 1.0, derive_seed(seed, 11));
    const Matrix mmat = random_cross_covariance(config.n, config.n, derive_seed(seed, 12));
    reports.push_back(inequality_lab::check_lemma1(a, b, mmat, budget_for(config, seed)));
    reports.push_back(inequality_lab::check_shao(a, b, mmat, budget_for(config, seed)));
  }
  return reports;
}

std::vector<InequalityReport> run_h_profile(const SuiteConfig& config) {
  std::vector<InequalityReport> reports;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t seed = trial_seed(config, kHProfile, t);
    const int n = config.n;
    const auto a = random_body(kind_cycle3(t), n, 1.0, derive_seed(seed, 10));
    const auto b = random_body(kind_cycle3(t / 3), n, 1.0, derive_seed(seed, 11));
    const Matrix s = Matrix::Identity(n, n);

    auto engine = chunk_engine(derive_seed(seed, 12), 0);
    std::normal_distribution<double> normal;
    std::vector<Vector> ys;
    ys.push_back(Vector::Zero(n));
    for (int k = 0; k < 3; ++k) {
      Vector y(n);
      for (int i = 0; i < n; ++i) y(i) = normal(engine);
      y *= 0.4 / y.norm();
      ys.push_back(y);
      ys.push_back((-y).eval());
      ys.push_back((0.5 * y).eval());  // midpoint of (y, 0)
    }

    auto budget = budget_for(config, seed);
    const auto profile = inequality_lab::h_profile(a, b, s, s, ys, budget);
    const auto properties = inequality_lab::h_property_suite(profile);

    const auto zero_value = profile.values[0];
    // Largest section other than the zero shift, for the report row.
    ValueWithCi best{0.0, 0.0, 0.0};
    for (std::size_t i = 1; i < profile.values.size(); ++i)
      if (profile.values[i].value > best.value)
        best = inequality_lab::from_estimate(profile.values[i]);

    json params{{"a", json::parse(to_text(a))}, {"b", json::parse(to_text(b))}, {"shifts", ys.size()}};
    const std::string params_text = params.dump();
    const auto property_row = [&](const char* name, const ValueWithCi& lhs, const ValueWithCi& rhs,
                                  bool holds) {
      InequalityReport report;
      report.name = name;
      report.n = n;
      report.lhs = lhs;
      report.rhs = rhs;
      report.margin = rhs.value - lhs.value;
      report.verdict = holds ? Verdict::confirmed : Verdict::violated;
      report.samples = config.samples;
      report.seed = seed;
      report.params = params_text;
      return report;
    };

    reports.push_back(property_row("h_max_at_zero", best,
                                   inequality_lab::from_estimate(zero_value),
                                   properties.max_at_zero));
    const double violations = static_cast<double>(properties.certain_log_concavity_violations);
    reports.push_back(property_row("h_log_concavity", ValueWithCi{violations, violations, violations},
                                   ValueWithCi{0.0, 0.0, 0.0}, properties.midpoint_log_concave));
    reports.push_back(property_row("h_support", ValueWithCi{0.0, 0.0, 0.0},
                                   ValueWithCi{0.0, 0.0, 0.0}, properties.support_condition));
  }
  return reports;
}

std::vector<InequalityReport> run_chernoff(const SuiteConfig& config) {
  // Constants and the dominance grid are deterministic; trial count does not
  // apply. Three rows: c0, c1, and the worst exact-minus-bound gap.
  std::vector<InequalityReport> reports;
  const auto constant_row = [&](const char* name, double value, const char* params) {
    InequalityReport report;
    report.name = name;
    report.n = 0;
    report.lhs = ValueWithCi{value, value, value};
    report.rhs = report.lhs;
    report.margin = 0.0;
    report.verdict = Verdict::confirmed;
    report.samples = 0;
    report.seed = config.seed;
    report.params = params;
    return report;
  };
  reports.push_back(constant_row("chernoff_c0", chernoff::constant_c0(),
                                 R"json({"form":"(1/2)exp(-1/2)"})json"));
  reports.push_back(constant_row("chernoff_c1", chernoff::find_c1(1e-8), R"json({"tol":1e-8})json"));

  double worst_gap = -1.0;
  for (int n = 1; n <= 64; ++n) {
    for (int step = 1; step <= 20; ++step) {
      const auto sides = chernoff::bound_vs_exact(0.05 * step, n);
      worst_gap = std::max(worst_gap, sides.exact - sides.bound);
    }
  }
  InequalityReport dominance;
  dominance.name = "chernoff_dominance";
  dominance.n = 64;
  dominance.lhs = ValueWithCi{worst_gap, worst_gap, worst_gap};
  dominance.rhs = ValueWithCi{0.0, 0.0, 0.0};
  dominance.margin = -worst_gap;
  dominance.verdict = worst_gap <= 0.0 ? Verdict::confirmed : Verdict::violated;
  dominance.samples = 0;
  dominance.seed = config.seed;
  dominance.params = R"({"k_grid":"0.05..1.00 step 0.05","n_grid":"1..64"})";
  reports.push_back(dominance);
  return reports;
}

bool known_suite(const std::string& name) {
  for (const char* suite : {"gcc2d", "ellipsoid", "main_theorem", "corollary1", "small_radius",
                            "lemma_shao", "h_profile", "chernoff", "all"})
    if (name == suite) return true;
  return false;
}

}  // namespace

SuiteConfig parse_config(const std::string& config_path, const FlagValues& flags) {
  SuiteConfig config;
  if (!config_path.empty()) {
    const json node = json::parse(read_file(config_path), nullptr, /*allow_exceptions=*/false);
    if (node.is_discarded() || !node.is_object())
      throw std::invalid_argument("malformed config file: " + config_path);
    for (const auto& [key, value] : node.items()) {
      if (key == "suite") config.suite = value.get<std::string>();
      else if (key == "n") config.n = value.get<int>();
      else if (key == "trials") config.trials = value.get<int>();
      else if (key == "samples") config.samples = value.get<std::int64_t>();
      else if (key == "seed") config.seed = value.get<std::uint64_t>();
      else if (key == "confidence") config.confidence = value.get<double>();
      else if (key == "output") config.output = value.get<std::string>();
      else throw std::invalid_argument("unknown config key: " + key);
    }
  }
  if (flags.suite) config.suite = *flags.suite;
  if (flags.n) config.n = *flags.n;
  if (flags.trials) config.trials = *flags.trials;
  if (flags.samples) config.samples = *flags.samples;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.confidence) config.confidence = *flags.confidence;
  if (flags.output) config.output = *flags.output;

  require(known_suite(config.suite), "invalid suite name: " + config.suite);
  require(config.n >= 1, "n must be at least 1");
  require(config.trials >= 1, "trials must be at least 1");
  require(config.samples >= 100, "samples must be at least 100");
  require(config.confidence > 0.0 && config.confidence < 1.0, "confidence must lie in (0, 1)");
  return config;
}

SuiteResult run_suite(const SuiteConfig& config) {
  require(known_suite(config.suite), "invalid suite name: " + config.suite);

  std::vector<InequalityReport> reports;
  const auto run_one = [&](const std::string& name) {
    std::vector<InequalityReport> part;
    if (name == "gcc2d") {
      SuiteConfig forced = config;
      forced.n = 2;  // the dimension-2 theorem
      part = run_gcc2d(forced);
    } else if (name == "ellipsoid") {
      part = run_ellipsoid(config);
    } else if (name == "main_theorem") {
      part = run_main_theorem(config);
    } else if (name == "corollary1") {
      part = run_corollary1(config);
    } else if (name == "small_radius") {
      part = run_small_radius(config);
    } else if (name == "lemma_shao") {
      part = run_lemma_shao(config);
    } else if (name == "h_profile") {
      part = run_h_profile(config);
    } else if (name == "chernoff") {
      part = run_chernoff(config);
    }
    reports.insert(reports.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  };

  if (config.suite == "all") {
    for (const char* name : {"gcc2d", "ellipsoid", "main_theorem", "corollary1", "small_radius",
                             "lemma_shao", "h_profile", "chernoff"})
      run_one(name);
  } else {
    run_one(config.suite);
  }

  SuiteResult result;
  result.csv = inequality_lab::csv_header() + "\n";
  for (const auto& report : reports) {
    result.csv += inequality_lab::csv_row(report);
    result.csv += '\n';
    switch (report.verdict) {
      case Verdict::confirmed: ++result.confirmed; break;
      case Verdict::inconclusive: ++result.inconclusive; break;
      case Verdict::violated: ++result.violated; break;
    }
  }
  result.summary = "suite=" + config.suite + " trials=" + std::to_string(config.trials) +
                   " confirmed=" + std::to_string(result.confirmed) +
                   " inconclusive=" + std::to_string(result.inconclusive) +
                   " violated=" + std::to_string(result.violated);
  if (!config.output.empty()) write_file(config.output, result.csv);
  return result;
}

}  // namespace gci::cli
