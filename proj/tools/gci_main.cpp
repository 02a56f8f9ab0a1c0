#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gci/chernoff.hpp"
#include "gci/inequality_lab.hpp"
#include "gci/matrix_lab.hpp"
#include "gci/rng.hpp"
#include "gci/serialization.hpp"
#include "gci/suite.hpp"

namespace {

using gci::Matrix;
using gci::SymmetricConvexBody;
using gci::Vector;
using gci::inequality_lab::CheckBudget;
using gci::inequality_lab::Engine;
using gci::inequality_lab::InequalityReport;
using gci::inequality_lab::Verdict;

Matrix matrix_from_file(const std::string& path) {
  const auto node = nlohmann::json::parse(gci::read_file(path));
  if (!node.is_array() || node.empty()) throw std::invalid_argument("matrix file must hold an array of rows");
  const auto rows = static_cast<Eigen::Index>(node.size());
  const auto cols = static_cast<Eigen::Index>(node.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = node.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument("matrix rows have inconsistent lengths");
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
  }
  return m;
}

SymmetricConvexBody body_from_file(const std::string& path) {
  return gci::body_from_text(gci::read_file(path));
}

const char* source_name(gci::gaussian::Source source) {
  switch (source) {
    case gci::gaussian::Source::exact: return "exact";
    case gci::gaussian::Source::quadrature: return "quadrature";
    case gci::gaussian::Source::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

int emit_report(const InequalityReport& report, const std::string& output) {
  const std::string csv = gci::inequality_lab::csv_header() + "\n" +
                          gci::inequality_lab::csv_row(report) + "\n";
  if (output.empty()) {
    std::cout << csv;
  } else {
    gci::write_file(output, csv);
    std::cout << report.name << ": " << to_string(report.verdict) << " (margin "
              << gci::format_double(report.margin) << ")\n";
  }
  return report.verdict == Verdict::violated ? 1 : 0;
}

struct BudgetFlags {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  double confidence = 0.99;
  bool quadrature = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--samples", samples, "Monte Carlo evaluations per measure");
    cmd.add_option("--seed", seed, "base seed for all derived streams");
    cmd.add_option("--confidence", confidence, "two-sided confidence level in (0, 1)");
    cmd.add_flag("--quadrature", quadrature, "use the n<=3 quadrature oracle instead of MC");
  }

  CheckBudget budget() const {
    CheckBudget b;
    b.samples = samples;
    b.seed = seed;
    b.confidence = confidence;
    b.engine = quadrature ? Engine::quadrature : Engine::monte_carlo;
    return b;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for Gaussian correlation inequalities on symmetric convex bodies"};
  app.require_subcommand(1);

  // measure ------------------------------------------------------------
  auto* measure_cmd = app.add_subcommand("measure", "Gaussian measure of a body");
  std::string measure_body_path;
  BudgetFlags measure_flags;
  measure_cmd->add_option("--body", measure_body_path, "body description file")->required();
  measure_flags.attach(*measure_cmd);

  // check --------------------------------------------------------------
  auto* check_cmd = app.add_subcommand("check", "evaluate one inequality");
  std::string inequality;
  std::string body_a_path;
  std::string body_b_path;
  std::string quintuple_path;
  std::string matrix_path;
  std::string check_output;
  double li_p = 0.6;
  double li_r = 0.8;
  BudgetFlags check_flags;
  check_cmd
      ->add_option("--inequality", inequality,
                   "one of gcc, ssz, li, corollary1, small_radius, main_theorem, lemma1, shao, "
                   "anderson")
      ->required();
  check_cmd->add_option("--a", body_a_path, "first body file")->required();
  check_cmd->add_option("--b", body_b_path, "second body file (unused by anderson)");
  check_cmd->add_option("--quintuple", quintuple_path, "quintuple file for main_theorem");
  check_cmd->add_option("--matrix", matrix_path,
                        "matrix file: cross-covariance for lemma1/shao, K for anderson");
  check_cmd->add_option("--p", li_p, "li scalar p");
  check_cmd->add_option("--r", li_r, "li scalar r");
  check_cmd->add_option("--output", check_output, "write the CSV report here");
  check_flags.attach(*check_cmd);

  // angles ---------------------------------------------------------------
  auto* angles_cmd = app.add_subcommand("angles", "build and validate a trigonometric quintuple");
  std::string angles_path;
  std::string angles_output;
  int angles_n = 4;
  std::uint64_t angles_seed = 42;
  angles_cmd->add_option("--angles", angles_path, "angle-pair file; omitted draws a random pair");
  angles_cmd->add_option("--n", angles_n, "dimension for a random pair");
  angles_cmd->add_option("--seed", angles_seed, "seed for a random pair");
  angles_cmd->add_option("--output", angles_output, "write the quintuple here");

  // h-profile ------------------------------------------------------------
  auto* h_cmd = app.add_subcommand("h-profile", "section profile h(y) and its properties");
  std::string h_a_path;
  std::string h_b_path;
  int h_shifts = 3;
  double h_scale = 0.4;
  BudgetFlags h_flags;
  h_cmd->add_option("--a", h_a_path, "first body file")->required();
  h_cmd->add_option("--b", h_b_path, "second body file")->required();
  h_cmd->add_option("--shifts", h_shifts, "random shift directions (plus 0, mirrors, midpoints)");
  h_cmd->add_option("--scale", h_scale, "norm of each random shift");
  h_flags.attach(*h_cmd);

  // chernoff ---------------------------------------------------------------
  auto* chernoff_cmd = app.add_subcommand("chernoff", "tail-bound constants and dominance grid");
  double c1_tol = 1e-8;
  chernoff_cmd->add_option("--tol", c1_tol, "bisection tolerance for the c1 root");

  // suite --------------------------------------------------------------
  auto* suite_cmd = app.add_subcommand("suite", "randomized experiment suites");
  gci::cli::FlagValues flags;
  std::string config_path;
  std::string suite_name;
  int suite_n = 0;
  int suite_trials = 0;
  std::int64_t suite_samples = 0;
  std::uint64_t suite_seed = 0;
  double suite_confidence = 0.0;
  std::string suite_output;
  suite_cmd->add_option("--config", config_path, "JSON config file; flags override it");
  auto* opt_suite = suite_cmd->add_option("--suite", suite_name, "suite name or 'all'");
  auto* opt_n = suite_cmd->add_option("--n", suite_n, "body dimension");
  auto* opt_trials = suite_cmd->add_option("--trials", suite_trials, "randomized trials per suite");
  auto* opt_samples = suite_cmd->add_option("--samples", suite_samples, "MC evaluations per measure");
  auto* opt_seed = suite_cmd->add_option("--seed", suite_seed, "global seed");
  auto* opt_confidence = suite_cmd->add_option("--confidence", suite_confidence, "confidence level");
  auto* opt_output = suite_cmd->add_option("--output", suite_output, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*measure_cmd) {
      const auto body = body_from_file(measure_body_path);
      gci::gaussian::MeasureEstimate estimate;
      if (measure_flags.quadrature) {
        estimate = gci::gaussian::measure_quadrature(body);
      } else {
        estimate = gci::gaussian::measure(
            body, {measure_flags.samples, measure_flags.seed, measure_flags.confidence});
      }
      std::cout << "value=" << gci::format_double(estimate.value)
                << " ci_low=" << gci::format_double(estimate.ci_low)
                << " ci_high=" << gci::format_double(estimate.ci_high)
                << " source=" << source_name(estimate.source) << " samples=" << estimate.samples
                << "\n";
      return 0;
    }

    if (*check_cmd) {
      const auto a = body_from_file(body_a_path);
      const CheckBudget budget = check_flags.budget();
      InequalityReport report;
      if (inequality == "anderson") {
        if (matrix_path.empty()) throw std::invalid_argument("anderson requires --matrix");
        report = gci::inequality_lab::check_anderson(a, matrix_from_file(matrix_path), budget);
      } else {
        if (body_b_path.empty()) throw std::invalid_argument("this inequality requires --b");
        const auto b = body_from_file(body_b_path);
        if (inequality == "gcc") {
          report = gci::inequality_lab::check_gcc(a, b, budget);
        } else if (inequality == "ssz") {
          report = gci::inequality_lab::check_ssz(a, b, budget);
        } else if (inequality == "li") {
          report = gci::inequality_lab::check_li(a, b, li_p, li_r, budget);
        } else if (inequality == "corollary1") {
          report = gci::inequality_lab::check_corollary1(a, b, budget);
        } else if (inequality == "small_radius") {
          report = gci::inequality_lab::check_small_radius(a, b, budget);
        } else if (inequality == "main_theorem") {
          if (quintuple_path.empty()) throw std::invalid_argument("main_theorem requires --quintuple");
          report = gci::inequality_lab::check_main_theorem(
              a, b, gci::quintuple_from_text(gci::read_file(quintuple_path)), budget);
        } else if (inequality == "lemma1") {
          if (matrix_path.empty()) throw std::invalid_argument("lemma1 requires --matrix");
          report = gci::inequality_lab::check_lemma1(a, b, matrix_from_file(matrix_path), budget);
        } else if (inequality == "shao") {
          if (matrix_path.empty()) throw std::invalid_argument("shao requires --matrix");
          report = gci::inequality_lab::check_shao(a, b, matrix_from_file(matrix_path), budget);
        } else {
          throw std::invalid_argument("unknown inequality: " + inequality);
        }
      }
      return emit_report(report, check_output);
    }

    if (*angles_cmd) {
      const auto angles = angles_path.empty()
                              ? gci::matrix_lab::random_angle_pair(angles_n, angles_seed)
                              : gci::angle_pair_from_text(gci::read_file(angles_path));
      const auto quintuple = gci::matrix_lab::build_from_angles(angles);
      const auto report = gci::matrix_lab::check_hypotheses(quintuple);
      std::cout << "residual_p=" << gci::format_double(report.residual_p)
                << " residual_cross=" << gci::format_double(report.residual_cross)
                << " residual_r=" << gci::format_double(report.residual_r)
                << " residual_block=" << gci::format_double(report.residual_block)
                << " min_eigenvalue=" << gci::format_double(report.min_eigenvalue)
                << " validated=" << (report.validated ? "true" : "false") << "\n";
      if (!angles_output.empty()) gci::write_file(angles_output, gci::to_text(quintuple));
      return report.validated ? 0 : 1;
    }

    if (*h_cmd) {
      const auto a = body_from_file(h_a_path);
      const auto b = body_from_file(h_b_path);
      const int n = a.dimension();
      const Matrix identity = Matrix::Identity(n, n);
      auto engine = gci::chunk_engine(gci::derive_seed(h_flags.seed, 12), 0);
      std::normal_distribution<double> normal;
      std::vector<Vector> ys;
      ys.push_back(Vector::Zero(n));
      for (int k = 0; k < h_shifts; ++k) {
        Vector y(n);
        for (int i = 0; i < n; ++i) y(i) = normal(engine);
        y *= h_scale / y.norm();
        ys.push_back(y);
        ys.push_back((-y).eval());
        ys.push_back((0.5 * y).eval());
      }
      const auto profile =
          gci::inequality_lab::h_profile(a, b, identity, identity, ys, h_flags.budget());
      for (std::size_t i = 0; i < ys.size(); ++i) {
        std::cout << "y" << i << " value=" << gci::format_double(profile.values[i].value)
                  << " ci=[" << gci::format_double(profile.values[i].ci_low) << ", "
                  << gci::format_double(profile.values[i].ci_high) << "]\n";
      }
      const auto properties = gci::inequality_lab::h_property_suite(profile);
      std::cout << "includes_zero=" << (properties.includes_zero ? "true" : "false")
                << " max_at_zero=" << (properties.max_at_zero ? "true" : "false")
                << " triples=" << properties.triples
                << " midpoint_log_concave=" << (properties.midpoint_log_concave ? "true" : "false")
                << " support_condition=" << (properties.support_condition ? "true" : "false")
                << "\n";
      const bool ok =
          properties.max_at_zero && properties.midpoint_log_concave && properties.support_condition;
      return ok ? 0 : 1;
    }

    if (*chernoff_cmd) {
      std::cout << "c0=" << gci::format_double(gci::chernoff::constant_c0()) << "\n";
      std::cout << "c1=" << gci::format_double(gci::chernoff::find_c1(c1_tol)) << "\n";
      double worst_gap = -1.0;
      for (int n = 1; n <= 64; ++n)
        for (int step = 1; step <= 20; ++step) {
          const auto sides = gci::chernoff::bound_vs_exact(0.05 * step, n);
          worst_gap = std::max(worst_gap, sides.exact - sides.bound);
        }
      std::cout << "dominance_worst_gap=" << gci::format_double(worst_gap) << "\n";
      return worst_gap <= 0.0 ? 0 : 1;
    }

    if (*suite_cmd) {
      if (opt_suite->count() > 0) flags.suite = suite_name;
      if (opt_n->count() > 0) flags.n = suite_n;
      if (opt_trials->count() > 0) flags.trials = suite_trials;
      if (opt_samples->count() > 0) flags.samples = suite_samples;
      if (opt_seed->count() > 0) flags.seed = suite_seed;
      if (opt_confidence->count() > 0) flags.confidence = suite_confidence;
      if (opt_output->count() > 0) flags.output = suite_output;
      const auto config = gci::cli::parse_config(config_path, flags);
      const auto result = gci::cli::run_suite(config);
      if (config.output.empty()) std::cout << result.csv;
      std::cout << result.summary << "\n";
      return result.violated > 0 ? 1 : 0;
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
  return 0;
}
