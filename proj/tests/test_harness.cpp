#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pucci_game/harness.hpp"

using namespace pucci_game;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_config(in);
}

const char* kSmallQuadratic = R"(# small run
case = quadratic
domain.kind = ball
domain.radius = 0.5
params.lambda = 1
params.Lambda = 2
params.dim = 2
eps_list = 0.2, 0.1
h.rule = linear
search.mode = eigen
tol = 1e-7
mc.n_playouts = 200
mc.seed = 11
mc.x0 = 0, 0; 0.1, 0.2
mc.transcripts = 2
)";

std::string with(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pucci_game_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(ParseKeyValues, CommentsAndErrors) {
  std::istringstream ok("# comment\n a = 1 # trailing\n\nb=two words\n");
  const auto kv = parse_key_values(ok);
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "two words");

  std::istringstream no_eq("a 1\n");
  EXPECT_THROW(parse_key_values(no_eq), ConfigError);
  std::istringstream repeated("a = 1\na = 2\n");
  EXPECT_THROW(parse_key_values(repeated), ConfigError);
  std::istringstream empty_key(" = 2\n");
  EXPECT_THROW(parse_key_values(empty_key), ConfigError);
}

TEST(ExperimentConfig, ParsesExample) {
  const ExperimentConfig cfg = parse(kSmallQuadratic);
  EXPECT_EQ(cfg.kind, CaseKind::Quadratic);
  EXPECT_EQ(cfg.params.Lambda, 2.0);
  ASSERT_EQ(cfg.eps_list.size(), 2u);
  EXPECT_EQ(cfg.search.mode, SearchMode::EigenbasisOnly);
  EXPECT_EQ(cfg.mc_seed, 11u);
  ASSERT_EQ(cfg.mc_x0.size(), 2u);
  EXPECT_EQ(cfg.mc_x0[1], (Point{0.1, 0.2}));
  EXPECT_NEAR(cfg.h_for(0), 0.05, 1e-15);  // linear default: min_scale / 4 * eps
  EXPECT_NEAR(cfg.h_for(1), 0.025, 1e-15);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(ExperimentConfig, HRules) {
  ExperimentConfig cfg = parse(kSmallQuadratic);
  cfg.h_rule = HRule::Quadratic;
  cfg.h_factor.reset();
  // c = (min_scale / 2) / eps_max = 2.5, h = c eps^2
  EXPECT_NEAR(cfg.h_for(0), 0.1, 1e-15);
  EXPECT_NEAR(cfg.h_for(1), 0.025, 1e-15);
  cfg.h_rule = HRule::List;
  cfg.h_list = {0.04, 0.01};
  EXPECT_EQ(cfg.h_for(1), 0.01);
}

TEST(ExperimentConfig, RejectsBadInput) {
  const std::string base = kSmallQuadratic;
  auto edit = [&](const std::string& from, const std::string& to) { return with(base, from, to); };
  EXPECT_THROW(parse(base + "mc.sede = 3\n"), ConfigError);
  EXPECT_THROW(parse(edit("eps_list = 0.2, 0.1", "eps_list = 0.1, 0.2")), ConfigError);
  EXPECT_THROW(parse(edit("eps_list = 0.2, 0.1", "eps_list = 0.2, -0.1")), ConfigError);
  EXPECT_THROW(parse(edit("h.rule = linear", "h.rule = linear\nh.factor = 0.6")), ConfigError);
  EXPECT_THROW(parse(edit("params.lambda = 1", "params.lambda = 3")), ConfigError);
  EXPECT_THROW(parse(edit("params.dim = 2", "params.dim = 5")), ConfigError);
  EXPECT_THROW(parse(edit("case = quadratic", "case = cubic")), ConfigError);
  EXPECT_THROW(parse(edit("search.mode = eigen", "search.mode = random")), ConfigError);
  EXPECT_THROW(parse(edit("mc.n_playouts = 200", "mc.n_playouts = 1")), ConfigError);
  EXPECT_THROW(parse(edit("mc.x0 = 0, 0; 0.1, 0.2", "mc.x0 = 0, 0.6")), ConfigError);
  EXPECT_THROW(parse(edit("mc.x0 = 0, 0; 0.1, 0.2", "mc.x0 = 0, 0, 0")), ConfigError);
  EXPECT_THROW(parse(edit("tol = 1e-7", "tol = abc")), ConfigError);
  EXPECT_THROW(parse(edit("case = quadratic", "case = degenerate")), ConfigError);
  const std::string annulus = with(edit("domain.kind = ball\ndomain.radius = 0.5",
                                        "domain.kind = annulus\ndomain.r_inner = 0.3\ndomain.r_outer = 1"),
                                   "case = quadratic", "case = radial_annulus");
  EXPECT_NO_THROW(parse(with(annulus, "mc.x0 = 0, 0; 0.1, 0.2", "mc.x0 = 0.5, 0")));
  // eps sqrt(Lambda) must stay below r_inner
  EXPECT_THROW(parse(with(with(annulus, "mc.x0 = 0, 0; 0.1, 0.2", "mc.x0 = 0.5, 0"), "r_inner = 0.3", "r_inner = 0.25")),
               ConfigError);
  EXPECT_THROW(load_experiment_config("/nonexistent/file.cfg"), ConfigError);
}

TEST(MakeCase, QuadraticAndSaddleOracles) {
  ExperimentConfig cfg = parse(kSmallQuadratic);
  const CaseSetup q = make_case(cfg, 0.1);
  ASSERT_TRUE(q.oracle.has_value());
  EXPECT_NEAR(q.game.f(Point{0.0, 0.0}), 8.0, 1e-14);  // P+(2I) = 2 N Lambda
  EXPECT_NEAR((*q.oracle)(Point{0.3, 0.4}), 0.25, 1e-14);

  const ExperimentConfig s = parse(with(kSmallQuadratic, "case = quadratic", "case = saddle"));
  const CaseSetup sc = make_case(s, 0.1);
  EXPECT_NEAR(sc.game.f(Point{0.0, 0.0}), 2 * 2.0 - 2 * 1.0, 1e-14);
  EXPECT_NEAR(sc.game.g(Point{0.3, 0.4}), 0.09 - 0.16, 1e-14);
}

TEST(MakeCase, CustomCaseOracleOnlyWhenConsistent) {
  const std::string text = with(kSmallQuadratic, "case = quadratic",
                                "case = custom\ncase.f = 8\ncase.g_Q = 1, 0, 0, 1\ncase.g_const = 0.5");
  const CaseSetup consistent = make_case(parse(text), 0.1);
  ASSERT_TRUE(consistent.oracle.has_value());
  EXPECT_NEAR((*consistent.oracle)(Point{0.3, 0.4}), 0.75, 1e-14);
  EXPECT_FALSE(make_case(parse(with(text, "case.f = 8", "case.f = 7")), 0.1).oracle.has_value());
}

TEST(RunCase, WritesOutputsAndReproducesSummary) {
  ExperimentConfig cfg = parse(kSmallQuadratic);
  cfg.output_dir = scratch_dir("a");
  const CaseResult r = run_case(cfg);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_TRUE(r.all_converged());
  for (const ConvergenceRow& row : r.rows) {
    ASSERT_TRUE(row.sup_error.has_value());
    EXPECT_LT(*row.sup_error, 0.05);
    EXPECT_LE(row.residual, 1e-7);
    ASSERT_TRUE(row.mc_gap && row.mc_std_error && row.mean_tau);
    EXPECT_LT(std::abs(*row.mc_gap), 5 * *row.mc_std_error + 0.05);
    EXPECT_NEAR(row.bound_4R2_over_lambda_eps2, 4 * 0.25 / (row.eps * row.eps), 1e-9);
  }
  for (const char* f : {"summary.csv", "values_eps0.2.csv", "values_eps0.1.csv", "slice_x1_eps0.1.csv",
                        "mc_eps0.1.csv", "mc_eps0.1.json"})
    EXPECT_TRUE(fs::exists(cfg.output_dir / f)) << f;
  EXPECT_TRUE(fs::exists(cfg.output_dir / "transcripts"));

  ExperimentConfig again = cfg;
  again.output_dir = scratch_dir("b");
  run_case(again);
  EXPECT_EQ(read_file(cfg.output_dir / "summary.csv"), read_file(again.output_dir / "summary.csv"));

  std::ifstream in(cfg.output_dir / "summary.csv");
  const auto back = read_summary_csv(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].iterations, r.rows[1].iterations);
  EXPECT_NEAR(*back[1].sup_error, *r.rows[1].sup_error, 1e-11 * *r.rows[1].sup_error);
  fs::remove_all(cfg.output_dir);
  fs::remove_all(again.output_dir);
}

TEST(RunCase, NoFilesWhenDisabled) {
  ExperimentConfig cfg = parse(kSmallQuadratic);
  cfg.eps_list = {0.2};
  cfg.mc_playouts = 0;
  cfg.output_dir = scratch_dir("none");
  const CaseResult r = run_case(cfg, {.solve = true, .monte_carlo = false, .write_files = false});
  EXPECT_FALSE(fs::exists(cfg.output_dir));
  EXPECT_FALSE(r.rows[0].mc_gap.has_value());
}

TEST(SummaryCsv, RoundTripAndMissingFields) {
  ConvergenceRow a;
  a.eps = 0.1;
  a.h = 0.025;
  a.sup_error = 0.0123456789012345;
  a.residual = 3e-8;
  a.iterations = 321;
  a.bound_4R2_over_lambda_eps2 = 400;
  a.converged = true;
  std::ostringstream os;
  write_summary_csv(os, {a});
  std::istringstream in(os.str());
  const auto rows = read_summary_csv(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(*rows[0].sup_error, 0.0123456789012, 1e-14);
  EXPECT_FALSE(rows[0].mc_gap.has_value());
  EXPECT_TRUE(rows[0].converged);

  std::istringstream bad("eps,h\n0.1,0.2\n");
  EXPECT_THROW(read_summary_csv(bad), ConfigError);
}

TEST(CompareRuns, FlagsRegressionsAndMismatches) {
  ConvergenceRow a;
  a.eps = 0.1;
  a.sup_error = 0.010;
  a.iterations = 100;
  ConvergenceRow b = a;
  b.sup_error = 0.0105;
  b.iterations = 120;
  const Comparison c = compare_runs({a}, {b});
  EXPECT_EQ(c.regressions, 1);
  EXPECT_NE(c.report.find("REGRESSION"), std::string::npos);
  EXPECT_EQ(compare_runs({a}, {a}).regressions, 0);

  ConvergenceRow other = a;
  other.eps = 0.05;
  EXPECT_THROW(compare_runs({a}, {other}), MismatchedSweep);
  EXPECT_THROW(compare_runs({a}, {a, a}), MismatchedSweep);
}

TEST(FormatEps, ShortestForm) {
  EXPECT_EQ(format_eps(0.2), "0.2");
  EXPECT_EQ(format_eps(0.05), "0.05");
  EXPECT_EQ(format_eps(0.1 + 0.2), "0.3");
}
