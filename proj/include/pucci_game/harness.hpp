#pragma once

// Experiment driver: flat key = value configs, eps sweeps of the grid solver
// with Monte Carlo checks, summary tables and plot-ready slices.
//
// Config keys (dotted sections, '#' starts a comment):
//
//   case              quadratic | saddle | radial_annulus | degenerate | custom
//   case.Q            row-major matrix for quadratic / degenerate (default I)
//   case.f            constant running payoff (custom)
//   case.g_const      constant part of g (custom, default 0)
//   case.g_Q          g = <g_Q x, x> + g_const (custom, default 0)
//   domain.kind       ball | annulus | box
//   domain.center     ball / annulus centre (default origin)
//   domain.radius     ball
//   domain.r_inner, domain.r_outer    annulus
//   domain.lo, domain.hi              box
//   params.lambda, params.Lambda, params.dim
//   eps_list          strictly decreasing, e.g. 0.2, 0.1, 0.05
//   h.rule            quadratic (h = c eps^2) | linear (h = c eps) | list
//   h.factor          c; quadratic default (min_scale / 2) / eps_max,
//                     linear default min_scale / 4
//   h.list            one h per eps
//   search.mode       hybrid | eigen | grid;  search.step, search.refine_iters
//   tol, max_iter
//   mc.n_playouts     0 disables Monte Carlo
//   mc.seed, mc.x0 (points separated by ';'), mc.strategy
//                     (greedy | fixed_small | fixed_large), mc.transcripts
//   output_dir

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pucci_game/basis.hpp"
#include "pucci_game/dpp_solver.hpp"
#include "pucci_game/geometry.hpp"
#include "pucci_game/pucci.hpp"

namespace pucci_game {

/// Parses `key = value` lines; throws ConfigError on malformed lines or
/// repeated keys.
std::map<std::string, std::string> parse_key_values(std::istream& in);

enum class CaseKind { Quadratic, Saddle, RadialAnnulus, Degenerate, Custom };
enum class HRule { Quadratic, Linear, List };
enum class McStrategy { Greedy, FixedSmall, FixedLarge };

const char* to_string(CaseKind k);

struct ExperimentConfig {
  CaseKind kind = CaseKind::Quadratic;
  SymMatrix Q;          // quadratic / degenerate solution matrix
  double f_const = 0.0;  // custom
  double g_const = 0.0;  // custom
  SymMatrix g_Q;         // custom
  Domain domain = Domain::ball(Point{0.0, 0.0}, 1.0);
  PucciParams params;
  std::vector<double> eps_list;
  HRule h_rule = HRule::Quadratic;
  std::optional<double> h_factor;
  std::vector<double> h_list;
  SearchConfig search;
  double tol = kDefaultTol;
  int max_iter = 0;
  long mc_playouts = 0;
  std::uint64_t mc_seed = 1;
  std::vector<Point> mc_x0;
  McStrategy mc_strategy = McStrategy::Greedy;
  int mc_transcripts = 0;
  std::filesystem::path output_dir = "out";

  /// Throws ConfigError unless eps_list is positive and strictly decreasing,
  /// every h satisfies h <= eps * min_scale / 2, and the case fits the domain
  /// and parameters.
  void validate() const;
  double h_for(size_t eps_index) const;
};

ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Game for one eps, with the exact solution when the case has one.
struct CaseSetup {
  GameConfig game;
  std::optional<ScalarField> oracle;
};

CaseSetup make_case(const ExperimentConfig& cfg, double eps);

/// One sweep row. Optional fields are empty when not applicable.
struct ConvergenceRow {
  double eps = 0.0;
  double h = 0.0;
  std::optional<double> sup_error;
  double residual = 0.0;
  int iterations = 0;
  std::optional<double> mc_gap;  // MC mean - DPP value at the first x0
  std::optional<double> mean_tau;
  double bound_4R2_over_lambda_eps2 = 0.0;
  bool converged = false;
  std::optional<double> mc_std_error;
  std::optional<double> eps2_mean_tau;
};

struct CaseResult {
  std::vector<ConvergenceRow> rows;
  std::vector<std::shared_ptr<const ValueFunction>> values;  // one per row
  bool all_converged() const;
};

struct RunOptions {
  bool solve = true;
  bool monte_carlo = true;
  bool write_files = true;
};

/// Runs the sweep. Per eps: solve (recording NotConverged in the row and
/// continuing), compare with the oracle, play Monte Carlo from every x0, and
/// write values_eps<e>.csv, slice_x<axis>_eps<e>.csv and mc_eps<e>.csv.
/// summary.csv is written once at the end.
CaseResult run_case(const ExperimentConfig& cfg, const RunOptions& opts = {});

void write_summary_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
std::vector<ConvergenceRow> read_summary_csv(std::istream& in);

/// Side-by-side table of two sweeps. Throws MismatchedSweep unless the eps
/// lists agree. `regressions` counts quantities that grew by more than 10%.
struct Comparison {
  std::string report;
  int regressions = 0;
};
Comparison compare_runs(const std::vector<ConvergenceRow>& a, const std::vector<ConvergenceRow>& b);

/// Shortest decimal form used in file names.
std::string format_eps(double eps);

}  // namespace pucci_game
