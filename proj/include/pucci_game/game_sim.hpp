#pragma once

// Monte Carlo play of the single-player game: at each step the player picks
// an orthonormal basis and per-direction scales, then one of the 2N moves
// x -> x +- eps mu_i v_i is drawn uniformly. The game ends when the token
// leaves the domain; the payoff is g(x_tau) - eps^2/(2N) sum_{k<tau} f(x_k).

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pucci_game/basis.hpp"
#include "pucci_game/dpp_solver.hpp"

namespace pucci_game {

/// Feedback strategy: the basis depends on the current position only.
struct Strategy {
  std::string name;
  std::function<BasisChoice(const Point&)> rule;

  BasisChoice operator()(const Point& x) const { return rule(x); }
};

/// Plays best_response against vf at the token's actual position.
Strategy greedy_from_value(std::shared_ptr<const ValueFunction> vf, const GameConfig& cfg, const SearchConfig& search);
Strategy fixed_basis(const BasisChoice& choice);
Strategy custom_strategy(std::string name, std::function<BasisChoice(const Point&)> rule);

/// Per-playout generator. Stream `index` of a master seed is seeded with a
/// SplitMix64 hash of (seed, index), so playouts do not depend on order.
using Rng = std::mt19937_64;
std::uint64_t playout_seed(std::uint64_t master_seed, std::uint64_t index);

struct Outcome {
  int index = 0;  // direction, 0-based
  int sign = 1;   // +1 or -1
};

/// Draws one of the 2N equiprobable moves.
std::pair<Point, Outcome> step(const Point& x, const BasisChoice& choice, double eps, Rng& rng);

struct Transcript {
  std::vector<Point> positions;  // x_0 .. x_tau
  std::vector<BasisChoice> choices;
  std::vector<Outcome> outcomes;
  std::vector<double> f_values;  // f(x_k), k < tau
  long tau = 0;
  double running_cost = 0.0;  // eps^2/(2N) sum f(x_k)
  double final_payoff = 0.0;  // g(x_tau)
  double payoff = 0.0;        // final_payoff - running_cost
  std::uint64_t rng_seed = 0;
};

/// 100 * ceil(4 R^2 / (lambda eps^2)), R the domain's bounding radius and
/// lambda replaced by Lambda in the degenerate game.
long default_max_steps(const GameConfig& cfg);

/// Plays one game from x0 (which must lie in the domain). Throws
/// MaxStepsExceeded if the token is still inside after max_steps moves.
Transcript play(const GameConfig& cfg, const Strategy& strategy, const Point& x0, std::uint64_t rng_seed,
                long max_steps = 0);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_playouts = 0;
  double mean_tau = 0.0;
  double tau_std_error = 0.0;
};

/// Playout i uses playout_seed(seed, i). The observer, if any, sees every
/// transcript in order before it is discarded.
McEstimate estimate_value(const GameConfig& cfg, const Strategy& strategy, const Point& x0, long n,
                          std::uint64_t seed, long max_steps = 0,
                          const std::function<void(const Transcript&)>& observer = {});

struct ExitTimeCheck {
  bool holds = false;
  double bound = 0.0;   // 4 R^2 / (lambda eps^2)
  double margin = 0.0;  // bound + 3 SE - mean_tau
};

ExitTimeCheck exit_time_bound_check(const GameConfig& cfg, const McEstimate& est, double R);

/// Per-step statistics of the squared distance from x0.
struct MartingaleStep {
  long step = 0;
  long count = 0;             // transcripts still running at this step
  double mean_increment = 0.0;  // |x_{k+1}-x0|^2 - |x_k-x0|^2
  double mean_exact = 0.0;      // eps^2/N sum_i mu_i^2 for the recorded choices
  double std_error = 0.0;       // of increment - exact
  double z = 0.0;
};

struct MartingaleReport {
  std::vector<MartingaleStep> steps;
  long min_count = 0;  // steps with fewer samples are reported but not tested
  double max_abs_deviation = 0.0;
  double max_abs_z = 0.0;
  double pooled_z = 0.0;
  long increments = 0;
  long lower_bound_violations = 0;  // choices with sum mu_i^2 < N lambda

  /// Every tested step and the pooled statistic within z_limit, no violations.
  bool passes(double z_limit = 4.0) const;
};

/// Streaming form of martingale_diagnostic for runs too large to keep.
class MartingaleAccumulator {
 public:
  MartingaleAccumulator(const Point& x0, const PucciParams& params, double eps);
  /// Throws MismatchedStart if the transcript does not start at x0.
  void add(const Transcript& t);
  MartingaleReport report(long min_count = 1000) const;

 private:
  struct Sums {
    long n = 0;
    double inc = 0.0, exact = 0.0, dev = 0.0, dev2 = 0.0;
  };
  Point x0_;
  PucciParams params_;
  double eps_;
  std::vector<Sums> per_step_;
  Sums pooled_;
  long violations_ = 0;
};

MartingaleReport martingale_diagnostic(std::span<const Transcript> transcripts, const Point& x0,
                                       const PucciParams& params, double eps, long min_count = 1000);

/// Rows k,x1..xN,mu_applied,sign,dir_index,f_at_x; the exit row leaves the
/// move columns empty. dir_index is 1-based.
void write_transcript_csv(std::ostream& os, const Transcript& t);

/// Flat JSON object with mean, std_error, n_playouts, mean_tau, tau_std_error, seed.
void write_estimate_summary(std::ostream& os, const McEstimate& est, std::uint64_t seed);

}  // namespace pucci_game
