#pragma once

// Grid solver for the game value: fixed-point iteration of the dynamic
// programming principle
//
//   u(x) = -eps^2 f(x) / (2N) + (1/2N) sup_{v, mu} sum_i u(x + eps mu_i v_i) + u(x - eps mu_i v_i)
//
// in the domain, u = g outside. Off-grid stencil points are read through
// multilinear interpolation, so the discrete map stays monotone.

#include <chrono>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "pucci_game/basis.hpp"
#include "pucci_game/geometry.hpp"
#include "pucci_game/pucci.hpp"

namespace pucci_game {

struct GameConfig {
  PucciParams params;
  double eps;
  ScalarField f;  // running payoff, charged eps^2 f / (2N) per move
  ScalarField g;  // final payoff outside the domain
  Domain domain;

  int dim() const { return params.dim; }
};

/// Uniform Cartesian lattice; nodes are lo + k*h along each axis.
struct Lattice {
  int dim = 0;
  Point lo;
  double h = 0.0;
  std::array<int, kMaxDim> counts{};
  std::array<size_t, kMaxDim> strides{};
  size_t size = 0;

  Point node(size_t index) const;
  bool covers(const Point& x) const;
  Point upper() const;
};

struct ValueFunction {
  Lattice grid;
  double eps = 0.0;
  std::vector<double> values;
  std::vector<Region> labels;
  std::vector<size_t> interior;  // indices of interior nodes, ascending

  /// Per-interior-node candidate bases learned by the solver (Hessian
  /// eigenbasis and last winner, kFrozenPerNode each, in interior order).
  /// When present, node updates search axis + these + the rotation grid
  /// instead of re-deriving candidates from the iterate, which makes the
  /// sweep a fixed monotone map.
  static constexpr int kFrozenPerNode = 2;
  std::vector<BasisCandidate> frozen_candidates;
  bool frozen() const { return !frozen_candidates.empty(); }
};

struct DPPReport {
  int iterations = 0;
  std::vector<double> residual_history;  // sup-norm change per sweep
  double final_residual = 0.0;
  double tol = 0.0;
  bool converged = false;
  int frozen_at = -1;      // sweep after which node candidates were frozen, -1 if never
  double wall_time = 0.0;  // seconds
};

class NotConverged : public Error {
 public:
  NotConverged(DPPReport report, std::shared_ptr<const ValueFunction> last);
  const DPPReport& report() const { return report_; }
  /// Iterate reached when max_iter ran out.
  const ValueFunction& last_iterate() const { return *last_; }

 private:
  DPPReport report_;
  std::shared_ptr<const ValueFunction> last_;
};

/// Lattice over the domain's bounding box inflated by the strip width;
/// interior nodes start at 0, every other node holds g. Throws GridTooCoarse
/// unless h <= eps * min_scale / 2.
ValueFunction build_value_function(const GameConfig& cfg, double h);

/// g(x) outside the domain, multilinear interpolation of node values inside.
double interpolate(const ValueFunction& vf, const GameConfig& cfg, const Point& x);

/// Central finite-difference Hessian of the interpolated value at x.
SymMatrix finite_difference_hessian(const ValueFunction& vf, const GameConfig& cfg, const Point& x, double step);

/// Best basis and scales at x against vf, and the attained
/// S(x) = sum_i [u(x + eps mu_i v_i) + u(x - eps mu_i v_i)].
std::pair<BasisChoice, double> best_response(const ValueFunction& vf, const GameConfig& cfg, const Point& x,
                                             const SearchConfig& search);

/// One Jacobi sweep of the DPP map.
ValueFunction dpp_apply(const ValueFunction& vf, const GameConfig& cfg, const SearchConfig& search);

/// sup over interior nodes of |vf - dpp_apply(vf)|.
double residual(const ValueFunction& vf, const GameConfig& cfg, const SearchConfig& search);

inline constexpr double kDefaultTol = 1e-9;
inline constexpr int kFreezePatience = 20;

/// 50 * ceil(4 R^2 / (lambda eps^2)), with lambda replaced by Lambda in the
/// degenerate game.
int default_max_iter(const GameConfig& cfg);

/// Iterates dpp_apply from zero until the sup change is <= tol. Throws
/// NotConverged when max_iter sweeps are not enough. max_iter <= 0 selects
/// default_max_iter.
///
/// Outside AngleGrid mode the candidate bases depend on the iterate, so the
/// first sweeps re-derive them every time; once the sweep change has not
/// reached a new minimum for kFreezePatience sweeps (or the tolerance is met)
/// each node's candidates are frozen and iteration continues on the fixed map.
std::pair<ValueFunction, DPPReport> solve_dpp(const GameConfig& cfg, double h, const SearchConfig& search,
                                              double tol = kDefaultTol, int max_iter = 0);

/// Degenerate game (lambda = 0): each direction either moves by
/// eps*sqrt(Lambda) or stays put. Requires f > 0 at every interior node
/// (NonPositiveRunningPayoff otherwise).
std::pair<ValueFunction, DPPReport> solve_dpp_degenerate(const GameConfig& cfg, double h, const SearchConfig& search,
                                                         double tol = kDefaultTol, int max_iter = 0);

struct ConsistencyResult {
  double discrete_value;
  double exact_value;
};

/// Compares (1/eps^2) sup sum_i [phi(x+eps mu_i v_i) + phi(x-eps mu_i v_i) - 2 phi(x)],
/// with phi sampled exactly, against the Pucci operator of the exact Hessian.
ConsistencyResult consistency_check(const ScalarField& phi, const std::function<SymMatrix(const Point&)>& d2phi,
                                    const Point& x, const GameConfig& cfg, const SearchConfig& search);

/// "# dim,h,eps,lambda,Lambda" header, a values line, then
/// x1..xN,value,label rows for interior and strip nodes.
void write_value_function_csv(std::ostream& os, const ValueFunction& vf, const GameConfig& cfg);

}  // namespace pucci_game
