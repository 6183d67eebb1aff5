#pragma once

// Closed-form reference solutions.
//
// Radial barrier: on the annulus delta < r < R + delta the concave, radially
// increasing solution of
//
//   lambda u'' + (N-1) Lambda u' / r = -N,   u(delta) = 0,  u'(R + delta) = 0
//
// with k = Lambda (N-1) / lambda and D = Lambda (N-1) + lambda is
//
//   u(r) = -N r^2 / (2D) + a r^(1-k) / (1-k) + b     (k != 1, power branch)
//   u(r) = -N r^2 / (2D) + a log r + b               (k == 1, log branch)
//
// with a = N (R + delta)^(1+k) / D. Quadratic cases u = <Qx, x> solve
// P+(D^2 u) = P+(2Q) exactly.

#include <string>
#include <vector>

#include "pucci_game/basis.hpp"
#include "pucci_game/pucci.hpp"

namespace pucci_game {

enum class RadialBranch { Power, Log };

const char* to_string(RadialBranch b);

struct RadialSolution {
  PucciParams params;
  double delta = 0.0;
  double R = 0.0;
  double a = 0.0;
  double b = 0.0;
  RadialBranch branch = RadialBranch::Power;
  double k = 0.0;      // Lambda (N-1) / lambda
  double D = 0.0;      // Lambda (N-1) + lambda
  double r_min = 0.0;  // evaluation range is [r_min, R + delta]

  double r_max() const { return R + delta; }
};

struct RadialValue {
  double u, u_r, u_rr;
};

/// |lambda - Lambda (N-1)| below this selects the log branch.
inline constexpr double kLogBranchTol = 1e-12;

/// Requires 0 < delta < R, lambda > 0 and 0 <= extension < delta; the
/// solution may then be evaluated down to delta - extension. A requested
/// branch that disagrees with the parameters throws DegenerateBranchMismatch.
RadialSolution radial_coefficients(const PucciParams& params, double delta, double R, double extension = 0.0);
RadialSolution radial_coefficients(const PucciParams& params, double delta, double R, RadialBranch forced,
                                   double extension = 0.0);

/// Throws OutOfRange outside [r_min, R + delta].
RadialValue radial_eval(const RadialSolution& sol, double r);

/// lambda u_rr + (N-1) Lambda u_r / r + N.
double radial_ode_residual(const RadialSolution& sol, double r);

/// |P+(Hessian) + N| with the radial Hessian's eigenvalues u_rr (once) and
/// u_r / r (N-1 times).
double radial_pucci_consistency(const RadialSolution& sol, const PucciParams& params, double r);

/// One evaluation of u(x) >= eps^2/2 + (1/2N) sup sum_i [u(x + eps mu_i v_i) + u(x - eps mu_i v_i)]
/// with u sampled exactly around a centre at the origin.
struct BarrierCheck {
  double lhs;  // u(x)
  double rhs;
  double margin() const { return lhs - rhs; }
};

/// x must satisfy delta <= |x| <= R and eps sqrt(Lambda) <= extension. The
/// radial frame at x is always a candidate basis.
BarrierCheck radial_barrier_check(const RadialSolution& sol, double eps, const Point& x, const SearchConfig& search);

struct QuadraticCase {
  SymMatrix Q;
  double f_const = 0.0;
  PucciParams params;

  double value(const Point& x) const { return Q.quadratic_form(x); }
  SymMatrix hessian() const { return Q.scaled(2.0); }
};

QuadraticCase make_quadratic_case(const PucciParams& params, const SymMatrix& Q);

/// One line of the oracle self-check: `value` must not exceed `limit`.
struct OracleCheck {
  std::string name;
  double value;
  double limit;
  bool pass() const { return value <= limit; }
};

/// Radial cases (N, lambda, Lambda) = (2,1,1), (2,1,2), (2,1,4), (3,1,1),
/// (3,1,2) with delta = 0.5, R = 2: ODE and Pucci residuals at 100 radii,
/// boundary conditions, sign checks, and the barrier inequality at eps =
/// 0.1, 0.05 (reported as the negated worst margin); quadratic cases check
/// f_const against an independent eigenvalue evaluation.
std::vector<OracleCheck> self_check_oracles();

}  // namespace pucci_game
