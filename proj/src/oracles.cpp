#include "pucci_game/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace pucci_game {

const char* to_string(RadialBranch b) { return b == RadialBranch::Log ? "log" : "power"; }

namespace {

RadialSolution build(const PucciParams& params, double delta, double R, std::optional<RadialBranch> forced,
                     double extension) {
  if (!(params.lambda > 0.0)) throw std::invalid_argument("radial barrier needs lambda > 0");
  if (!(delta > 0.0 && delta < R)) throw std::invalid_argument("radial barrier needs 0 < delta < R");
  if (!(extension >= 0.0 && extension < delta)) throw std::invalid_argument("extension must lie in [0, delta)");

  const int n = params.dim;
  RadialSolution s;
  s.params = params;
  s.delta = delta;
  s.R = R;
  s.r_min = delta - extension;
  s.D = params.Lambda * (n - 1) + params.lambda;
  s.k = params.Lambda * (n - 1) / params.lambda;
  const bool log_case = std::abs(params.lambda - params.Lambda * (n - 1)) < kLogBranchTol;
  s.branch = log_case ? RadialBranch::Log : RadialBranch::Power;
  if (forced && *forced != s.branch)
    throw DegenerateBranchMismatch(std::string("requested ") + to_string(*forced) + " branch but parameters select " +
                                   to_string(s.branch));
  if (log_case) s.k = 1.0;

  const double N = n;
  const double outer = R + delta;
  s.a = N * std::pow(outer, 1.0 + s.k) / s.D;
  const double quad = N * delta * delta / (2.0 * s.D);
  s.b = log_case ? quad - s.a * std::log(delta) : quad - s.a * std::pow(delta, 1.0 - s.k) / (1.0 - s.k);
  return s;
}

}  // namespace

RadialSolution radial_coefficients(const PucciParams& params, double delta, double R, double extension) {
  return build(params, delta, R, std::nullopt, extension);
}

RadialSolution radial_coefficients(const PucciParams& params, double delta, double R, RadialBranch forced,
                                   double extension) {
  return build(params, delta, R, forced, extension);
}

RadialValue radial_eval(const RadialSolution& sol, double r) {
  const double slack = 1e-12 * sol.r_max();
  if (!(r >= sol.r_min - slack && r <= sol.r_max() + slack))
    throw OutOfRange("radius " + std::to_string(r) + " outside [" + std::to_string(sol.r_min) + ", " +
                     std::to_string(sol.r_max()) + "]");
  const double N = sol.params.dim;
  const double k = sol.k;
  const double r_mk = std::pow(r, -k);
  RadialValue v;
  if (sol.branch == RadialBranch::Log)
    v.u = -N * r * r / (2.0 * sol.D) + sol.a * std::log(r) + sol.b;
  else
    v.u = -N * r * r / (2.0 * sol.D) + sol.a * r * r_mk / (1.0 - k) + sol.b;
  v.u_r = -N * r / sol.D + sol.a * r_mk;
  v.u_rr = -N / sol.D - sol.a * k * r_mk / r;
  return v;
}

double radial_ode_residual(const RadialSolution& sol, double r) {
  const RadialValue v = radial_eval(sol, r);
  const PucciParams& p = sol.params;
  return p.lambda * v.u_rr + (p.dim - 1) * p.Lambda * v.u_r / r + p.dim;
}

double radial_pucci_consistency(const RadialSolution& sol, const PucciParams& params, double r) {
  if (!(r > 0.0)) throw OutOfRange("radius must be positive");
  const RadialValue v = radial_eval(sol, r);
  std::vector<double> eig(static_cast<size_t>(params.dim), v.u_r / r);
  eig[0] = v.u_rr;
  return std::abs(pucci_plus_from_eigenvalues(params, eig) + params.dim);
}

namespace {

// e_r = x/|x| completed to an orthonormal basis by Gram-Schmidt on the axes.
std::array<Point, kMaxDim> radial_frame(const Point& x) {
  const int n = x.dim();
  std::array<Point, kMaxDim> b{};
  b[0] = (1.0 / norm(x)) * x;
  int filled = 1;
  for (int axis = 0; axis < n && filled < n; ++axis) {
    Point v = Point::unit(n, axis);
    for (int j = 0; j < filled; ++j) v -= dot(v, b[j]) * b[j];
    const double len = norm(v);
    if (len > 1e-8) b[filled++] = (1.0 / len) * v;
  }
  return b;
}

}  // namespace

BarrierCheck radial_barrier_check(const RadialSolution& sol, double eps, const Point& x, const SearchConfig& search) {
  const PucciParams& p = sol.params;
  if (x.dim() != p.dim) throw std::invalid_argument("point dimension differs from the solution's");
  const double r = norm(x);
  if (!(r >= sol.delta && r <= sol.R)) throw OutOfRange("barrier check needs delta <= |x| <= R");
  if (!(eps > 0.0) || eps * p.max_scale() > sol.delta - sol.r_min + 1e-15)
    throw OutOfRange("stencil leaves the extended annulus; raise the extension or lower eps");

  auto u = [&](const Point& y) { return radial_eval(sol, norm(y)).u; };
  const double lo = std::sqrt(p.lambda), hi = std::sqrt(p.Lambda);
  auto score = [&](const Point& v) -> DirectionScore {
    const double s_lo = u(x + eps * lo * v) + u(x - eps * lo * v);
    const double s_hi = u(x + eps * hi * v) + u(x - eps * hi * v);
    return s_hi > s_lo ? DirectionScore{s_hi, true} : DirectionScore{s_lo, false};
  };
  const BasisCandidate frame = candidate_from_basis(p.dim, radial_frame(x));
  const SearchOutcome best = search_bases(p.dim, search, std::span(&frame, 1), score);
  return {u(x), eps * eps / 2.0 + best.value / (2.0 * p.dim)};
}

QuadraticCase make_quadratic_case(const PucciParams& params, const SymMatrix& Q) {
  if (Q.dim() != params.dim) throw std::invalid_argument("matrix dimension differs from the operator's");
  return {Q, pucci_plus(params, Q.scaled(2.0)), params};
}

std::vector<OracleCheck> self_check_oracles() {
  struct Case {
    int n;
    double lambda, Lambda;
  };
  const Case cases[] = {{2, 1.0, 1.0}, {2, 1.0, 2.0}, {2, 1.0, 4.0}, {3, 1.0, 1.0}, {3, 1.0, 2.0}};
  const double delta = 0.5, R = 2.0;
  const double eps_list[] = {0.1, 0.05};
  std::vector<OracleCheck> out;

  for (const Case& c : cases) {
    const PucciParams p(c.lambda, c.Lambda, c.n);
    const RadialSolution sol = radial_coefficients(p, delta, R, eps_list[0] * p.max_scale());
    const std::string tag = "N=" + std::to_string(c.n) + " lambda=" + std::to_string(c.lambda).substr(0, 4) +
                            " Lambda=" + std::to_string(c.Lambda).substr(0, 4) + " (" + to_string(sol.branch) + ")";
    double ode = 0.0, pucci = 0.0, sign = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double r = delta + R * i / 101.0;
      const RadialValue v = radial_eval(sol, r);
      ode = std::max(ode, std::abs(radial_ode_residual(sol, r)) / (1.0 + std::abs(v.u_rr)));
      pucci = std::max(pucci, radial_pucci_consistency(sol, p, r));
      if (!(v.u_r > 0.0 && v.u_rr < 0.0)) sign += 1.0;
    }
    const double bc = std::max(std::abs(radial_eval(sol, delta).u), std::abs(radial_eval(sol, R + delta).u_r));
    out.push_back({"radial ODE residual " + tag, ode, 1e-9});
    out.push_back({"radial Pucci residual " + tag, pucci, 1e-9});
    out.push_back({"radial boundary conditions " + tag, bc, 1e-10});
    out.push_back({"radial sign violations " + tag, sign, 0.0});

    const SearchConfig search = c.n == 2 ? SearchConfig::hybrid() : SearchConfig::eigenbasis_only();
    for (double eps : eps_list) {
      double worst = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < 24; ++i) {
        const double r = delta + (R - delta) * i / 23.0;
        const double t = 0.37 + 0.91 * i;
        Point x(c.n);
        x[0] = r * std::cos(t);
        x[1] = r * std::sin(t);
        if (c.n == 3) {
          x[0] *= 0.8;
          x[1] *= 0.8;
          x[2] = 0.6 * r;
        }
        worst = std::max(worst, -radial_barrier_check(sol, eps, x, search).margin());
      }
      out.push_back({"barrier deficit eps=" + std::to_string(eps).substr(0, 4) + " " + tag, worst, 0.0});
    }
  }

  const PucciParams p(1.0, 2.0, 2);
  const SymMatrix qs[] = {SymMatrix::identity(2), SymMatrix::diagonal({1.0, -1.0}), SymMatrix(2),
                          SymMatrix(2, {0.3, 0.7, 0.7, -0.2})};
  for (const SymMatrix& q : qs) {
    const QuadraticCase qc = make_quadratic_case(p, q);
    double expect = 0.0;
    for (double ev : eigenvalues_sym(q.scaled(2.0))) expect += ev > 0.0 ? p.Lambda * ev : p.lambda * ev;
    out.push_back({"quadratic f_const", std::abs(qc.f_const - expect), 1e-12});
  }
  return out;
}

}  // namespace pucci_game
