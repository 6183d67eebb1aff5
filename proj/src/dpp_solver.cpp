#include "pucci_game/dpp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

namespace pucci_game {

NotConverged::NotConverged(DPPReport report, std::shared_ptr<const ValueFunction> last)
    : Error("DPP iteration stopped after " + std::to_string(report.iterations) + " sweeps with residual " +
            std::to_string(report.final_residual) + " > tol " + std::to_string(report.tol)),
      report_(std::move(report)),
      last_(std::move(last)) {}

Point Lattice::node(size_t index) const {
  Point p(dim);
  for (int d = dim - 1; d >= 0; --d) {
    const size_t k = index / strides[d];
    index -= k * strides[d];
    p[d] = lo[d] + static_cast<double>(k) * h;
  }
  return p;
}

Point Lattice::upper() const {
  Point p(dim);
  for (int d = 0; d < dim; ++d) p[d] = lo[d] + static_cast<double>(counts[d] - 1) * h;
  return p;
}

bool Lattice::covers(const Point& x) const {
  if (x.dim() != dim) return false;
  for (int d = 0; d < dim; ++d) {
    const double top = lo[d] + static_cast<double>(counts[d] - 1) * h;
    if (!(x[d] >= lo[d] && x[d] <= top)) return false;
  }
  return true;
}

namespace {

// Multilinear interpolation of node values; x must lie in the lattice box.
double interpolate_nodes(const ValueFunction& vf, const Point& x) {
  const Lattice& L = vf.grid;
  const int n = L.dim;
  std::array<double, kMaxDim> t{};
  size_t base = 0;
  for (int d = 0; d < n; ++d) {
    const double s = (x[d] - L.lo[d]) / L.h;
    int k = static_cast<int>(std::floor(s));
    k = std::clamp(k, 0, L.counts[d] - 2);
    t[d] = std::clamp(s - k, 0.0, 1.0);
    base += static_cast<size_t>(k) * L.strides[d];
  }
  double acc = 0.0;
  const int corners = 1 << n;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    size_t idx = base;
    for (int d = 0; d < n; ++d) {
      if (c & (1 << d)) {
        w *= t[d];
        idx += L.strides[d];
      } else {
        w *= 1.0 - t[d];
      }
    }
    if (w != 0.0) acc += w * vf.values[idx];
  }
  return acc;
}

template <class Eval>
SymMatrix fd_hessian(int n, const Point& x, double step, Eval&& u) {
  SymMatrix hess(n);
  const double u0 = u(x);
  const double inv_h2 = 1.0 / (step * step);
  for (int i = 0; i < n; ++i) {
    const Point ei = step * Point::unit(n, i);
    hess.set(i, i, (u(x + ei) - 2.0 * u0 + u(x - ei)) * inv_h2);
    for (int j = i + 1; j < n; ++j) {
      const Point ej = step * Point::unit(n, j);
      const double v = u(x + ei + ej) - u(x + ei - ej) - u(x - ei + ej) + u(x - ei - ej);
      hess.set(i, j, 0.25 * v * inv_h2);
    }
  }
  return hess;
}

// Search over bases with per-direction scale selection. `u` evaluates the
// value at arbitrary points; `u_at_x` is u(x), used for zero scales (the
// degenerate game's "stay").
template <class Eval>
SearchOutcome search_at(const PucciParams& params, double eps, const Point& x, double u_at_x,
                        const SearchConfig& search, std::span<const BasisCandidate> extra, Eval&& u) {
  const double mu_lo = std::sqrt(params.lambda);
  const double mu_hi = std::sqrt(params.Lambda);
  const bool single_scale = params.lambda == params.Lambda;
  auto pair = [&](const Point& v, double mu) {
    if (mu == 0.0) return 2.0 * u_at_x;
    const Point d = (eps * mu) * v;
    return u(x + d) + u(x - d);
  };
  auto score = [&](const Point& v) -> DirectionScore {
    const double lo = pair(v, mu_lo);
    if (single_scale) return {lo, false};
    const double hi = pair(v, mu_hi);
    return hi > lo ? DirectionScore{hi, true} : DirectionScore{lo, false};
  };
  return search_bases(params.dim, search, extra, score);
}

BasisChoice to_choice(const PucciParams& params, const SearchOutcome& out) {
  BasisChoice c;
  c.dim = params.dim;
  for (int i = 0; i < c.dim; ++i) {
    c.directions[i] = out.directions[i];
    c.scale_sq[i] = out.large[i] ? params.Lambda : params.lambda;
  }
  return c;
}

bool uses_hessian_hint(const SearchConfig& search, int dim) {
  return search.mode != SearchMode::AngleGrid && dim > 1;
}

template <class Eval>
BasisCandidate hessian_candidate(int dim, const Point& x, double step, Eval&& u) {
  const EigenDecomposition eig = eigen_sym(fd_hessian(dim, x, step, u));
  std::array<Point, kMaxDim> dirs{};
  for (int i = 0; i < dim; ++i) dirs[i] = eig.vectors[i];
  return candidate_from_basis(dim, dirs);
}

// Fixed-map variant of a search config: the rotation grid stays, the
// iterate-dependent golden refinement goes.
SearchConfig frozen_config(const SearchConfig& search) {
  SearchConfig s = search;
  if (s.mode == SearchMode::Hybrid) s.mode = SearchMode::AngleGrid;
  return s;
}

struct NodeResult {
  double value;
  BasisCandidate hint;
  BasisCandidate winner;
};

// DPP update at interior node number k (position in vf.interior).
NodeResult node_update(const ValueFunction& vf, const GameConfig& cfg, const SearchConfig& search, size_t k,
                       double f_value) {
  const size_t node = vf.interior[k];
  const Point x = vf.grid.node(node);
  auto u = [&](const Point& y) { return interpolate(vf, cfg, y); };
  NodeResult r{};
  SearchOutcome best;
  if (vf.frozen()) {
    const std::span<const BasisCandidate> extra(vf.frozen_candidates.data() + k * ValueFunction::kFrozenPerNode,
                                                ValueFunction::kFrozenPerNode);
    best = search_at(cfg.params, cfg.eps, x, vf.values[node], frozen_config(search), extra, u);
  } else if (uses_hessian_hint(search, cfg.dim())) {
    r.hint = hessian_candidate(cfg.dim(), x, vf.grid.h, u);
    best = search_at(cfg.params, cfg.eps, x, vf.values[node], search, std::span(&r.hint, 1), u);
  } else {
    best = search_at(cfg.params, cfg.eps, x, vf.values[node], search, {}, u);
  }
  r.winner = BasisCandidate{best.angles, best.directions};
  if (!uses_hessian_hint(search, cfg.dim())) r.hint = r.winner;
  const double two_n = 2.0 * cfg.dim();
  r.value = (-cfg.eps * cfg.eps * f_value + best.value) / two_n;
  return r;
}

// One Jacobi sweep from `in` into `out`; returns the sup-norm change. When
// `learned` is given it receives each node's hint and winner.
double sweep(const ValueFunction& in, ValueFunction& out, const GameConfig& cfg, const SearchConfig& search,
             const std::vector<double>& f_interior, std::vector<BasisCandidate>* learned) {
  double change = 0.0;
  for (size_t k = 0; k < in.interior.size(); ++k) {
    const size_t node = in.interior[k];
    const NodeResult r = node_update(in, cfg, search, k, f_interior[k]);
    change = std::max(change, std::abs(r.value - in.values[node]));
    out.values[node] = r.value;
    if (learned != nullptr) {
      (*learned)[k * ValueFunction::kFrozenPerNode] = r.hint;
      (*learned)[k * ValueFunction::kFrozenPerNode + 1] = r.winner;
    }
  }
  return change;
}

std::vector<double> sample_f(const ValueFunction& vf, const GameConfig& cfg) {
  std::vector<double> f(vf.interior.size());
  for (size_t k = 0; k < vf.interior.size(); ++k) f[k] = cfg.f(vf.grid.node(vf.interior[k]));
  return f;
}

void check_config(const GameConfig& cfg) {
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (cfg.domain.dim() != cfg.dim()) throw std::invalid_argument("domain and operator dimensions differ");
  if (!cfg.f || !cfg.g) throw std::invalid_argument("running and final payoffs must be set");
}

std::pair<ValueFunction, DPPReport> iterate(const GameConfig& cfg, double h, const SearchConfig& search, double tol,
                                            int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  search.validate(cfg.dim());
  const auto start = std::chrono::steady_clock::now();
  ValueFunction current = build_value_function(cfg, h);
  ValueFunction next = current;
  const std::vector<double> f = sample_f(current, cfg);
  if (max_iter <= 0) max_iter = default_max_iter(cfg);

  const bool adaptive = uses_hessian_hint(search, cfg.dim());
  std::vector<BasisCandidate> learned;
  if (adaptive) learned.resize(current.interior.size() * ValueFunction::kFrozenPerNode);
  double best_change = std::numeric_limits<double>::infinity();
  int since_best = 0;

  DPPReport report;
  report.tol = tol;
  for (int it = 0; it < max_iter; ++it) {
    const bool learning = adaptive && !current.frozen();
    const double change = sweep(current, next, cfg, search, f, learning ? &learned : nullptr);
    std::swap(current.values, next.values);
    report.iterations = it + 1;
    report.residual_history.push_back(change);
    report.final_residual = change;

    if (learning) {
      if (change < best_change) {
        best_change = change;
        since_best = 0;
      } else {
        ++since_best;
      }
      if (since_best >= kFreezePatience || change <= tol) {
        current.frozen_candidates = learned;
        next.frozen_candidates = std::move(learned);
        report.frozen_at = it + 1;
        // The last sweep ran on the adaptive map; confirm on the fixed one.
        continue;
      }
    }
    if (change <= tol) {
      report.converged = true;
      break;
    }
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!report.converged)
    throw NotConverged(report, std::make_shared<const ValueFunction>(std::move(current)));
  return {std::move(current), std::move(report)};
}

}  // namespace

ValueFunction build_value_function(const GameConfig& cfg, double h) {
  check_config(cfg);
  const double h_max = cfg.eps * cfg.params.min_scale() / 2.0;
  if (!(h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (h > h_max * (1.0 + 1e-12))
    throw GridTooCoarse("h = " + std::to_string(h) + " exceeds eps*sqrt(lambda)/2 = " + std::to_string(h_max));

  const int n = cfg.dim();
  const double alpha = strip_width(cfg.params, cfg.eps);
  Point lo, hi;
  cfg.domain.bounding_box(lo, hi);

  ValueFunction vf;
  vf.eps = cfg.eps;
  Lattice& L = vf.grid;
  L.dim = n;
  L.h = h;
  L.lo = lo - Point::filled(n, alpha);
  size_t stride = 1;
  for (int d = 0; d < n; ++d) {
    const double extent = (hi[d] + alpha) - L.lo[d];
    L.counts[d] = static_cast<int>(std::ceil(extent / h - 1e-9)) + 1;
    L.strides[d] = stride;
    stride *= static_cast<size_t>(L.counts[d]);
  }
  L.size = stride;

  vf.values.assign(L.size, 0.0);
  vf.labels.resize(L.size);
  for (size_t i = 0; i < L.size; ++i) {
    const Point x = L.node(i);
    vf.labels[i] = classify(cfg.domain, cfg.params, cfg.eps, x);
    if (vf.labels[i] == Region::Interior)
      vf.interior.push_back(i);
    else
      vf.values[i] = cfg.g(x);
  }
  return vf;
}

double interpolate(const ValueFunction& vf, const GameConfig& cfg, const Point& x) {
  if (!cfg.domain.contains(x)) return cfg.g(x);
  if (!vf.grid.covers(x)) throw OutOfLattice("point outside the lattice box");
  return interpolate_nodes(vf, x);
}

SymMatrix finite_difference_hessian(const ValueFunction& vf, const GameConfig& cfg, const Point& x, double step) {
  return fd_hessian(cfg.dim(), x, step, [&](const Point& y) { return interpolate(vf, cfg, y); });
}

std::pair<BasisChoice, double> best_response(const ValueFunction& vf, const GameConfig& cfg, const Point& x,
                                             const SearchConfig& search) {
  if (!cfg.domain.contains(x)) throw std::invalid_argument("best_response needs an interior point");
  search.validate(cfg.dim());
  auto u = [&](const Point& y) { return interpolate(vf, cfg, y); };
  BasisCandidate hint;
  const bool want_hint = uses_hessian_hint(search, cfg.dim());
  if (want_hint) hint = hessian_candidate(cfg.dim(), x, vf.grid.h, u);
  const SearchOutcome best =
      search_at(cfg.params, cfg.eps, x, u(x), search, std::span(&hint, want_hint ? 1 : 0), u);
  return {to_choice(cfg.params, best), best.value};
}

ValueFunction dpp_apply(const ValueFunction& vf, const GameConfig& cfg, const SearchConfig& search) {
  search.validate(cfg.dim());
  ValueFunction out = vf;
  sweep(vf, out, cfg, search, sample_f(vf, cfg), nullptr);
  return out;
}

double residual(const ValueFunction& vf, const GameConfig& cfg, const SearchConfig& search) {
  const ValueFunction next = dpp_apply(vf, cfg, search);
  double r = 0.0;
  for (size_t node : vf.interior) r = std::max(r, std::abs(next.values[node] - vf.values[node]));
  return r;
}

int default_max_iter(const GameConfig& cfg) {
  const double R = cfg.domain.bounding_radius();
  const double lam = cfg.params.min_scale() * cfg.params.min_scale();
  return 50 * static_cast<int>(std::ceil(4.0 * R * R / (lam * cfg.eps * cfg.eps)));
}

std::pair<ValueFunction, DPPReport> solve_dpp(const GameConfig& cfg, double h, const SearchConfig& search, double tol,
                                              int max_iter) {
  check_config(cfg);
  if (cfg.params.degenerate()) throw std::invalid_argument("lambda = 0 needs solve_dpp_degenerate");
  return iterate(cfg, h, search, tol, max_iter);
}

std::pair<ValueFunction, DPPReport> solve_dpp_degenerate(const GameConfig& cfg, double h, const SearchConfig& search,
                                                         double tol, int max_iter) {
  check_config(cfg);
  if (!cfg.params.degenerate()) throw std::invalid_argument("degenerate solver needs lambda = 0");
  // Checked on the lattice the solver will use.
  const ValueFunction probe = build_value_function(cfg, h);
  for (size_t node : probe.interior) {
    const double fv = cfg.f(probe.grid.node(node));
    if (!(fv > 0.0))
      throw NonPositiveRunningPayoff("running payoff " + std::to_string(fv) + " <= 0 at an interior node");
  }
  // With lambda = 0 the small scale is a zero step, i.e. the "stay" option;
  // its contribution 2 u(x) is read from the previous iterate.
  return iterate(cfg, h, search, tol, max_iter);
}

ConsistencyResult consistency_check(const ScalarField& phi, const std::function<SymMatrix(const Point&)>& d2phi,
                                    const Point& x, const GameConfig& cfg, const SearchConfig& search) {
  check_config(cfg);
  search.validate(cfg.dim());
  if (!cfg.domain.contains(x) || !(cfg.domain.boundary_distance(x) > strip_width(cfg.params, cfg.eps)))
    throw std::invalid_argument("consistency check needs dist(x, boundary) > eps*sqrt(Lambda)");
  const SymMatrix hess = d2phi(x);
  const double phi_x = phi(x);
  BasisCandidate hint;
  const bool want_hint = uses_hessian_hint(search, cfg.dim());
  if (want_hint) {
    const EigenDecomposition eig = eigen_sym(hess);
    std::array<Point, kMaxDim> dirs{};
    for (int i = 0; i < cfg.dim(); ++i) dirs[i] = eig.vectors[i];
    hint = candidate_from_basis(cfg.dim(), dirs);
  }
  const SearchOutcome best =
      search_at(cfg.params, cfg.eps, x, phi_x, search, std::span(&hint, want_hint ? 1 : 0), phi);
  const double centred = best.value - 2.0 * cfg.dim() * phi_x;
  return {centred / (cfg.eps * cfg.eps), pucci_plus(cfg.params, hess)};
}

void write_value_function_csv(std::ostream& os, const ValueFunction& vf, const GameConfig& cfg) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  os << "# dim,h,eps,lambda,Lambda\n";
  os << "# " << vf.grid.dim << ',' << vf.grid.h << ',' << vf.eps << ',' << cfg.params.lambda << ','
     << cfg.params.Lambda << '\n';
  for (size_t i = 0; i < vf.grid.size; ++i) {
    if (vf.labels[i] == Region::FarExterior) continue;
    const Point x = vf.grid.node(i);
    for (int d = 0; d < x.dim(); ++d) os << x[d] << ',';
    os << vf.values[i] << ',' << to_string(vf.labels[i]) << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace pucci_game
