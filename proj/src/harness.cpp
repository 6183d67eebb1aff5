#include "pucci_game/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "pucci_game/game_sim.hpp"

namespace pucci_game {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const std::string t = trim(text);
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end || t.empty()) throw ConfigError(key + ": not a number: '" + text + "'");
  return v;
}

long parse_long(const std::string& key, const std::string& text) {
  long v = 0;
  const std::string t = trim(text);
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (ec != std::errc() || ptr != end || t.empty()) throw ConfigError(key + ": not an integer: '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_double(key, item));
  return out;
}

Point parse_point(const std::string& key, const std::string& text, int dim) {
  const std::vector<double> v = parse_list(key, text);
  if (static_cast<int>(v.size()) != dim)
    throw ConfigError(key + ": expected " + std::to_string(dim) + " coordinates");
  Point p(dim);
  for (int i = 0; i < dim; ++i) p[i] = v[i];
  return p;
}

SymMatrix parse_matrix(const std::string& key, const std::string& text, int dim) {
  const std::vector<double> v = parse_list(key, text);
  if (static_cast<int>(v.size()) != dim * dim)
    throw ConfigError(key + ": expected " + std::to_string(dim * dim) + " row-major entries");
  try {
    return SymMatrix(dim, v);
  } catch (const NonSymmetric& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

// Reads keys from the map, remembering which ones were used.
class Keys {
 public:
  explicit Keys(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

  std::optional<std::string> get(const std::string& key) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    used_.push_back(key);
    return it->second;
  }
  std::string require(const std::string& key) {
    auto v = get(key);
    if (!v) throw ConfigError("missing key '" + key + "'");
    return *v;
  }
  void reject_unused() const {
    for (const auto& [key, value] : kv_)
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) throw ConfigError("unknown key '" + key + "'");
  }

 private:
  std::map<std::string, std::string> kv_;
  std::vector<std::string> used_;
};

Point domain_center(const Domain& d) {
  return std::visit(
      [](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball> || std::is_same_v<T, Annulus>) {
          return s.center;
        } else if constexpr (std::is_same_v<T, Box>) {
          return 0.5 * (s.lo + s.hi);
        } else {
          return Point(s.dim);
        }
      },
      d.shape());
}

Point default_start(const Domain& d) {
  Point c = domain_center(d);
  if (const auto* a = std::get_if<Annulus>(&d.shape())) c[0] += 0.5 * (a->r_inner + a->r_outer);
  return c;
}

double min_scale_sq(const PucciParams& p) { return p.min_scale() * p.min_scale(); }

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second)
      throw ConfigError("line " + std::to_string(number) + ": repeated key '" + key + "'");
  }
  return out;
}

const char* to_string(CaseKind k) {
  switch (k) {
    case CaseKind::Quadratic: return "quadratic";
    case CaseKind::Saddle: return "saddle";
    case CaseKind::RadialAnnulus: return "radial_annulus";
    case CaseKind::Degenerate: return "degenerate";
    case CaseKind::Custom: return "custom";
  }
  return "?";
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  Keys keys(parse_key_values(in));
  ExperimentConfig c;

  const int dim = static_cast<int>(parse_long("params.dim", keys.require("params.dim")));
  if (dim < 1 || dim > kMaxDim) throw ConfigError("params.dim outside [1, " + std::to_string(kMaxDim) + "]");
  try {
    c.params = PucciParams(parse_double("params.lambda", keys.require("params.lambda")),
                           parse_double("params.Lambda", keys.require("params.Lambda")), dim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }

  const std::string kind = keys.require("case");
  if (kind == "quadratic") c.kind = CaseKind::Quadratic;
  else if (kind == "saddle") c.kind = CaseKind::Saddle;
  else if (kind == "radial_annulus") c.kind = CaseKind::RadialAnnulus;
  else if (kind == "degenerate") c.kind = CaseKind::Degenerate;
  else if (kind == "custom") c.kind = CaseKind::Custom;
  else throw ConfigError("unknown case '" + kind + "'");

  c.Q = SymMatrix::identity(dim);
  if (c.kind == CaseKind::Saddle) {
    if (dim < 2) throw ConfigError("saddle case needs dim >= 2");
    c.Q = SymMatrix(dim);
    c.Q.set(0, 0, 1.0);
    c.Q.set(1, 1, -1.0);
  }
  if (auto q = keys.get("case.Q")) c.Q = parse_matrix("case.Q", *q, dim);
  c.g_Q = SymMatrix(dim);
  if (auto f = keys.get("case.f")) c.f_const = parse_double("case.f", *f);
  if (auto g = keys.get("case.g_const")) c.g_const = parse_double("case.g_const", *g);
  if (auto g = keys.get("case.g_Q")) c.g_Q = parse_matrix("case.g_Q", *g, dim);

  const std::string dkind = keys.require("domain.kind");
  Point center(dim);
  if (auto s = keys.get("domain.center")) center = parse_point("domain.center", *s, dim);
  try {
    if (dkind == "ball") {
      c.domain = Domain::ball(center, parse_double("domain.radius", keys.require("domain.radius")));
    } else if (dkind == "annulus") {
      c.domain = Domain::annulus(center, parse_double("domain.r_inner", keys.require("domain.r_inner")),
                                 parse_double("domain.r_outer", keys.require("domain.r_outer")));
    } else if (dkind == "box") {
      c.domain = Domain::box(parse_point("domain.lo", keys.require("domain.lo"), dim),
                             parse_point("domain.hi", keys.require("domain.hi"), dim));
    } else {
      throw ConfigError("unknown domain.kind '" + dkind + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }

  c.eps_list = parse_list("eps_list", keys.require("eps_list"));
  const std::string rule = keys.get("h.rule").value_or("quadratic");
  if (rule == "quadratic") c.h_rule = HRule::Quadratic;
  else if (rule == "linear") c.h_rule = HRule::Linear;
  else if (rule == "list") c.h_rule = HRule::List;
  else throw ConfigError("unknown h.rule '" + rule + "'");
  if (auto f = keys.get("h.factor")) c.h_factor = parse_double("h.factor", *f);
  if (auto l = keys.get("h.list")) c.h_list = parse_list("h.list", *l);

  const std::string mode = keys.get("search.mode").value_or("hybrid");
  if (mode == "hybrid") c.search = SearchConfig::hybrid();
  else if (mode == "eigen") c.search = SearchConfig::eigenbasis_only();
  else if (mode == "grid") c.search = SearchConfig::angle_grid(std::numbers::pi / 40.0);
  else throw ConfigError("unknown search.mode '" + mode + "'");
  if (auto s = keys.get("search.step")) c.search.step = parse_double("search.step", *s);
  if (auto s = keys.get("search.refine_iters"))
    c.search.refine_iters = static_cast<int>(parse_long("search.refine_iters", *s));

  if (auto t = keys.get("tol")) c.tol = parse_double("tol", *t);
  if (auto m = keys.get("max_iter")) c.max_iter = static_cast<int>(parse_long("max_iter", *m));

  if (auto n = keys.get("mc.n_playouts")) c.mc_playouts = parse_long("mc.n_playouts", *n);
  if (auto s = keys.get("mc.seed")) {
    const std::string t = trim(*s);
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), seed);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) throw ConfigError("mc.seed: not a u64");
    c.mc_seed = seed;
  }
  if (auto x = keys.get("mc.x0")) {
    for (const std::string& p : split(*x, ';'))
      if (!p.empty()) c.mc_x0.push_back(parse_point("mc.x0", p, dim));
  } else {
    c.mc_x0.push_back(default_start(c.domain));
  }
  const std::string strat = keys.get("mc.strategy").value_or("greedy");
  if (strat == "greedy") c.mc_strategy = McStrategy::Greedy;
  else if (strat == "fixed_small") c.mc_strategy = McStrategy::FixedSmall;
  else if (strat == "fixed_large") c.mc_strategy = McStrategy::FixedLarge;
  else throw ConfigError("unknown mc.strategy '" + strat + "'");
  if (auto t = keys.get("mc.transcripts")) c.mc_transcripts = static_cast<int>(parse_long("mc.transcripts", *t));

  if (auto o = keys.get("output_dir")) c.output_dir = *o;
  keys.reject_unused();
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_experiment_config(in);
}

double ExperimentConfig::h_for(size_t i) const {
  const double eps = eps_list.at(i);
  switch (h_rule) {
    case HRule::Quadratic:
      return h_factor.value_or(params.min_scale() / 2.0 / eps_list.front()) * eps * eps;
    case HRule::Linear:
      return h_factor.value_or(params.min_scale() / 4.0) * eps;
    case HRule::List:
      return h_list.at(i);
  }
  return 0.0;
}

void ExperimentConfig::validate() const {
  const int dim = params.dim;
  if (domain.dim() != dim) throw ConfigError("domain dimension differs from params.dim");
  if (kind == CaseKind::Degenerate && !params.degenerate()) throw ConfigError("degenerate case needs lambda = 0");
  if (Q.dim() != dim || g_Q.dim() != dim) throw ConfigError("case matrices must match params.dim");

  if (eps_list.empty()) throw ConfigError("eps_list is empty");
  for (size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ConfigError("eps_list entries must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw ConfigError("eps_list must be strictly decreasing");
  }
  if (h_rule == HRule::List && h_list.size() != eps_list.size())
    throw ConfigError("h.list needs one entry per eps");
  if (h_factor && !(*h_factor > 0.0)) throw ConfigError("h.factor must be positive");
  for (size_t i = 0; i < eps_list.size(); ++i) {
    const double h = h_for(i);
    const double limit = eps_list[i] * params.min_scale() / 2.0;
    if (!(h > 0.0) || h > limit * (1.0 + 1e-12))
      throw ConfigError("h = " + std::to_string(h) + " violates 0 < h <= eps * min_scale / 2 at eps = " +
                        std::to_string(eps_list[i]));
  }
  try {
    search.validate(dim);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("search: ") + e.what());
  }
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (max_iter < 0) throw ConfigError("max_iter must be >= 0");

  if (kind == CaseKind::RadialAnnulus) {
    const auto* a = std::get_if<Annulus>(&domain.shape());
    if (a == nullptr) throw ConfigError("radial_annulus case needs domain.kind = annulus");
    if (params.degenerate()) throw ConfigError("radial_annulus case needs lambda > 0");
    if (!(eps_list.front() * params.max_scale() < a->r_inner))
      throw ConfigError("radial_annulus case needs eps * sqrt(Lambda) < r_inner for every eps");
  }
  if (mc_playouts == 1 || mc_playouts < 0) throw ConfigError("mc.n_playouts must be 0 or >= 2");
  if (mc_transcripts < 0) throw ConfigError("mc.transcripts must be >= 0");
  if (mc_strategy == McStrategy::FixedSmall && params.degenerate())
    throw ConfigError("fixed_small never moves when lambda = 0");
  for (const Point& x : mc_x0)
    if (!domain.contains(x)) throw ConfigError("mc.x0 point outside the domain");
}

CaseSetup make_case(const ExperimentConfig& cfg, double eps) {
  const PucciParams& p = cfg.params;
  auto pucci = [&](const SymMatrix& m) {
    return p.degenerate() ? pucci_plus_degenerate(p.Lambda, m) : pucci_plus(p, m);
  };
  CaseSetup s{GameConfig{p, eps, {}, {}, cfg.domain}, std::nullopt};
  switch (cfg.kind) {
    case CaseKind::Quadratic:
    case CaseKind::Saddle:
    case CaseKind::Degenerate: {
      const SymMatrix Q = cfg.Q;
      const double f = pucci(Q.scaled(2.0));
      s.game.f = [f](const Point&) { return f; };
      s.game.g = [Q](const Point& x) { return Q.quadratic_form(x); };
      s.oracle = s.game.g;
      break;
    }
    case CaseKind::RadialAnnulus: {
      const double f = -static_cast<double>(p.dim);
      s.game.f = [f](const Point&) { return f; };
      s.game.g = [](const Point&) { return 0.0; };
      break;
    }
    case CaseKind::Custom: {
      const double f = cfg.f_const;
      const SymMatrix Q = cfg.g_Q;
      const double c = cfg.g_const;
      s.game.f = [f](const Point&) { return f; };
      s.game.g = [Q, c](const Point& x) { return Q.quadratic_form(x) + c; };
      if (std::abs(f - pucci(Q.scaled(2.0))) <= 1e-12 * (1.0 + std::abs(f))) s.oracle = s.game.g;
      break;
    }
  }
  return s;
}

bool CaseResult::all_converged() const {
  return std::all_of(rows.begin(), rows.end(), [](const ConvergenceRow& r) { return r.converged; });
}

std::string format_eps(double eps) {
  std::ostringstream os;
  os << std::setprecision(12) << eps;
  return os.str();
}

namespace {

Strategy make_strategy(const ExperimentConfig& cfg, const GameConfig& game,
                       const std::shared_ptr<const ValueFunction>& vf) {
  switch (cfg.mc_strategy) {
    case McStrategy::Greedy: return greedy_from_value(vf, game, cfg.search);
    case McStrategy::FixedSmall: return fixed_basis(BasisChoice::axis(cfg.params, false));
    case McStrategy::FixedLarge: return fixed_basis(BasisChoice::axis(cfg.params, true));
  }
  throw std::logic_error("unknown strategy");
}

void write_slices(const std::filesystem::path& dir, const std::string& tag, const ValueFunction& vf,
                  const CaseSetup& setup) {
  const GameConfig& game = setup.game;
  const Point c = domain_center(game.domain);
  const Lattice& L = vf.grid;
  const Point top = L.upper();
  for (int axis = 0; axis < game.dim(); ++axis) {
    std::ofstream out(dir / ("slice_x" + std::to_string(axis + 1) + "_eps" + tag + ".csv"));
    out << "coordinate,u_eps" << (setup.oracle ? ",u_oracle" : "") << '\n' << std::setprecision(17);
    for (int k = 0; k < L.counts[axis]; ++k) {
      Point x = c;
      x[axis] = std::min(L.lo[axis] + k * L.h, top[axis]);
      if (!L.covers(x)) continue;
      out << x[axis] << ',' << interpolate(vf, game, x);
      if (setup.oracle) out << ',' << (*setup.oracle)(x);
      out << '\n';
    }
  }
}

}  // namespace

CaseResult run_case(const ExperimentConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  CaseResult result;
  if (opts.write_files) std::filesystem::create_directories(cfg.output_dir);

  for (size_t i = 0; i < cfg.eps_list.size(); ++i) {
    const double eps = cfg.eps_list[i];
    const std::string tag = format_eps(eps);
    const CaseSetup setup = make_case(cfg, eps);
    const GameConfig& game = setup.game;

    ConvergenceRow row;
    row.eps = eps;
    row.h = cfg.h_for(i);
    const double R = game.domain.bounding_radius();
    row.bound_4R2_over_lambda_eps2 = 4.0 * R * R / (min_scale_sq(cfg.params) * eps * eps);

    std::shared_ptr<const ValueFunction> vf;
    if (opts.solve) {
      try {
        auto [v, report] = cfg.params.degenerate()
                               ? solve_dpp_degenerate(game, row.h, cfg.search, cfg.tol, cfg.max_iter)
                               : solve_dpp(game, row.h, cfg.search, cfg.tol, cfg.max_iter);
        row.iterations = report.iterations;
        row.residual = report.final_residual;
        row.converged = true;
        vf = std::make_shared<const ValueFunction>(std::move(v));
      } catch (const NotConverged& e) {
        row.iterations = e.report().iterations;
        row.residual = e.report().final_residual;
        row.converged = false;
        vf = std::make_shared<const ValueFunction>(e.last_iterate());
      }
      if (setup.oracle) {
        double err = 0.0;
        for (size_t node : vf->interior)
          err = std::max(err, std::abs(vf->values[node] - (*setup.oracle)(vf->grid.node(node))));
        row.sup_error = err;
      }
      if (opts.write_files) {
        std::ofstream out(cfg.output_dir / ("values_eps" + tag + ".csv"));
        write_value_function_csv(out, *vf, game);
        write_slices(cfg.output_dir, tag, *vf, setup);
      }
    }

    const bool greedy = cfg.mc_strategy == McStrategy::Greedy;
    const bool can_play = !greedy || (vf && row.converged);
    if (opts.monte_carlo && cfg.mc_playouts >= 2 && can_play) {
      const Strategy strategy = make_strategy(cfg, game, vf);
      std::ofstream mc_out;
      if (opts.write_files) {
        mc_out.open(cfg.output_dir / ("mc_eps" + tag + ".csv"));
        mc_out << "x0,mean,std_error,n_playouts,mean_tau,tau_std_error,dpp_value,gap" << '\n'
               << std::setprecision(12);
      }
      for (size_t j = 0; j < cfg.mc_x0.size(); ++j) {
        const Point& x0 = cfg.mc_x0[j];
        std::function<void(const Transcript&)> observer;
        long written = 0;
        if (opts.write_files && j == 0 && cfg.mc_transcripts > 0) {
          std::filesystem::create_directories(cfg.output_dir / "transcripts");
          observer = [&](const Transcript& t) {
            if (written >= cfg.mc_transcripts) return;
            std::ofstream out(cfg.output_dir / "transcripts" /
                              ("eps" + tag + "_" + std::to_string(written++) + ".csv"));
            write_transcript_csv(out, t);
          };
        }
        const McEstimate est = estimate_value(game, strategy, x0, cfg.mc_playouts, cfg.mc_seed, 0, observer);
        std::optional<double> dpp;
        if (vf) dpp = interpolate(*vf, game, x0);
        if (j == 0) {
          if (dpp) row.mc_gap = est.mean - *dpp;
          row.mean_tau = est.mean_tau;
          row.mc_std_error = est.std_error;
          row.eps2_mean_tau = eps * eps * est.mean_tau;
          if (opts.write_files) {
            std::ofstream js(cfg.output_dir / ("mc_eps" + tag + ".json"));
            write_estimate_summary(js, est, cfg.mc_seed);
          }
        }
        if (opts.write_files) {
          std::ostringstream coords;
          coords << std::setprecision(12);
          for (int d = 0; d < x0.dim(); ++d) coords << (d ? " " : "") << x0[d];
          mc_out << coords.str() << ',' << est.mean << ',' << est.std_error << ',' << est.n_playouts << ','
                 << est.mean_tau << ',' << est.tau_std_error << ',';
          if (dpp) mc_out << *dpp << ',' << est.mean - *dpp;
          else mc_out << ',';
          mc_out << '\n';
        }
      }
    }
    result.rows.push_back(row);
    result.values.push_back(vf);
  }

  if (opts.write_files) {
    std::ofstream out(cfg.output_dir / "summary.csv");
    write_summary_csv(out, result.rows);
  }
  return result;
}

namespace {

constexpr const char* kSummaryHeader =
    "eps,h,sup_error,residual,iterations,mc_gap,mean_tau,bound_4R2_over_lambda_eps2,converged,mc_std_error,"
    "eps2_mean_tau";

void put(std::ostream& os, const std::optional<double>& v) {
  if (v) os << *v;
}

std::optional<double> opt_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double("summary.csv", s);
}

}  // namespace

void write_summary_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << kSummaryHeader << '\n' << std::setprecision(12);
  for (const ConvergenceRow& r : rows) {
    os << r.eps << ',' << r.h << ',';
    put(os, r.sup_error);
    os << ',' << r.residual << ',' << r.iterations << ',';
    put(os, r.mc_gap);
    os << ',';
    put(os, r.mean_tau);
    os << ',' << r.bound_4R2_over_lambda_eps2 << ',' << (r.converged ? 1 : 0) << ',';
    put(os, r.mc_std_error);
    os << ',';
    put(os, r.eps2_mean_tau);
    os << '\n';
  }
}

std::vector<ConvergenceRow> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kSummaryHeader) throw ConfigError("not a summary.csv file");
  std::vector<ConvergenceRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::string item;
    std::istringstream ls(line);
    while (std::getline(ls, item, ',')) f.push_back(trim(item));
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 11) throw ConfigError("summary.csv row has " + std::to_string(f.size()) + " fields");
    ConvergenceRow r;
    r.eps = parse_double("eps", f[0]);
    r.h = parse_double("h", f[1]);
    r.sup_error = opt_field(f[2]);
    r.residual = parse_double("residual", f[3]);
    r.iterations = static_cast<int>(parse_long("iterations", f[4]));
    r.mc_gap = opt_field(f[5]);
    r.mean_tau = opt_field(f[6]);
    r.bound_4R2_over_lambda_eps2 = parse_double("bound", f[7]);
    r.converged = f[8] == "1";
    r.mc_std_error = opt_field(f[9]);
    r.eps2_mean_tau = opt_field(f[10]);
    rows.push_back(r);
  }
  return rows;
}

Comparison compare_runs(const std::vector<ConvergenceRow>& a, const std::vector<ConvergenceRow>& b) {
  if (a.size() != b.size()) throw MismatchedSweep("runs have different numbers of rows");
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i].eps - b[i].eps) > 1e-12 * std::abs(a[i].eps)) throw MismatchedSweep("eps lists differ");

  Comparison c;
  std::ostringstream os;
  os << std::setprecision(6);
  os << std::left << std::setw(10) << "eps" << std::setw(14) << "quantity" << std::setw(14) << "a" << std::setw(14)
     << "b" << std::setw(14) << "delta" << '\n';
  auto line = [&](double eps, const char* name, std::optional<double> va, std::optional<double> vb, bool tracked) {
    if (!va && !vb) return;
    os << std::setw(10) << eps << std::setw(14) << name;
    auto cell = [&](const std::optional<double>& v) {
      if (v) os << std::setw(14) << *v;
      else os << std::setw(14) << "-";
    };
    cell(va);
    cell(vb);
    if (va && vb) {
      os << std::setw(14) << (*vb - *va);
      if (tracked && *va > 0.0 && (*vb - *va) > 0.10 * *va) {
        os << "REGRESSION";
        ++c.regressions;
      }
    }
    os << '\n';
  };
  auto abs_opt = [](const std::optional<double>& v) -> std::optional<double> {
    if (v) return std::abs(*v);
    return std::nullopt;
  };
  for (size_t i = 0; i < a.size(); ++i) {
    const double eps = a[i].eps;
    line(eps, "sup_error", a[i].sup_error, b[i].sup_error, true);
    line(eps, "residual", a[i].residual, b[i].residual, false);
    line(eps, "iterations", a[i].iterations, b[i].iterations, true);
    line(eps, "|mc_gap|", abs_opt(a[i].mc_gap), abs_opt(b[i].mc_gap), true);
    line(eps, "mean_tau", a[i].mean_tau, b[i].mean_tau, false);
  }
  os << c.regressions << " regression(s) above 10%\n";
  c.report = os.str();
  return c;
}

}  // namespace pucci_game
