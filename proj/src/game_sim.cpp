#include "pucci_game/game_sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <json.hpp>

namespace pucci_game {

Strategy greedy_from_value(std::shared_ptr<const ValueFunction> vf, const GameConfig& cfg, const SearchConfig& search) {
  if (!vf) throw std::invalid_argument("greedy strategy needs a value function");
  if (vf->eps != cfg.eps) throw std::invalid_argument("value function was solved for a different eps");
  search.validate(cfg.dim());
  return {"greedy", [vf = std::move(vf), cfg, search](const Point& x) {
            return best_response(*vf, cfg, x, search).first;
          }};
}

Strategy fixed_basis(const BasisChoice& choice) {
  return {"fixed", [choice](const Point&) { return choice; }};
}

Strategy custom_strategy(std::string name, std::function<BasisChoice(const Point&)> rule) {
  if (!rule) throw std::invalid_argument("custom strategy needs a rule");
  return {std::move(name), std::move(rule)};
}

std::uint64_t playout_seed(std::uint64_t master_seed, std::uint64_t index) {
  // SplitMix64 finaliser applied to the index-th element of the seed's stream.
  std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::pair<Point, Outcome> step(const Point& x, const BasisChoice& choice, double eps, Rng& rng) {
  const auto moves = static_cast<std::uint64_t>(2 * choice.dim);
  const auto draw = static_cast<int>(rng() % moves);
  Outcome o{draw / 2, draw % 2 == 0 ? 1 : -1};
  const double len = o.sign * eps * choice.scale(o.index);
  return {x + len * choice.directions[o.index], o};
}

long default_max_steps(const GameConfig& cfg) {
  const double R = cfg.domain.bounding_radius();
  const double mu2 = cfg.params.min_scale() * cfg.params.min_scale();
  const double bound = std::ceil(4.0 * R * R / (mu2 * cfg.eps * cfg.eps));
  const double cap = static_cast<double>(std::numeric_limits<long>::max() / 200);
  return 100 * static_cast<long>(std::min(bound, cap));
}

Transcript play(const GameConfig& cfg, const Strategy& strategy, const Point& x0, std::uint64_t rng_seed,
                long max_steps) {
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (x0.dim() != cfg.dim() || !cfg.domain.contains(x0)) throw std::invalid_argument("start point must lie in the domain");
  if (max_steps <= 0) max_steps = default_max_steps(cfg);

  Rng rng(rng_seed);
  Transcript t;
  t.rng_seed = rng_seed;
  t.positions.push_back(x0);
  double f_sum = 0.0;
  Point x = x0;
  while (cfg.domain.contains(x)) {
    if (t.tau >= max_steps)
      throw MaxStepsExceeded("token still inside after " + std::to_string(max_steps) + " steps");
    const BasisChoice choice = strategy(x);
    const double fx = cfg.f(x);
    auto [next, outcome] = step(x, choice, cfg.eps, rng);
    t.choices.push_back(choice);
    t.outcomes.push_back(outcome);
    t.f_values.push_back(fx);
    f_sum += fx;
    x = next;
    t.positions.push_back(x);
    ++t.tau;
  }
  t.running_cost = cfg.eps * cfg.eps / (2.0 * cfg.dim()) * f_sum;
  t.final_payoff = cfg.g(x);
  t.payoff = t.final_payoff - t.running_cost;
  return t;
}

McEstimate estimate_value(const GameConfig& cfg, const Strategy& strategy, const Point& x0, long n,
                          std::uint64_t seed, long max_steps, const std::function<void(const Transcript&)>& observer) {
  if (n < 2) throw std::invalid_argument("need at least two playouts");
  // Welford updates for payoff and exit time.
  double mean = 0.0, m2 = 0.0, tau_mean = 0.0, tau_m2 = 0.0;
  for (long i = 0; i < n; ++i) {
    const Transcript t = play(cfg, strategy, x0, playout_seed(seed, static_cast<std::uint64_t>(i)), max_steps);
    if (observer) observer(t);
    const double k = static_cast<double>(i + 1);
    const double d = t.payoff - mean;
    mean += d / k;
    m2 += d * (t.payoff - mean);
    const double tau = static_cast<double>(t.tau);
    const double dt = tau - tau_mean;
    tau_mean += dt / k;
    tau_m2 += dt * (tau - tau_mean);
  }
  const double nn = static_cast<double>(n);
  McEstimate est;
  est.n_playouts = n;
  est.mean = mean;
  est.std_error = std::sqrt(m2 / (nn - 1.0) / nn);
  est.mean_tau = tau_mean;
  est.tau_std_error = std::sqrt(tau_m2 / (nn - 1.0) / nn);
  return est;
}

ExitTimeCheck exit_time_bound_check(const GameConfig& cfg, const McEstimate& est, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
  ExitTimeCheck c;
  c.bound = cfg.params.lambda > 0.0 ? 4.0 * R * R / (cfg.params.lambda * cfg.eps * cfg.eps)
                                    : std::numeric_limits<double>::infinity();
  c.margin = c.bound + 3.0 * est.tau_std_error - est.mean_tau;
  c.holds = c.margin >= 0.0;
  return c;
}

bool MartingaleReport::passes(double z_limit) const {
  return lower_bound_violations == 0 && max_abs_z <= z_limit && std::abs(pooled_z) <= z_limit;
}

MartingaleAccumulator::MartingaleAccumulator(const Point& x0, const PucciParams& params, double eps)
    : x0_(x0), params_(params), eps_(eps) {}

void MartingaleAccumulator::add(const Transcript& t) {
  if (t.positions.empty() || !(t.positions.front() == x0_))
    throw MismatchedStart("transcript does not start at the diagnostic's x0");
  if (per_step_.size() < static_cast<size_t>(t.tau)) per_step_.resize(static_cast<size_t>(t.tau));
  const double n_dim = static_cast<double>(params_.dim);
  double prev = norm2(t.positions[0] - x0_);
  for (long k = 0; k < t.tau; ++k) {
    const double cur = norm2(t.positions[k + 1] - x0_);
    const BasisChoice& c = t.choices[k];
    double sum_sq = 0.0;
    for (int i = 0; i < c.dim; ++i) sum_sq += c.scale_sq[i];
    if (sum_sq < n_dim * params_.lambda) ++violations_;
    const double exact = eps_ * eps_ * sum_sq / n_dim;
    const double inc = cur - prev;
    const double dev = inc - exact;
    for (Sums* s : {&per_step_[k], &pooled_}) {
      ++s->n;
      s->inc += inc;
      s->exact += exact;
      s->dev += dev;
      s->dev2 += dev * dev;
    }
    prev = cur;
  }
}

namespace {

// Mean, standard error and z-score of the deviation sums. `floor` keeps pure
// rounding noise (deterministic first steps) from producing huge z.
void summarise(long n, double dev, double dev2, double floor, double& mean, double& se, double& z) {
  const double nn = static_cast<double>(n);
  mean = dev / nn;
  const double var = n > 1 ? std::max(0.0, (dev2 - nn * mean * mean) / (nn - 1.0)) : 0.0;
  se = std::sqrt(var / nn);
  z = mean / std::max(se, floor);
}

}  // namespace

MartingaleReport MartingaleAccumulator::report(long min_count) const {
  MartingaleReport r;
  r.min_count = min_count;
  r.lower_bound_violations = violations_;
  r.increments = pooled_.n;
  const double floor = 1e-12 * eps_ * eps_;
  for (size_t k = 0; k < per_step_.size(); ++k) {
    const Sums& s = per_step_[k];
    if (s.n == 0) continue;
    MartingaleStep st;
    st.step = static_cast<long>(k);
    st.count = s.n;
    st.mean_increment = s.inc / s.n;
    st.mean_exact = s.exact / s.n;
    double mean_dev;
    summarise(s.n, s.dev, s.dev2, floor, mean_dev, st.std_error, st.z);
    r.max_abs_deviation = std::max(r.max_abs_deviation, std::abs(mean_dev));
    if (s.n >= min_count) r.max_abs_z = std::max(r.max_abs_z, std::abs(st.z));
    r.steps.push_back(st);
  }
  if (pooled_.n > 0) {
    double mean_dev, se;
    summarise(pooled_.n, pooled_.dev, pooled_.dev2, floor, mean_dev, se, r.pooled_z);
  }
  return r;
}

MartingaleReport martingale_diagnostic(std::span<const Transcript> transcripts, const Point& x0,
                                       const PucciParams& params, double eps, long min_count) {
  MartingaleAccumulator acc(x0, params, eps);
  for (const Transcript& t : transcripts) acc.add(t);
  return acc.report(min_count);
}

void write_transcript_csv(std::ostream& os, const Transcript& t) {
  const int n = t.positions.empty() ? 0 : t.positions.front().dim();
  os << "k";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  os << ",mu_applied,sign,dir_index,f_at_x\n";
  os << std::setprecision(17);
  for (size_t k = 0; k < t.positions.size(); ++k) {
    os << k;
    for (int i = 0; i < n; ++i) os << ',' << t.positions[k][i];
    if (static_cast<long>(k) < t.tau) {
      const Outcome& o = t.outcomes[k];
      os << ',' << t.choices[k].scale(o.index) << ',' << (o.sign > 0 ? '+' : '-') << ',' << o.index + 1 << ','
         << t.f_values[k];
    } else {
      os << ",,,,";
    }
    os << '\n';
  }
}

void write_estimate_summary(std::ostream& os, const McEstimate& est, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["mean"] = est.mean;
  j["std_error"] = est.std_error;
  j["n_playouts"] = est.n_playouts;
  j["mean_tau"] = est.mean_tau;
  j["tau_std_error"] = est.tau_std_error;
  j["seed"] = seed;
  os << j.dump(2) << '\n';
}

}  // namespace pucci_game
