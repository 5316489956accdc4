#include "pa/rare_events.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pa/empirics.hpp"
#include "pa/errors.hpp"
#include "pa/generator.hpp"
#include "pa/optimize.hpp"
#include "pa/oracle.hpp"
#include "pa/parallel.hpp"
#include "pa/rates.hpp"

namespace pa {

namespace {

// Lazily extended per-bucket tables of f and f~.
class WeightCache {
 public:
  WeightCache(const WeightSpec& spec, const Tilt& tilt)
      : spec_(spec), tilt_(tilt), base_(spec.num_buckets()), tilted_(spec.num_buckets()) {}

  void reserve(std::size_t b, std::size_t k) {
    const std::size_t P = spec_.num_pairs();
    for (std::size_t kk = base_[b].size() / P; kk <= k; ++kk) {
      for (std::size_t a = 0; a < P; ++a) {
        base_[b].push_back(spec_.weight(b, kk, a));
        tilted_[b].push_back(tilt_.tilted_weight(spec_, b, kk, a));
      }
    }
  }
  double base(std::size_t b, std::size_t k, std::size_t a) const {
    return base_[b][k * spec_.num_pairs() + a];
  }
  double tilted(std::size_t b, std::size_t k, std::size_t a) const {
    return tilted_[b][k * spec_.num_pairs() + a];
  }

 private:
  const WeightSpec& spec_;
  const Tilt& tilt_;
  std::vector<std::vector<double>> base_;
  std::vector<std::vector<double>> tilted_;
};

}  // namespace

double log_likelihood_ratio(const EventLog& log, const Tilt& tilt, const WeightSpec& spec,
                            const std::vector<double>& mu) {
  require_color_law(mu, spec.num_colors());
  tilt.check_compatible(spec);
  if (log.num_colors != spec.num_colors()) throw StructuralError("log and spec alphabets differ");
  replay_validate(log);
  const std::size_t C = spec.num_colors();
  const auto mu_t = tilt.tilted_colors(mu);

  double colors = 0.0;
  for (std::uint32_t x : log.colors) colors += std::log(mu_t[x]) - std::log(mu[x]);

  WeightCache cache(spec, tilt);
  // hist[x][k]: vertices of color x with in-degree k.
  std::vector<std::vector<std::uint32_t>> hist(C);
  hist[log.color_of(1)].push_back(1);
  std::vector<std::uint32_t> indeg(log.n + 1, 0);
  std::size_t top = 0;
  double events = 0.0;
  double normalizers = 0.0;
  for (const auto& e : log.events) {
    const std::size_t b = spec.bucket_of(static_cast<double>(e.m) / static_cast<double>(log.n));
    cache.reserve(b, top);
    double z = 0.0, zt = 0.0;
    for (std::size_t x = 0; x < C; ++x) {
      const std::size_t a = x * C + e.child_color;
      for (std::size_t k = 0; k < hist[x].size(); ++k) {
        if (hist[x][k] == 0) continue;
        z += hist[x][k] * cache.base(b, k, a);
        zt += hist[x][k] * cache.tilted(b, k, a);
      }
    }
    const std::size_t a = e.parent_color * C + e.child_color;
    events += std::log(cache.tilted(b, e.parent_indegree, a)) - std::log(cache.base(b, e.parent_indegree, a));
    normalizers += std::log(zt) - std::log(z);

    auto& h = hist[e.parent_color];
    --h[e.parent_indegree];
    if (h.size() <= e.parent_indegree + 1u) h.resize(e.parent_indegree + 2, 0);
    ++h[e.parent_indegree + 1];
    top = std::max<std::size_t>(top, e.parent_indegree + 1);
    auto& hc = hist[e.child_color];
    if (hc.empty()) hc.push_back(0);
    ++hc[0];
  }
  return colors + events - normalizers;
}

ISEstimate is_estimate(const Predicate& event, const WeightSpec& spec, const std::vector<double>& mu,
                       const Tilt& tilt, std::uint32_t n, std::size_t reps, std::uint64_t seed,
                       std::size_t threads) {
  if (reps < 2) throw DomainError("is_estimate: reps must be at least 2");
  std::vector<double> weight(reps);
  std::vector<char> hit(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    const auto log = generate_tilted(spec, mu, tilt, n, seed, r);
    hit[r] = event(log) ? 1 : 0;
    weight[r] = std::exp(-log_likelihood_ratio(log, tilt, spec, mu));
  });

  ISEstimate est;
  est.reps = reps;
  std::vector<double> values, weights;
  values.reserve(reps);
  weights.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    if (!std::isfinite(weight[r])) {
      ++est.excluded;
      continue;
    }
    weights.push_back(weight[r]);
    values.push_back(hit[r] ? weight[r] : 0.0);
    est.hits += static_cast<std::size_t>(hit[r]);
  }
  if (static_cast<double>(est.excluded) > 0.001 * static_cast<double>(reps)) {
    std::ostringstream msg;
    msg << "is_estimate: " << est.excluded << " of " << reps << " replicas have non-finite weights";
    throw EstimationError(msg.str());
  }
  auto mean_and_error = [](const std::vector<double>& xs) {
    const double m = stable_sum(xs) / static_cast<double>(xs.size());
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - m) * (xs[i] - m);
    const double var = stable_sum(sq) / static_cast<double>(xs.size() - 1);
    return std::pair{m, std::sqrt(var / static_cast<double>(xs.size()))};
  };
  std::tie(est.p_hat, est.std_error) = mean_and_error(values);
  std::tie(est.mean_weight, est.mean_weight_std_error) = mean_and_error(weights);
  std::vector<double> sq(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) sq[i] = weights[i] * weights[i];
  const double s = stable_sum(weights);
  est.ess = s * s / stable_sum(sq);
  return est;
}

NaiveEstimate naive_estimate(const Predicate& event, const WeightSpec& spec,
                             const std::vector<double>& mu, std::uint32_t n, std::size_t reps,
                             std::uint64_t seed, std::size_t threads) {
  if (reps < 2) throw DomainError("naive_estimate: reps must be at least 2");
  std::vector<char> hit(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    hit[r] = event(generate(spec, mu, n, seed, r)) ? 1 : 0;
  });
  NaiveEstimate est;
  est.reps = reps;
  for (char h : hit) est.hits += static_cast<std::size_t>(h);
  est.p_hat = static_cast<double>(est.hits) / static_cast<double>(reps);
  est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(reps - 1));
  return est;
}

Tilt suggest_tilt(const PairMeasure& target, const WeightSpec& spec, const std::vector<double>& mu,
                  const PathMeasure* baseline, const SuggestOptions& options) {
  require_valid(spec);
  require_color_law(mu, spec.num_colors());
  if (target.num_colors() != spec.num_colors()) throw StructuralError("target and spec alphabets differ");
  const std::size_t C = spec.num_colors();
  const std::size_t P = spec.num_pairs();
  const std::size_t K = target.kmax();

  std::vector<double> w21 = target.color_marginal();
  const double total = stable_sum(w21);
  std::vector<double> h(C);
  for (std::size_t x = 0; x < C; ++x) {
    h[x] = w21[x] > 0.0 ? std::log(w21[x] / total / mu[x]) : options.log_floor;
  }

  const auto w2 = target.pair_marginal();
  std::vector<std::vector<double>> g(spec.num_buckets(), std::vector<double>((K + 1) * P, 0.0));
  std::ostringstream violations;
  bool violated = false;
  for (std::size_t b = 0; b < spec.num_buckets(); ++b) {
    std::size_t snap_index = 0;
    if (baseline != nullptr) {
      if (baseline->num_colors() != C) throw StructuralError("baseline alphabet differs from spec");
      const auto grid = baseline->grid();
      const double end = spec.bucket_ends()[b];
      for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] <= end + 1e-12) snap_index = i;
      }
      if (snap_index == 0) throw DomainError("baseline path has no snapshot inside a bucket");
    }
    const double c = spec.c(b);
    for (std::size_t a = 0; a < P; ++a) {
      if (w2[a] <= 0.0) continue;
      const auto omega = target.conditional(a);
      DegreeMeasure nu;
      if (baseline == nullptr) {
        nu = pi_f(spec.gamma(b, a), spec.beta(b, a), K);
      } else {
        const auto& s = baseline->snapshot(snap_index)[a];
        if (!s) throw DomainError("baseline has no conditional for a charged color pair");
        nu = s->truncated(std::max(K, s->kmax()));
      }
      for (std::size_t k = 0; k <= K; ++k) {
        const double wk = omega[k];
        const double vk = nu[k];
        const double f = spec.weight(b, k, a);
        double value = 0.0;
        if (vk > 0.0) {
          value = (wk > 0.0 && f > 0.0) ? std::log(f / c) + std::log(wk / vk) : options.log_floor;
        } else if (wk > 0.0) {
          violated = true;
          violations << " (" << k << "," << a / C << "," << a % C << ")";
        }
        g[b][k * P + a] = value;
      }
    }
  }
  if (violated) {
    throw DomainError("suggest_tilt: target charges degrees the baseline does not:" + violations.str());
  }
  return Tilt(std::move(h), std::move(g), K, P, options.g_default);
}

Tilt suggest_tilt(const DegreeMeasure& target, const WeightSpec& spec, const SuggestOptions& options) {
  if (spec.num_colors() != 1) throw StructuralError("degree-law target needs a single-color spec");
  const std::vector<double> one{1.0};
  const auto omega = PairMeasure::from_conditionals(1, one, std::vector<DegreeMeasure>{target});
  return suggest_tilt(omega, spec, one, nullptr, options);
}

std::vector<DecayRow> decay_rate_scan(const Predicate& event, const std::vector<std::uint32_t>& n_list,
                                      const WeightSpec& spec, const std::vector<double>& mu,
                                      const DecayScanConfig& config) {
  const std::uint32_t limit =
      config.oracle_limit == 0 ? default_oracle_limit(spec.num_colors()) : config.oracle_limit;
  std::vector<DecayRow> rows;
  for (std::uint32_t n : n_list) {
    if (n < 2) throw DomainError("decay_rate_scan: every n must be at least 2");
    DecayRow row;
    row.n = n;
    row.rate_prediction = config.rate_prediction;
    if (n <= limit) {
      const mpq_class p = exact_event_probability(event, spec, mu, n, limit);
      row.method = "oracle";
      row.exact = to_string(p);
      row.p_hat = p.get_d();
      row.decay = p > 0 ? -log_rational(p) / n : std::numeric_limits<double>::infinity();
    } else if (config.tilt != nullptr) {
      const auto est = is_estimate(event, spec, mu, *config.tilt, n, config.reps, config.seed, config.threads);
      row.method = "is";
      row.p_hat = est.p_hat;
      row.std_error = est.std_error;
      row.decay = -std::log(est.p_hat) / n;
    } else {
      const auto est = naive_estimate(event, spec, mu, n, config.reps, config.seed, config.threads);
      row.method = "naive";
      row.p_hat = est.p_hat;
      row.std_error = est.std_error;
      row.decay = -std::log(est.p_hat) / n;
    }
    if (row.decay == 0.0) row.decay = 0.0;  // drop the sign of -0
    rows.push_back(std::move(row));
  }
  return rows;
}

Tilt suggest_tilt(const DegreeMeasure& target, const DegreeMeasure& baseline, const WeightSpec& spec,
                  const SuggestOptions& options) {
  require_valid(spec);
  if (spec.num_colors() != 1) throw StructuralError("degree-law target needs a single-color spec");
  const std::size_t K = target.kmax();
  std::vector<std::vector<double>> g(spec.num_buckets(), std::vector<double>(K + 1, 0.0));
  std::ostringstream violations;
  bool violated = false;
  for (std::size_t b = 0; b < spec.num_buckets(); ++b) {
    for (std::size_t k = 0; k <= K; ++k) {
      const double wk = target[k];
      const double vk = baseline[k];
      const double f = spec.weight(b, k, 0);
      if (vk > 0.0) {
        g[b][k] = (wk > 0.0 && f > 0.0) ? std::log(f / spec.c(b)) + std::log(wk / vk) : options.log_floor;
      } else if (wk > 0.0) {
        violated = true;
        if (b == 0) violations << " (" << k << ",0,0)";
      }
    }
  }
  if (violated) {
    throw DomainError("suggest_tilt: target charges degrees the baseline does not:" + violations.str());
  }
  return Tilt({0.0}, std::move(g), K, 1, options.g_default);
}

DegreeMeasure implied_vertex_law(const DegreeMeasure& attachment) {
  const std::size_t K = attachment.kmax();
  std::vector<double> nu(K + 1);
  double prev = 1.0;
  for (std::size_t k = 0; k <= K; ++k) {
    const double d = prev - attachment[k];
    if (d < -1e-12) throw DomainError("implied_vertex_law: attachment law increases at k = " + std::to_string(k));
    nu[k] = std::max(d, 0.0);
    prev = attachment[k];
  }
  return DegreeMeasure::normalized(std::move(nu), attachment[K]);
}

Tilt event_tilt(const Predicate& event, const WeightSpec& spec, std::size_t kmax, std::uint64_t seed,
                std::size_t threads, DegreeMeasure* l_star) {
  if (spec.num_colors() != 1 || !spec.is_time_constant()) {
    throw StructuralError("event_tilt needs a single-color, time-constant spec");
  }
  MinimizeOptions opt;
  opt.seed = seed;
  opt.threads = threads;
  const auto best = minimize_rate_I(event, spec.gamma(0, 0), spec.beta(0, 0), kmax, opt);
  if (l_star != nullptr) *l_star = best.l_star;
  if (!event.has_vertex_clauses()) return suggest_tilt(best.l_star, implied_vertex_law(best.l_star), spec);
  if (event.has_attachment_clauses()) throw ValidationError("event_tilt: event mixes M and V clauses");
  // l* is a vertex law; its attachment law is x(k) = P(degree > k).
  const auto x = tail(best.l_star);
  return suggest_tilt(DegreeMeasure::normalized(x, best.l_star.tail_mass() * static_cast<double>(kmax + 1)),
                      best.l_star, spec);
}

}  // namespace pa
