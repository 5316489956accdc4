#include "pa/oracle.hpp"

#include <cmath>
#include <sstream>

#include "pa/empirics.hpp"
#include "pa/errors.hpp"

namespace pa {

namespace {

std::vector<mpq_class> rational_law(const std::vector<double>& law) {
  std::vector<mpq_class> out;
  mpq_class total = 0;
  for (double x : law) {
    out.emplace_back(x);
    total += out.back();
  }
  for (auto& x : out) x /= total;
  return out;
}

template <class WeightFn>
std::vector<std::vector<mpq_class>> weight_table(const WeightSpec& spec, std::uint32_t n,
                                                 WeightFn&& fn) {
  const std::size_t kmax = n >= 2 ? n - 2 : 0;
  std::vector<std::vector<mpq_class>> out(spec.num_buckets());
  for (std::size_t b = 0; b < spec.num_buckets(); ++b) {
    out[b].resize((kmax + 1) * spec.num_pairs());
    for (std::size_t k = 0; k <= kmax; ++k) {
      for (std::size_t a = 0; a < spec.num_pairs(); ++a) out[b][k * spec.num_pairs() + a] = fn(b, k, a);
    }
  }
  return out;
}

std::vector<std::size_t> step_buckets(const WeightSpec& spec, std::uint32_t n) {
  std::vector<std::size_t> out(n + 1, 0);
  for (std::uint32_t m = 2; m <= n; ++m) {
    out[m] = spec.bucket_of(static_cast<double>(m) / static_cast<double>(n));
  }
  return out;
}

}  // namespace

OracleDynamics OracleDynamics::base(const WeightSpec& spec, const std::vector<double>& mu,
                                    std::uint32_t n) {
  require_valid(spec);
  require_color_law(mu, spec.num_colors());
  if (n < 2) throw DomainError("oracle: n must be at least 2");
  OracleDynamics d;
  d.n_ = n;
  d.color_law_ = rational_law(mu);
  d.bucket_of_step_ = step_buckets(spec, n);
  d.weights_ = weight_table(spec, n, [&](std::size_t b, std::size_t k, std::size_t a) -> mpq_class {
    return mpq_class(spec.gamma(b, a)) * static_cast<unsigned long>(k) + mpq_class(spec.beta(b, a));
  });
  return d;
}

OracleDynamics OracleDynamics::tilted(const WeightSpec& spec, const std::vector<double>& mu,
                                      const Tilt& tilt, std::uint32_t n) {
  require_valid(spec);
  require_color_law(mu, spec.num_colors());
  tilt.check_compatible(spec);
  if (n < 2) throw DomainError("oracle: n must be at least 2");
  OracleDynamics d;
  d.n_ = n;
  d.color_law_ = rational_law(tilt.tilted_colors(mu));
  d.bucket_of_step_ = step_buckets(spec, n);
  d.weights_ = weight_table(spec, n, [&](std::size_t b, std::size_t k, std::size_t a) -> mpq_class {
    return mpq_class(tilt.tilted_weight(spec, b, k, a));
  });
  return d;
}

const mpq_class& OracleDynamics::weight(std::uint32_t m, std::uint32_t k, std::size_t pair) const {
  const std::size_t pairs = num_colors() * num_colors();
  return weights_[bucket_of_step_[m]][k * pairs + pair];
}

std::uint32_t default_oracle_limit(std::size_t num_colors) { return num_colors == 1 ? 10 : 7; }

double outcome_count_estimate(std::size_t num_colors, std::uint32_t n) {
  return std::pow(static_cast<double>(num_colors), n) * std::tgamma(static_cast<double>(n));
}

void for_each_outcome(const OracleDynamics& dyn,
                      const std::function<void(const EventLog&, const mpq_class&)>& visit,
                      std::uint32_t n_limit) {
  const std::uint32_t n = dyn.n();
  const std::size_t C = dyn.num_colors();
  const std::uint32_t limit = n_limit == 0 ? default_oracle_limit(C) : n_limit;
  if (n > limit) {
    std::ostringstream msg;
    msg << "oracle: n = " << n << " exceeds the enumeration limit " << limit << " (about "
        << outcome_count_estimate(C, n) << " outcomes)";
    throw DomainError(msg.str());
  }
  EventLog log;
  log.n = n;
  log.num_colors = C;
  log.colors.reserve(n);
  log.events.reserve(n - 1);
  std::vector<std::uint32_t> indeg(n + 1, 0);
  std::vector<mpq_class> prob(n + 2);

  std::function<void(std::uint32_t)> recurse = [&](std::uint32_t m) {
    if (m > n) {
      visit(log, prob[m]);
      return;
    }
    for (std::uint32_t y = 0; y < C; ++y) {
      const mpq_class& py = dyn.color_probability(y);
      if (py == 0) continue;
      mpq_class total = 0;
      for (std::uint32_t i = 1; i < m; ++i) total += dyn.weight(m, indeg[i], log.colors[i - 1] * C + y);
      if (total == 0) continue;
      for (std::uint32_t i = 1; i < m; ++i) {
        const std::uint32_t xi = log.colors[i - 1];
        const mpq_class& wi = dyn.weight(m, indeg[i], xi * C + y);
        if (wi == 0) continue;
        prob[m + 1] = prob[m] * py * wi / total;
        log.events.push_back({m, i, xi, y, indeg[i]});
        log.colors.push_back(y);
        ++indeg[i];
        recurse(m + 1);
        --indeg[i];
        log.colors.pop_back();
        log.events.pop_back();
      }
    }
  };

  for (std::uint32_t x = 0; x < C; ++x) {
    if (dyn.color_probability(x) == 0) continue;
    prob[2] = dyn.color_probability(x);
    log.colors.assign(1, x);
    recurse(2);
  }
}

std::vector<Outcome> enumerate(const WeightSpec& spec, const std::vector<double>& mu, std::uint32_t n,
                               std::uint32_t n_limit) {
  std::vector<Outcome> out;
  for_each_outcome(
      OracleDynamics::base(spec, mu, n),
      [&](const EventLog& log, const mpq_class& p) { out.push_back({log, p}); }, n_limit);
  return out;
}

mpq_class exact_probability(const OracleDynamics& dyn, const EventLog& log) {
  replay_validate(log);
  const std::size_t C = dyn.num_colors();
  if (log.num_colors != C || log.n != dyn.n()) throw StructuralError("log does not match the dynamics");
  std::vector<std::uint32_t> indeg(log.n + 1, 0);
  mpq_class p = dyn.color_probability(log.color_of(1));
  for (const auto& e : log.events) {
    mpq_class total = 0;
    for (std::uint32_t i = 1; i < e.m; ++i) {
      total += dyn.weight(e.m, indeg[i], log.color_of(i) * C + e.child_color);
    }
    p *= dyn.color_probability(e.child_color);
    p *= dyn.weight(e.m, e.parent_indegree, e.parent_color * C + e.child_color);
    p /= total;
    ++indeg[e.parent];
  }
  return p;
}

std::vector<mpq_class> exact_attachment_measure(const EventLog& log) {
  const auto counts = attachment_counts(log);
  std::vector<mpq_class> out(counts.counts.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = mpq_class(static_cast<unsigned long>(counts.counts[i]), static_cast<unsigned long>(counts.total));
    out[i].canonicalize();
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

ExactLaw exact_law(const ExactStatistic& statistic, const WeightSpec& spec,
                   const std::vector<double>& mu, std::uint32_t n, std::uint32_t n_limit) {
  ExactLaw law;
  for_each_outcome(
      OracleDynamics::base(spec, mu, n),
      [&](const EventLog& log, const mpq_class& p) { law[statistic(log)] += p; }, n_limit);
  return law;
}

mpq_class exact_event_probability(const Predicate& event, const WeightSpec& spec,
                                  const std::vector<double>& mu, std::uint32_t n,
                                  std::uint32_t n_limit) {
  mpq_class total = 0;
  for_each_outcome(
      OracleDynamics::base(spec, mu, n),
      [&](const EventLog& log, const mpq_class& p) {
        if (event(log)) total += p;
      },
      n_limit);
  return total;
}

mpq_class exact_likelihood_ratio(const WeightSpec& spec, const std::vector<double>& mu,
                                 const Tilt& tilt, const EventLog& log) {
  replay_validate(log);
  const auto base = OracleDynamics::base(spec, mu, log.n);
  const auto tilted = OracleDynamics::tilted(spec, mu, tilt, log.n);
  const std::size_t C = base.num_colors();
  mpq_class colors = tilted.color_probability(log.color_of(1)) / base.color_probability(log.color_of(1));
  mpq_class weights = 1;
  mpq_class normalizers = 1;
  std::vector<std::uint32_t> indeg(log.n + 1, 0);
  for (const auto& e : log.events) {
    colors *= tilted.color_probability(e.child_color) / base.color_probability(e.child_color);
    const std::size_t a = e.parent_color * C + e.child_color;
    weights *= tilted.weight(e.m, e.parent_indegree, a) / base.weight(e.m, e.parent_indegree, a);
    mpq_class z = 0, zt = 0;
    for (std::uint32_t i = 1; i < e.m; ++i) {
      const std::size_t ai = log.color_of(i) * C + e.child_color;
      z += base.weight(e.m, indeg[i], ai);
      zt += tilted.weight(e.m, indeg[i], ai);
    }
    normalizers *= z / zt;
    ++indeg[e.parent];
  }
  return colors * weights * normalizers;
}

double log_rational(const mpq_class& q) {
  if (q <= 0) throw DomainError("log of a nonpositive rational");
  long en = 0, ed = 0;
  const double dn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  const double dd = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log(dn) - std::log(dd) + static_cast<double>(en - ed) * std::log(2.0);
}

std::string to_string(const mpq_class& q) { return q.get_str(); }

}  // namespace pa
