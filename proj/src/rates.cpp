#include "pa/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pa/errors.hpp"

namespace pa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_single_bucket(const WeightSpec& spec, const char* what) {
  if (!spec.is_time_constant()) {
    throw DomainError(std::string(what) + " requires time-constant weights (one bucket)");
  }
}

// Compensated suffix sums T_k = tail + sum_{j>k} v_j.
std::vector<double> suffix_sums(std::span<const double> v, double tail_mass) {
  std::vector<double> out(v.size());
  double acc = tail_mass;
  double comp = 0.0;
  for (std::size_t k = v.size(); k-- > 0;) {
    out[k] = acc - comp;
    const double y = v[k] - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return out;
}

// sum_k v_k log(v_k f_k / (c T_k)) for an unnormalized column v with tail
// mass beyond the body. Scale-invariant inside the log, so the same routine
// serves I (v = l) and the per-pair terms of J (v = omega(., a)).
RateValue scaled_tail_entropy(std::span<const double> v, double tail_mass, double gamma,
                              double beta) {
  RateValue r;
  const double c = gamma + beta;
  const auto T = suffix_sums(v, tail_mass);
  r.terms.assign(v.size(), 0.0);
  double last_ratio = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] <= 0.0) continue;
    const double f = gamma * static_cast<double>(k) + beta;
    if (T[k] <= 0.0 || f <= 0.0) {
      r.terms[k] = kInf;
      continue;
    }
    last_ratio = std::log(v[k] * f / (c * T[k]));
    r.terms[k] = v[k] * last_ratio;
  }
  r.value = stable_sum(r.terms);
  if (std::any_of(r.terms.begin(), r.terms.end(), [](double x) { return std::isinf(x); })) {
    r.value = kInf;
  }
  if (tail_mass > 0.0) r.tail_bound = tail_mass * std::max(1.0, std::abs(last_ratio));
  return r;
}

std::vector<double> normalized(std::vector<double> v) {
  const double s = stable_sum(v);
  if (s > 0.0) {
    for (double& x : v) x /= s;
  }
  return v;
}

// Weights and buckets of each path interval i = 1..G, checked against the
// bucket partition.
struct Interval {
  double length;
  std::size_t bucket;
};

std::vector<Interval> path_intervals(const PathMeasure& nu, const WeightSpec& spec) {
  const auto grid = nu.grid();
  std::vector<Interval> out;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const std::size_t b = spec.bucket_of(0.5 * (grid[i - 1] + grid[i]));
    if (spec.bucket_of(grid[i]) != b || (grid[i - 1] > 0.0 && grid[i - 1] < spec.bucket_start(b) - 1e-15)) {
      throw DomainError("path grid does not refine the weight buckets");
    }
    out.push_back({grid[i] - grid[i - 1], b});
  }
  return out;
}

void check_alphabets(const PairMeasure& omega, const PathMeasure* nu, const std::vector<double>& mu,
                     const WeightSpec& spec) {
  if (omega.num_colors() != spec.num_colors()) {
    throw StructuralError("pair measure and weights use different color alphabets");
  }
  if (nu != nullptr && nu->num_colors() != spec.num_colors()) {
    throw StructuralError("path measure and weights use different color alphabets");
  }
  require_color_law(mu, spec.num_colors());
}

double color_term(const PairMeasure& omega, const std::vector<double>& mu) {
  const auto w21 = normalized(omega.color_marginal());
  return relative_entropy(std::span<const double>(w21), std::span<const double>(mu));
}

// omega(.|a) and nu(.|a) on a common truncation.
std::pair<DegreeMeasure, DegreeMeasure> common(const DegreeMeasure& p, const DegreeMeasure& q) {
  const std::size_t K = std::max(p.kmax(), q.kmax());
  return {p.truncated(K), q.truncated(K)};
}

// Body-only H(p || (c/f) q) plus a tail estimate.
std::pair<double, double> tilted_reference_entropy(const DegreeMeasure& p, const DegreeMeasure& q,
                                                   const WeightSpec& spec, std::size_t bucket,
                                                   std::size_t pair) {
  auto [pp, qq] = common(p, q);
  std::vector<double> ref(pp.kmax() + 1);
  for (std::size_t k = 0; k <= pp.kmax(); ++k) {
    const double f = spec.weight(bucket, k, pair);
    ref[k] = f > 0.0 ? spec.c(bucket) / f * qq[k] : (qq[k] > 0.0 ? kInf : 0.0);
  }
  const double value = relative_entropy_truncated(pp, ref);
  double bound = 0.0;
  if (pp.tail_mass() > 0.0) {
    double last = 0.0;
    for (std::size_t k = pp.kmax() + 1; k-- > 0;) {
      if (pp[k] > 0.0 && ref[k] > 0.0 && std::isfinite(ref[k])) {
        last = std::log(pp[k] / ref[k]);
        break;
      }
    }
    bound = pp.tail_mass() * std::max(1.0, std::abs(last));
  }
  return {value, bound};
}

}  // namespace

DegreeMeasure pi_f(double gamma, double beta, std::size_t kmax) {
  const double c = gamma + beta;
  std::vector<double> probs(kmax + 1);
  double prod = 1.0;
  for (std::size_t k = 0; k <= kmax; ++k) {
    const double f = gamma * static_cast<double>(k) + beta;
    probs[k] = prod * c / (c + f);
    prod *= f / (c + f);
  }
  return DegreeMeasure(std::move(probs), prod);
}

DegreeMeasure pi_f(const WeightSpec& spec, std::size_t pair, std::size_t kmax) {
  require_single_bucket(spec, "pi_f");
  if (pair >= spec.num_pairs()) throw StructuralError("color pair out of range");
  return pi_f(spec.gamma(0, pair), spec.beta(0, pair), kmax);
}

std::vector<double> rate_I_reference(const DegreeMeasure& l, double gamma, double beta) {
  const double c = gamma + beta;
  auto rho = tail(l);
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const double f = gamma * static_cast<double>(k) + beta;
    rho[k] = f > 0.0 ? c / f * rho[k] : (rho[k] > 0.0 ? kInf : 0.0);
  }
  return rho;
}

RateValue rate_I(const DegreeMeasure& l, double gamma, double beta) {
  return scaled_tail_entropy(l.probs(), l.tail_mass(), gamma, beta);
}

JensenFloor jensen_floor(const DegreeMeasure& l, double gamma, double beta) {
  JensenFloor j;
  j.reference_mass = stable_sum(rate_I_reference(l, gamma, beta));
  const double s = stable_sum(l.probs());
  j.floor = s > 0.0 ? s * std::log(s / j.reference_mass) : 0.0;
  return j;
}

RateValue rate_J(const PairMeasure& omega, const std::vector<double>& mu, const WeightSpec& spec) {
  require_single_bucket(spec, "rate_J");
  check_alphabets(omega, nullptr, mu, spec);
  RateValue r;
  const std::size_t P = omega.num_pairs();
  r.terms.push_back(color_term(omega, mu));
  std::vector<double> column(omega.kmax() + 1);
  for (std::size_t a = 0; a < P; ++a) {
    for (std::size_t k = 0; k <= omega.kmax(); ++k) column[k] = omega.atom(k, a);
    const auto part = scaled_tail_entropy(column, omega.tail(a), spec.gamma(0, a), spec.beta(0, a));
    r.terms.push_back(part.value);
    r.tail_bound += part.tail_bound;
  }
  r.value = std::any_of(r.terms.begin(), r.terms.end(), [](double x) { return std::isinf(x); })
                ? kInf
                : stable_sum(r.terms);
  return r;
}

RateValue k_functional(const PairMeasure& omega, const PathMeasure& nu,
                       const std::vector<double>& mu, const WeightSpec& spec) {
  check_alphabets(omega, &nu, mu, spec);
  const auto intervals = path_intervals(nu, spec);
  const auto w2 = omega.pair_marginal();
  RateValue r;
  r.terms.push_back(color_term(omega, mu));
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& snap = nu.snapshot(i + 1);
    double part = 0.0;
    for (std::size_t a = 0; a < omega.num_pairs(); ++a) {
      if (w2[a] <= 0.0) continue;
      if (!snap[a]) {
        part = kInf;
        continue;
      }
      const auto [h, bound] =
          tilted_reference_entropy(omega.conditional(a), *snap[a], spec, intervals[i].bucket, a);
      part += w2[a] * h;
      r.tail_bound += intervals[i].length * w2[a] * bound;
    }
    r.terms.push_back(intervals[i].length * part);
  }
  r.value = std::any_of(r.terms.begin(), r.terms.end(), [](double x) { return std::isinf(x); })
                ? kInf
                : stable_sum(r.terms);
  return r;
}

PathRate rate_J_tilde(const PairMeasure& omega, const PathMeasure& nu,
                      const std::vector<double>& mu, const WeightSpec& spec,
                      double path_match_tol) {
  check_alphabets(omega, &nu, mu, spec);
  PathRate out;
  const auto w2 = omega.pair_marginal();
  const auto& last = nu.final_snapshot();
  for (std::size_t a = 0; a < omega.num_pairs(); ++a) {
    if (w2[a] <= 0.0) continue;
    if (!last[a]) {
      out.match_distance = 1.0;
      continue;
    }
    auto [p, q] = common(omega.conditional(a), *last[a]);
    out.match_distance = std::max(out.match_distance, tv_distance(p, q));
  }
  out.matched = out.match_distance <= path_match_tol;
  if (!out.matched) {
    path_intervals(nu, spec);
    out.rate.value = kInf;
    return out;
  }
  out.rate = k_functional(omega, nu, mu, spec);
  return out;
}

namespace {

// Data of one log-partition block: phi(g) = <p, g> - log(<e^g, q> + rest).
struct Block {
  std::vector<double> p;
  std::vector<double> q;
  double rest = 0.0;
};

double block_value(const Block& blk, const std::vector<double>& g) {
  double lin = 0.0;
  double z = blk.rest;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (blk.p[k] > 0.0) lin += blk.p[k] * g[k];
    z += std::exp(g[k]) * blk.q[k];
  }
  if (z <= 0.0) return kInf;
  return lin - std::log(z);
}

// Coordinate ascent with a uniform upward shift when rest > 0; returns the
// sweeps used and whether the increments fell below tol.
std::pair<std::size_t, bool> ascend(const Block& blk, std::vector<double>& g,
                                    const VariationalOptions& opt) {
  const double B = opt.bound;
  double value = block_value(blk, g);
  for (std::size_t sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    double z = blk.rest;
    for (std::size_t k = 0; k < g.size(); ++k) z += std::exp(g[k]) * blk.q[k];
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double own = std::exp(g[k]) * blk.q[k];
      const double R = std::max(z - own, 0.0);
      double next = g[k];
      if (blk.p[k] <= 0.0) {
        next = -B;
      } else if (blk.q[k] <= 0.0 || blk.p[k] >= 1.0) {
        next = B;
      } else if (R > 0.0) {
        next = std::log(blk.p[k] * R / ((1.0 - blk.p[k]) * blk.q[k]));
      }
      next = std::clamp(next, -B, B);
      z = R + std::exp(next) * blk.q[k];
      g[k] = next;
    }
    if (blk.rest > 0.0) {
      const double top = *std::max_element(g.begin(), g.end());
      if (top < B) {
        for (double& x : g) x = std::min(x + (B - top), B);
      }
    }
    const double next_value = block_value(blk, g);
    const double gain = next_value - value;
    value = next_value;
    if (gain <= opt.tol * std::max(1.0, std::abs(value))) return {sweep, true};
  }
  return {opt.max_sweeps, false};
}

struct VariationalData {
  Block colors;
  std::vector<double> w2;
  std::vector<Interval> intervals;
  // blocks[i][a]; empty p when the pair carries no omega mass.
  std::vector<std::vector<Block>> blocks;
  std::vector<double> constant;  // per interval: -2<log f_b, omega> + log c_b
  bool infinite = false;
};

VariationalData prepare(const PairMeasure& omega, const PathMeasure& nu,
                        const std::vector<double>& mu, const WeightSpec& spec) {
  check_alphabets(omega, &nu, mu, spec);
  for (std::size_t a = 0; a < omega.num_pairs(); ++a) {
    if (omega.tail(a) > 0.0) throw DomainError("variational_K_hat needs omega without tail mass");
  }
  VariationalData d;
  d.colors.p = normalized(omega.color_marginal());
  d.colors.q = mu;
  d.w2 = omega.pair_marginal();
  d.intervals = path_intervals(nu, spec);
  const std::size_t K = omega.kmax();
  const std::size_t P = omega.num_pairs();
  for (std::size_t i = 0; i < d.intervals.size(); ++i) {
    const std::size_t b = d.intervals[i].bucket;
    const auto& snap = nu.snapshot(i + 1);
    std::vector<Block> row(P);
    double logf = 0.0;
    for (std::size_t a = 0; a < P; ++a) {
      if (d.w2[a] <= 0.0) continue;
      if (!snap[a]) {
        d.infinite = true;
        continue;
      }
      const auto cond = omega.conditional(a);
      const auto& v = *snap[a];
      Block& blk = row[a];
      blk.p.assign(cond.probs().begin(), cond.probs().end());
      blk.q.assign(K + 1, 0.0);
      for (std::size_t k = 0; k <= std::min(K, v.kmax()); ++k) {
        const double f = spec.weight(b, k, a);
        blk.q[k] = f > 0.0 ? v[k] / f : (v[k] > 0.0 ? kInf : 0.0);
      }
      for (std::size_t k = K + 1; k <= v.kmax(); ++k) blk.rest += v[k] / spec.weight(b, k, a);
      if (v.tail_mass() > 0.0) blk.rest += v.tail_mass() / spec.weight(b, v.kmax() + 1, a);
      for (std::size_t k = 0; k <= K; ++k) {
        const double w = omega.atom(k, a);
        if (w <= 0.0) continue;
        const double f = spec.weight(b, k, a);
        if (f <= 0.0) d.infinite = true;
        else logf += w * std::log(f);
      }
    }
    d.blocks.push_back(std::move(row));
    d.constant.push_back(-2.0 * logf + std::log(spec.c(b)));
  }
  return d;
}

double assemble(const VariationalData& d, double color_value,
                const std::vector<std::vector<double>>& block_values) {
  if (d.infinite) return kInf;
  double total = color_value;
  for (std::size_t i = 0; i < d.intervals.size(); ++i) {
    double inner = d.constant[i];
    for (std::size_t a = 0; a < d.w2.size(); ++a) {
      if (d.w2[a] > 0.0) inner += d.w2[a] * block_values[i][a];
    }
    total += d.intervals[i].length * inner;
  }
  return total;
}

}  // namespace

double k_hat_objective(const PairMeasure& omega, const PathMeasure& nu,
                       const std::vector<double>& mu, const WeightSpec& spec,
                       const std::vector<double>& h, const std::vector<std::vector<double>>& g) {
  const auto d = prepare(omega, nu, mu, spec);
  if (h.size() != mu.size() || g.size() != d.intervals.size()) {
    throw StructuralError("tilt tables do not match the path or alphabet");
  }
  const std::size_t P = omega.num_pairs();
  const std::size_t K = omega.kmax();
  std::vector<std::vector<double>> values(d.intervals.size(), std::vector<double>(P, 0.0));
  for (std::size_t i = 0; i < d.intervals.size(); ++i) {
    if (g[i].size() != (K + 1) * P) throw StructuralError("g table has the wrong size");
    for (std::size_t a = 0; a < P; ++a) {
      if (d.blocks[i][a].p.empty()) continue;
      std::vector<double> col(K + 1);
      for (std::size_t k = 0; k <= K; ++k) col[k] = g[i][k * P + a];
      values[i][a] = block_value(d.blocks[i][a], col);
    }
  }
  return assemble(d, block_value(d.colors, h), values);
}

VariationalResult variational_K_hat(const PairMeasure& omega, const PathMeasure& nu,
                                    const std::vector<double>& mu, const WeightSpec& spec,
                                    const VariationalOptions& options) {
  if (options.max_sweeps == 0) {
    throw DomainError("variational_K_hat: iteration budget exhausted before the first ascent step");
  }
  const auto d = prepare(omega, nu, mu, spec);
  const std::size_t P = omega.num_pairs();
  const std::size_t K = omega.kmax();
  VariationalResult res;
  res.converged = true;
  res.h.assign(mu.size(), 0.0);
  auto [sweeps, ok] = ascend(d.colors, res.h, options);
  res.sweeps = sweeps;
  res.converged = ok;
  std::vector<std::vector<double>> values(d.intervals.size(), std::vector<double>(P, 0.0));
  res.g.assign(d.intervals.size(), std::vector<double>((K + 1) * P, 0.0));
  for (std::size_t i = 0; i < d.intervals.size(); ++i) {
    for (std::size_t a = 0; a < P; ++a) {
      const Block& blk = d.blocks[i][a];
      if (blk.p.empty()) continue;
      std::vector<double> col(K + 1, 0.0);
      auto [s, c] = ascend(blk, col, options);
      res.sweeps = std::max(res.sweeps, s);
      res.converged = res.converged && c;
      values[i][a] = block_value(blk, col);
      for (std::size_t k = 0; k <= K; ++k) res.g[i][k * P + a] = col[k];
    }
  }
  res.value = assemble(d, block_value(d.colors, res.h), values);
  return res;
}

}  // namespace pa
