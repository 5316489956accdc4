#pragma once

// Change of measure for the attachment model: exact log-likelihood ratios,
// importance-sampling and naive estimators, the target-driven tilt and a
// finite-n decay-rate scan.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pa/event_log.hpp"
#include "pa/measures.hpp"
#include "pa/predicate.hpp"
#include "pa/tilt.hpp"
#include "pa/weights.hpp"

namespace pa {

/// log dP~/dP at the realized history: color factors, weight factors at the
/// chosen parents and the per-step normalizer ratios, by exact replay.
/// Throws CorruptedLog when the log does not replay.
double log_likelihood_ratio(const EventLog& log, const Tilt& tilt, const WeightSpec& spec,
                            const std::vector<double>& mu);

struct ISEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  double ess = 0.0;
  std::size_t reps = 0;
  std::size_t excluded = 0;
  std::size_t hits = 0;
  /// Mean of exp(-LLR) over finite replicas and its standard error.
  double mean_weight = 0.0;
  double mean_weight_std_error = 0.0;
};

struct NaiveEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::size_t hits = 0;
  std::size_t reps = 0;
};

/// Replica r uses stream r of the master seed. Throws EstimationError when
/// more than 0.1% of replicas carry non-finite weights.
ISEstimate is_estimate(const Predicate& event, const WeightSpec& spec, const std::vector<double>& mu,
                       const Tilt& tilt, std::uint32_t n, std::size_t reps, std::uint64_t seed,
                       std::size_t threads = 1);

/// Frequency estimate; std_error is the sample standard error
/// sqrt(p (1 - p) / (reps - 1)).
NaiveEstimate naive_estimate(const Predicate& event, const WeightSpec& spec,
                             const std::vector<double>& mu, std::uint32_t n, std::size_t reps,
                             std::uint64_t seed, std::size_t threads = 1);

struct SuggestOptions {
  /// Value used where the target has no mass (log 0).
  double log_floor = -30.0;
  double g_default = 0.0;
};

/// g(k, a) = log(f(k, a) omega(k|a) / (c nu(k|a))) where nu(k|a) > 0, else 0,
/// on degrees 0..omega.kmax(); h(x) = log(omega_{2,1}(x) / mu(x)). The
/// baseline defaults to pi_f conditionals per bucket; a path baseline
/// contributes, for each bucket, its snapshot at the bucket's right end.
/// Throws DomainError listing (k, a1, a2) where omega > 0 but nu = 0.
Tilt suggest_tilt(const PairMeasure& target, const WeightSpec& spec, const std::vector<double>& mu,
                  const PathMeasure* baseline = nullptr, const SuggestOptions& options = {});
/// Plain-model form for a target degree law.
Tilt suggest_tilt(const DegreeMeasure& target, const WeightSpec& spec,
                  const SuggestOptions& options = {});
/// Plain-model form with an explicit degree-law baseline, used in every bucket.
Tilt suggest_tilt(const DegreeMeasure& target, const DegreeMeasure& baseline, const WeightSpec& spec,
                  const SuggestOptions& options = {});

/// Vertex in-degree law consistent with an attachment law x in a tree:
/// nu(0) = 1 - x(0), nu(k) = x(k-1) - x(k), tail x(kmax). Throws DomainError
/// unless x is non-increasing.
DegreeMeasure implied_vertex_law(const DegreeMeasure& attachment);

/// Importance-sampling tilt for a plain-model event. For M clauses the
/// optimizer's l* is the target attachment law against its implied vertex
/// law; for V clauses l* is the vertex law against P(degree > k).
Tilt event_tilt(const Predicate& event, const WeightSpec& spec, std::size_t kmax,
                std::uint64_t seed = 1, std::size_t threads = 1, DegreeMeasure* l_star = nullptr);

struct DecayScanConfig {
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::uint32_t oracle_limit = 0;  // 0 = default per alphabet size
  const Tilt* tilt = nullptr;      // importance sampling beyond the oracle when set
  std::optional<double> rate_prediction;
};

struct DecayRow {
  std::uint32_t n = 0;
  double p_hat = 0.0;
  double std_error = 0.0;
  std::string method;  // "oracle", "naive" or "is"
  std::string exact;   // rational probability for oracle rows
  double decay = 0.0;  // -log(p_hat) / n
  std::optional<double> rate_prediction;
};

std::vector<DecayRow> decay_rate_scan(const Predicate& event, const std::vector<std::uint32_t>& n_list,
                                      const WeightSpec& spec, const std::vector<double>& mu,
                                      const DecayScanConfig& config = {});

}  // namespace pa
