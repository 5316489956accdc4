#pragma once

// Exact enumeration of every attachment history of a small tree. Weights
// and color laws are taken as exact rationals: a double is a dyadic
// rational, so base dynamics are exact for any double gamma, beta, mu, and
// tilted dynamics use the double values of f~ and mu~ (mu~ renormalized in
// rationals).

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pa/event_log.hpp"
#include "pa/predicate.hpp"
#include "pa/tilt.hpp"
#include "pa/weights.hpp"

namespace pa {

class OracleDynamics {
 public:
  /// Untilted law P_f^(n).
  static OracleDynamics base(const WeightSpec& spec, const std::vector<double>& mu, std::uint32_t n);
  /// Tilted law with colors mu~ and weights f~.
  static OracleDynamics tilted(const WeightSpec& spec, const std::vector<double>& mu,
                               const Tilt& tilt, std::uint32_t n);

  std::size_t num_colors() const { return color_law_.size(); }
  std::uint32_t n() const { return n_; }
  const mpq_class& color_probability(std::size_t x) const { return color_law_[x]; }
  /// Weight at step m of a parent of in-degree k and color pair a.
  const mpq_class& weight(std::uint32_t m, std::uint32_t k, std::size_t pair) const;

 private:
  std::uint32_t n_ = 0;
  std::vector<mpq_class> color_law_;
  std::vector<std::size_t> bucket_of_step_;  // index m
  // weights_[b][k * num_pairs + a] for k <= n - 2
  std::vector<std::vector<mpq_class>> weights_;
};

/// Default limit: 10 for one color, 7 otherwise.
std::uint32_t default_oracle_limit(std::size_t num_colors);
/// |X|^n (n - 1)!, the number of leaves of the full choice tree.
double outcome_count_estimate(std::size_t num_colors, std::uint32_t n);

/// Depth-first visit of every outcome with positive probability, in
/// lexicographic order of (root color, then per step: child color, parent).
/// Throws DomainError when n exceeds n_limit (0 selects the default).
void for_each_outcome(const OracleDynamics& dynamics,
                      const std::function<void(const EventLog&, const mpq_class&)>& visit,
                      std::uint32_t n_limit = 0);

struct Outcome {
  EventLog log;
  mpq_class probability;
};

std::vector<Outcome> enumerate(const WeightSpec& spec, const std::vector<double>& mu, std::uint32_t n,
                               std::uint32_t n_limit = 0);

/// Probability of one history under the given dynamics.
mpq_class exact_probability(const OracleDynamics& dynamics, const EventLog& log);

/// Exact coordinates of M_X: counts / (n - 1) in layout [k * num_pairs + a],
/// trailing zeros removed so equal measures compare equal.
std::vector<mpq_class> exact_attachment_measure(const EventLog& log);

using ExactStatistic = std::function<std::vector<mpq_class>(const EventLog&)>;
using ExactLaw = std::map<std::vector<mpq_class>, mpq_class>;

ExactLaw exact_law(const ExactStatistic& statistic, const WeightSpec& spec,
                   const std::vector<double>& mu, std::uint32_t n, std::uint32_t n_limit = 0);

mpq_class exact_event_probability(const Predicate& event, const WeightSpec& spec,
                                  const std::vector<double>& mu, std::uint32_t n,
                                  std::uint32_t n_limit = 0);

/// dP~/dP at one history as the product of color, weight and normalizer
/// factors, in rationals.
mpq_class exact_likelihood_ratio(const WeightSpec& spec, const std::vector<double>& mu,
                                 const Tilt& tilt, const EventLog& log);

/// Natural logarithm of a positive rational, accurate for huge numerators
/// and denominators.
double log_rational(const mpq_class& q);

std::string to_string(const mpq_class& q);

}  // namespace pa
