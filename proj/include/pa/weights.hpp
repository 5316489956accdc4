#pragma once

// Linear attachment weights f_t(k, a) = gamma(t, a) k + beta(t, a),
// piecewise constant in t on a partition of (0, 1] into buckets.

#include <cstddef>
#include <string>
#include <vector>

namespace pa {

struct ValidationIssue {
  std::string condition;
  std::size_t bucket = 0;
  std::size_t pair = 0;
  std::string message;
};

struct ValidationReport {
  std::vector<std::string> checked;
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool failed(const std::string& condition) const;
  std::string summary() const;
};

class WeightSpec {
 public:
  /// gamma[b][a], beta[b][a] with a = a1 * num_colors + a2; bucket_ends
  /// holds the right endpoints of the buckets, the last one being 1.
  WeightSpec(std::vector<std::string> colors, std::vector<double> bucket_ends,
             std::vector<std::vector<double>> gamma, std::vector<std::vector<double>> beta,
             bool allow_zero_beta = false);

  /// Single color, single bucket.
  static WeightSpec plain(double gamma, double beta);
  /// Color-independent weights over num_colors colors, single bucket.
  static WeightSpec uniform_colors(std::size_t num_colors, double gamma, double beta);

  std::size_t num_colors() const { return colors_.size(); }
  std::size_t num_pairs() const { return colors_.size() * colors_.size(); }
  std::size_t num_buckets() const { return bucket_ends_.size(); }
  const std::vector<std::string>& colors() const { return colors_; }
  const std::vector<double>& bucket_ends() const { return bucket_ends_; }
  double bucket_start(std::size_t b) const { return b == 0 ? 0.0 : bucket_ends_[b - 1]; }
  double bucket_length(std::size_t b) const { return bucket_ends_[b] - bucket_start(b); }
  bool allow_zero_beta() const { return allow_zero_beta_; }
  bool is_time_constant() const { return bucket_ends_.size() == 1; }

  double gamma(std::size_t bucket, std::size_t pair) const { return gamma_[bucket][pair]; }
  double beta(std::size_t bucket, std::size_t pair) const { return beta_[bucket][pair]; }
  /// c_b = gamma_b(a) + beta_b(a), read off pair 0.
  double c(std::size_t bucket) const { return gamma_[bucket][0] + beta_[bucket][0]; }

  /// Bucket b with start < t <= end; throws DomainError outside (0, 1].
  std::size_t bucket_of(double t) const;

  double weight(std::size_t bucket, std::size_t k, std::size_t pair) const {
    return gamma_[bucket][pair] * static_cast<double>(k) + beta_[bucket][pair];
  }
  double evaluate(double t, std::size_t k, std::size_t pair) const {
    return weight(bucket_of(t), k, pair);
  }

 private:
  std::vector<std::string> colors_;
  std::vector<double> bucket_ends_;
  std::vector<std::vector<double>> gamma_;
  std::vector<std::vector<double>> beta_;
  bool allow_zero_beta_;
};

/// Checks every standing assumption: positive gamma, beta > 0 (or >= 0 when
/// allowed), gamma + beta constant across pairs per bucket, min c >= 1,
/// divergence of sum 1/f and integrability of log(1 + beta/gamma).
ValidationReport validate(const WeightSpec& spec);

/// Throws ValidationError carrying the report summary when validation fails.
void require_valid(const WeightSpec& spec);

/// Color law: strictly positive probability vector.
void require_color_law(const std::vector<double>& mu, std::size_t num_colors);

}  // namespace pa
