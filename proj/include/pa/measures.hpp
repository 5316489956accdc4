#pragma once

// Probability measures on the nonnegative integers (degrees), on
// degree x color-pair, and time-indexed paths of per-pair degree laws.
// All logarithms are natural.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pa {

inline constexpr double kMassTolerance = 1e-12;

/// Compensated (Neumaier) sum.
double stable_sum(std::span<const double> xs);

/// Finitely truncated probability measure on {0, 1, ..., kmax} with the
/// mass beyond kmax kept as a single tail coordinate.
class DegreeMeasure {
 public:
  DegreeMeasure() : probs_{1.0}, tail_(0.0) {}
  explicit DegreeMeasure(std::vector<double> probs, double tail_mass = 0.0);

  static DegreeMeasure delta(std::size_t k, std::size_t kmax);
  /// Renormalizes nonnegative weights (tail included) to total mass one.
  static DegreeMeasure normalized(std::vector<double> weights, double tail_weight = 0.0);

  std::size_t kmax() const { return probs_.size() - 1; }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t k) const { return k < probs_.size() ? probs_[k] : 0.0; }
  double tail_mass() const { return tail_; }
  double mean() const;  // body only

  /// Re-truncate at kmax: extends with zero atoms or folds atoms above kmax
  /// into the tail coordinate.
  DegreeMeasure truncated(std::size_t kmax) const;

  friend bool operator==(const DegreeMeasure&, const DegreeMeasure&) = default;

 private:
  std::vector<double> probs_;
  double tail_;
};

/// Probability measure on degree x color-pair. A color pair a = (a1, a2)
/// (parent color, child color) is stored at index a1 * num_colors + a2.
/// Each pair may carry its own tail mass beyond kmax.
class PairMeasure {
 public:
  PairMeasure(std::size_t num_colors, std::size_t kmax, std::vector<double> atoms,
              std::vector<double> tails = {});

  /// omega(k, a) = pair_weights(a) * conditionals[a](k); conditionals are
  /// re-truncated to a common kmax.
  static PairMeasure from_conditionals(std::size_t num_colors, std::span<const double> pair_weights,
                                       std::span<const DegreeMeasure> conditionals);
  static PairMeasure product(const DegreeMeasure& degree, std::size_t num_colors,
                             std::span<const double> pair_weights);

  std::size_t num_colors() const { return num_colors_; }
  std::size_t num_pairs() const { return num_colors_ * num_colors_; }
  std::size_t kmax() const { return kmax_; }
  double atom(std::size_t k, std::size_t pair) const { return atoms_[k * num_pairs() + pair]; }
  double tail(std::size_t pair) const { return tails_[pair]; }
  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> tails() const { return tails_; }

  std::size_t pair_index(std::size_t parent_color, std::size_t child_color) const {
    return parent_color * num_colors_ + child_color;
  }

  /// omega_2(a) = sum_k omega(k, a) (tail included).
  std::vector<double> pair_marginal() const;
  /// omega_{2,1}(x) = sum of omega_2(a) over pairs whose child color is x.
  std::vector<double> color_marginal() const;
  DegreeMeasure degree_marginal() const;

  bool has_conditional(std::size_t pair) const;
  /// omega(. | a); throws UndefinedConditional for zero-mass pairs.
  DegreeMeasure conditional(std::size_t pair) const;

  friend bool operator==(const PairMeasure&, const PairMeasure&) = default;

 private:
  std::size_t num_colors_;
  std::size_t kmax_;
  std::vector<double> atoms_;
  std::vector<double> tails_;
};

/// Time-gridded family of per-pair degree laws nu_t(. | a) plus per-time
/// color-pair weights. grid[0] = 0, grid.back() = 1. On the interval
/// (grid[i-1], grid[i]] the path takes the value of snapshot i. A snapshot
/// may be absent for a pair whose class is still empty.
class PathMeasure {
 public:
  using Snapshot = std::vector<std::optional<DegreeMeasure>>;

  PathMeasure(std::size_t num_colors, std::vector<double> grid, std::vector<Snapshot> snapshots,
              std::vector<std::vector<double>> pair_weights);

  static PathMeasure constant(std::size_t num_colors, std::vector<double> grid,
                              const Snapshot& conditionals, const std::vector<double>& pair_weights);

  std::size_t num_colors() const { return num_colors_; }
  std::size_t num_pairs() const { return num_colors_ * num_colors_; }
  std::span<const double> grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  const Snapshot& snapshot(std::size_t i) const { return snapshots_[i]; }
  const std::vector<double>& pair_weights(std::size_t i) const { return pair_weights_[i]; }
  const Snapshot& final_snapshot() const { return snapshots_.back(); }

 private:
  std::size_t num_colors_;
  std::vector<double> grid_;
  std::vector<Snapshot> snapshots_;
  std::vector<std::vector<double>> pair_weights_;
};

/// sum_k p(k) log(p(k)/q(k)) over k <= kmax plus the aggregated tail
/// coordinate. q need not be normalized. Returns +inf on a support violation.
double relative_entropy(const DegreeMeasure& p, std::span<const double> q, double q_tail);
double relative_entropy(const DegreeMeasure& p, const DegreeMeasure& q);
/// Body-only variant: the tail coordinate of p is not charged.
double relative_entropy_truncated(const DegreeMeasure& p, std::span<const double> q);
/// Relative entropy of finite vectors (e.g. color laws).
double relative_entropy(std::span<const double> p, std::span<const double> q);

double tv_distance(const DegreeMeasure& p, const DegreeMeasure& q);
double tv_distance(const PairMeasure& p, const PairMeasure& q);
double tv_distance(std::span<const double> p, std::span<const double> q);

/// l_hat(k) = 1 - sum_{j<=k} l(j), evaluated as the suffix sum
/// tail_mass + sum_{j>k} l(j).
std::vector<double> tail(const DegreeMeasure& l);

}  // namespace pa
