#pragma once

// Exponential change of measure for the colored attachment model:
// colors are drawn from mu~(a) = exp(h(a) - U(h)) mu(a) and parents with
// probability proportional to f~_t(k, a) = (c_t / f_t(k, a)) exp(g_t(k, a)).

#include <cstddef>
#include <vector>

#include "pa/weights.hpp"

namespace pa {

class Tilt {
 public:
  /// g[b][k * num_pairs + a] for k <= k_g; g_default applies for k > k_g.
  Tilt(std::vector<double> h, std::vector<std::vector<double>> g, std::size_t k_g,
       std::size_t num_pairs, double g_default = 0.0);

  /// The canonical identity tilt g = 2 log f - log c, h = 0, tabulated up to
  /// k_g and flagged so that f~ evaluates to f exactly at every degree.
  static Tilt identity(const WeightSpec& spec, std::size_t k_g = 32);
  /// g = h = 0.
  static Tilt zero(const WeightSpec& spec, std::size_t k_g = 0);

  bool is_identity() const { return identity_; }
  std::size_t k_g() const { return k_g_; }
  std::size_t num_buckets() const { return g_.size(); }
  std::size_t num_pairs() const { return num_pairs_; }
  double g_default() const { return g_default_; }
  const std::vector<double>& h() const { return h_; }
  double g(std::size_t bucket, std::size_t k, std::size_t pair) const {
    return k <= k_g_ ? g_[bucket][k * num_pairs_ + pair] : g_default_;
  }

  /// U(h) = log sum_a exp(h(a)) mu(a).
  double log_normalizer(const std::vector<double>& mu) const;
  std::vector<double> tilted_colors(const std::vector<double>& mu) const;
  double tilted_weight(const WeightSpec& spec, std::size_t bucket, std::size_t k,
                       std::size_t pair) const;

  /// Throws unless the tables match the spec's alphabet and buckets.
  void check_compatible(const WeightSpec& spec) const;

 private:
  std::vector<double> h_;
  std::vector<std::vector<double>> g_;
  std::size_t k_g_;
  std::size_t num_pairs_;
  double g_default_;
  bool identity_ = false;
};

}  // namespace pa
