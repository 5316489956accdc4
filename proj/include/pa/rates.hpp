#pragma once

// Limit degree law pi_f and the rate functionals of the attachment model:
//   I(l)        = H(l || (c/f) l_hat)
//   J(w)        = H(w_{2,1} || mu) + sum_a w_2(a) H(w(.|a) || (c/f) w_hat(.|a))
//   K_nu(w)     = H(w_{2,1} || mu) + sum_a w_2(a) int H(w(.|a) || (c_t/f_t) nu_t(.|a)) dt
//   J~(w, nu)   = K_nu(w) if w = nu_1, +inf otherwise
// plus a coordinate-ascent lower estimate of the variational functional K^.
// References are not normalized, so I and J can be negative.

#include <cstddef>
#include <vector>

#include "pa/measures.hpp"
#include "pa/weights.hpp"

namespace pa {

struct RateValue {
  double value = 0.0;
  /// Estimated contribution of the mass beyond the truncation; zero when
  /// the evaluated measure has no tail mass.
  double tail_bound = 0.0;
  std::vector<double> terms;
};

/// pi_f(k) = c/(c + f(k)) prod_{i<k} f(i)/(c + f(i)); the tail coordinate is
/// the running product at kmax + 1.
DegreeMeasure pi_f(double gamma, double beta, std::size_t kmax);
/// Requires a single time bucket.
DegreeMeasure pi_f(const WeightSpec& spec, std::size_t pair, std::size_t kmax);

/// rho(k) = (c / f(k)) l_hat(k).
std::vector<double> rate_I_reference(const DegreeMeasure& l, double gamma, double beta);
RateValue rate_I(const DegreeMeasure& l, double gamma, double beta);

struct JensenFloor {
  double reference_mass = 0.0;  // sum_k rho(k)
  double floor = 0.0;           // s log(s / reference_mass), s = body mass of l
};
/// Log-sum lower bound on rate_I; equals -log(sum rho) when l has no tail.
JensenFloor jensen_floor(const DegreeMeasure& l, double gamma, double beta);

/// Requires a single time bucket.
RateValue rate_J(const PairMeasure& omega, const std::vector<double>& mu, const WeightSpec& spec);

/// K_nu(omega). nu's grid must contain every bucket boundary of spec; on
/// (t_{i-1}, t_i] the path takes snapshot i and the weights of the bucket
/// holding the interval midpoint.
RateValue k_functional(const PairMeasure& omega, const PathMeasure& nu,
                       const std::vector<double>& mu, const WeightSpec& spec);

struct PathRate {
  RateValue rate;
  bool matched = false;      // omega = nu_1 within the tolerance
  double match_distance = 0; // max over pairs of TV(omega(.|a), nu_1(.|a))
};
PathRate rate_J_tilde(const PairMeasure& omega, const PathMeasure& nu,
                      const std::vector<double>& mu, const WeightSpec& spec,
                      double path_match_tol = 1e-9);

struct VariationalOptions {
  std::size_t max_sweeps = 20000;
  double tol = 1e-15;
  double bound = 60.0;  // |g|, |h| box
};

struct VariationalResult {
  double value = 0.0;
  std::vector<double> h;
  /// g[i][k * num_pairs + a] on path interval i (between grid[i] and grid[i+1]).
  std::vector<std::vector<double>> g;
  std::size_t sweeps = 0;
  bool converged = false;
};

/// Bracketed objective of K^ at a given tilt (h on colors, g per path
/// interval on degrees 0..omega.kmax(); degrees above use g = 0).
double k_hat_objective(const PairMeasure& omega, const PathMeasure& nu,
                       const std::vector<double>& mu, const WeightSpec& spec,
                       const std::vector<double>& h, const std::vector<std::vector<double>>& g);

/// Coordinate ascent from h = g = 0. Returns the best objective value found,
/// a lower estimate of the supremum. omega must have no tail mass.
VariationalResult variational_K_hat(const PairMeasure& omega, const PathMeasure& nu,
                                    const std::vector<double>& mu, const WeightSpec& spec,
                                    const VariationalOptions& options = {});

}  // namespace pa
