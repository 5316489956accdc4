#pragma once

// Constrained minimization of the degree rate over the truncated simplex
// {l(0), ..., l(K), tail} and the colored-to-plain contraction check.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pa/measures.hpp"
#include "pa/predicate.hpp"
#include "pa/weights.hpp"

namespace pa {

struct MinimizeOptions {
  double tol = 1e-8;  // stationarity residual
  std::size_t max_iter = 50000;
  std::size_t starts = 8;  // pi_f start plus starts - 1 Dirichlet draws
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

struct StartResult {
  double value = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
};

struct MinimizeResult {
  DegreeMeasure l_star;
  double value = 0.0;
  double residual = 0.0;
  bool converged = false;
  std::size_t best_start = 0;
  std::vector<StartResult> starts;
};

/// Box bounds lo <= l(k) <= hi per coordinate (tail last) from the clauses.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};
Box constraint_box(const Predicate& constraints, std::size_t kmax);

/// Exponentiated-gradient descent with a KL projection onto simplex and box.
/// Throws Infeasible when the box has no interior point in the simplex.
MinimizeResult minimize_rate_I(const Predicate& constraints, double gamma, double beta,
                               std::size_t kmax, const MinimizeOptions& options = {});

/// Exhaustive search over the grid of step 1/resolution on the truncated
/// simplex, refined around the best point `refinements` times.
struct GridResult {
  std::vector<double> point;
  double value = 0.0;
};
GridResult grid_search_rate_I(const Predicate& constraints, double gamma, double beta,
                              std::size_t kmax, std::size_t resolution = 60,
                              std::size_t refinements = 4);

struct ContractionResult {
  double j_min = 0.0;
  double i_value = 0.0;
  double gap = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Minimizes J over pair measures with degree marginal l (re-truncated at
/// kmax) and compares with I(l) under the mu x mu averaged gamma and beta.
ContractionResult contraction_check(const DegreeMeasure& l, const std::vector<double>& mu,
                                    const WeightSpec& spec, std::size_t kmax,
                                    const MinimizeOptions& options = {});

}  // namespace pa
