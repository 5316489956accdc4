#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "pa/measures.hpp"
#include "pa/weights.hpp"

namespace pa_test {

inline std::vector<double> dirichlet(std::mt19937_64& gen, std::size_t size, double alpha = 1.0) {
  std::gamma_distribution<double> g(alpha, 1.0);
  std::vector<double> x(size);
  double s = 0.0;
  for (auto& v : x) s += (v = g(gen));
  for (auto& v : x) v /= s;
  return x;
}

// Dirichlet body on 0..kmax followed by a geometric tail of the given mass.
inline pa::DegreeMeasure random_degree(std::mt19937_64& gen, std::size_t kmax, double tail = 0.0) {
  auto body = dirichlet(gen, kmax + 1);
  for (auto& v : body) v *= 1.0 - tail;
  return pa::DegreeMeasure(body, tail);
}

// Dirichlet draw on 0..kmax exponentially tilted to have mean exactly `mean`.
inline pa::DegreeMeasure tilted_dirichlet(std::mt19937_64& gen, std::size_t kmax, double mean = 1.0) {
  const auto base = dirichlet(gen, kmax + 1);
  auto tilted = [&](double theta) {
    std::vector<double> w(kmax + 1);
    double s = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) s += (w[k] = base[k] * std::exp(theta * static_cast<double>(k)));
    for (auto& v : w) v /= s;
    return w;
  };
  auto mean_of = [&](const std::vector<double>& w) {
    double m = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) m += static_cast<double>(k) * w[k];
    return m;
  };
  double lo = -50.0, hi = 50.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_of(tilted(mid)) < mean ? lo : hi) = mid;
  }
  return pa::DegreeMeasure(tilted(0.5 * (lo + hi)));
}

inline pa::DegreeMeasure geometric_half(std::size_t kmax) {
  std::vector<double> p(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) p[k] = std::ldexp(1.0, -static_cast<int>(k + 1));
  return pa::DegreeMeasure(p, std::ldexp(1.0, -static_cast<int>(kmax + 1)));
}

inline pa::WeightSpec two_color_uniform() { return pa::WeightSpec::uniform_colors(2, 1.0, 1.0); }

// Color-dependent gamma with constant c = 3.
inline pa::WeightSpec two_color_mixed() {
  return pa::WeightSpec({"r", "b"}, {1.0}, {{1.0, 2.0, 0.5, 1.5}}, {{2.0, 1.0, 2.5, 1.5}});
}

}  // namespace pa_test
