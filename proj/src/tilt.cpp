#include "pa/tilt.hpp"

#include <cmath>

#include "pa/errors.hpp"
#include "pa/measures.hpp"

namespace pa {

Tilt::Tilt(std::vector<double> h, std::vector<std::vector<double>> g, std::size_t k_g,
           std::size_t num_pairs, double g_default)
    : h_(std::move(h)), g_(std::move(g)), k_g_(k_g), num_pairs_(num_pairs), g_default_(g_default) {
  if (h_.empty() || g_.empty()) throw StructuralError("Tilt: empty tables");
  if (h_.size() * h_.size() != num_pairs_) throw StructuralError("Tilt: h does not match pairs");
  for (double x : h_) {
    if (!std::isfinite(x)) throw ValidationError("Tilt: h entries must be finite");
  }
  for (const auto& row : g_) {
    if (row.size() != (k_g_ + 1) * num_pairs_) throw StructuralError("Tilt: g row has wrong size");
    for (double x : row) {
      if (!std::isfinite(x)) throw ValidationError("Tilt: g entries must be finite");
    }
  }
  if (!std::isfinite(g_default_)) throw ValidationError("Tilt: g_default must be finite");
}

Tilt Tilt::identity(const WeightSpec& spec, std::size_t k_g) {
  const std::size_t pairs = spec.num_pairs();
  std::vector<std::vector<double>> g(spec.num_buckets(), std::vector<double>((k_g + 1) * pairs));
  for (std::size_t b = 0; b < spec.num_buckets(); ++b) {
    const double log_c = std::log(spec.c(b));
    for (std::size_t k = 0; k <= k_g; ++k) {
      for (std::size_t a = 0; a < pairs; ++a) {
        g[b][k * pairs + a] = 2.0 * std::log(spec.weight(b, k, a)) - log_c;
      }
    }
  }
  Tilt t(std::vector<double>(spec.num_colors(), 0.0), std::move(g), k_g, pairs, 0.0);
  for (std::size_t b = 0; b < spec.num_buckets(); ++b) {
    for (std::size_t k = 0; k <= k_g; ++k) {
      for (std::size_t a = 0; a < pairs; ++a) {
        const double f = spec.weight(b, k, a);
        const double ft = spec.c(b) / f * std::exp(t.g(b, k, a));
        if (std::abs(ft - f) > 1e-12 * f) {
          throw ValidationError("Tilt::identity: tabulated tilt does not reproduce f");
        }
      }
    }
  }
  t.identity_ = true;
  return t;
}

Tilt Tilt::zero(const WeightSpec& spec, std::size_t k_g) {
  return Tilt(std::vector<double>(spec.num_colors(), 0.0),
              std::vector<std::vector<double>>(spec.num_buckets(),
                                               std::vector<double>((k_g + 1) * spec.num_pairs())),
              k_g, spec.num_pairs(), 0.0);
}

double Tilt::log_normalizer(const std::vector<double>& mu) const {
  if (mu.size() != h_.size()) throw StructuralError("Tilt: color law has wrong length");
  std::vector<double> terms(mu.size());
  for (std::size_t a = 0; a < mu.size(); ++a) terms[a] = std::exp(h_[a]) * mu[a];
  return std::log(stable_sum(terms));
}

std::vector<double> Tilt::tilted_colors(const std::vector<double>& mu) const {
  if (identity_) return mu;
  const double u = log_normalizer(mu);
  std::vector<double> out(mu.size());
  for (std::size_t a = 0; a < mu.size(); ++a) out[a] = std::exp(h_[a] - u) * mu[a];
  const double total = stable_sum(out);
  for (double& x : out) x /= total;
  return out;
}

double Tilt::tilted_weight(const WeightSpec& spec, std::size_t bucket, std::size_t k,
                           std::size_t pair) const {
  const double f = spec.weight(bucket, k, pair);
  if (identity_ || f == 0.0) return f;
  return spec.c(bucket) / f * std::exp(g(bucket, k, pair));
}

void Tilt::check_compatible(const WeightSpec& spec) const {
  if (g_.size() != spec.num_buckets()) throw StructuralError("Tilt: bucket count differs from spec");
  if (num_pairs_ != spec.num_pairs()) throw StructuralError("Tilt: alphabet differs from spec");
}

}  // namespace pa
