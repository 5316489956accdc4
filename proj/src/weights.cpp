#include "pa/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pa/errors.hpp"
#include "pa/measures.hpp"

namespace pa {

bool ValidationReport::failed(const std::string& condition) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.condition == condition; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "all conditions pass";
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    const auto& is = issues[i];
    if (i) os << "; ";
    os << is.condition << " (bucket " << is.bucket << ", pair " << is.pair << "): " << is.message;
  }
  return os.str();
}

WeightSpec::WeightSpec(std::vector<std::string> colors, std::vector<double> bucket_ends,
                       std::vector<std::vector<double>> gamma,
                       std::vector<std::vector<double>> beta, bool allow_zero_beta)
    : colors_(std::move(colors)),
      bucket_ends_(std::move(bucket_ends)),
      gamma_(std::move(gamma)),
      beta_(std::move(beta)),
      allow_zero_beta_(allow_zero_beta) {
  if (colors_.empty()) throw StructuralError("WeightSpec: empty color alphabet");
  if (bucket_ends_.empty()) throw StructuralError("WeightSpec: no time buckets");
  if (gamma_.size() != bucket_ends_.size() || beta_.size() != bucket_ends_.size()) {
    throw StructuralError("WeightSpec: one gamma/beta row per bucket required");
  }
  for (std::size_t b = 0; b < bucket_ends_.size(); ++b) {
    if (gamma_[b].size() != num_pairs() || beta_[b].size() != num_pairs()) {
      throw StructuralError("WeightSpec: gamma/beta rows need one entry per color pair");
    }
  }
}

WeightSpec WeightSpec::plain(double gamma, double beta) {
  return uniform_colors(1, gamma, beta);
}

WeightSpec WeightSpec::uniform_colors(std::size_t num_colors, double gamma, double beta) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < num_colors; ++i) names.push_back(std::to_string(i));
  const std::size_t pairs = num_colors * num_colors;
  return WeightSpec(std::move(names), {1.0}, {std::vector<double>(pairs, gamma)},
                    {std::vector<double>(pairs, beta)});
}

std::size_t WeightSpec::bucket_of(double t) const {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("weight time must lie in (0, 1]");
  auto it = std::lower_bound(bucket_ends_.begin(), bucket_ends_.end(), t);
  if (it == bucket_ends_.end()) return bucket_ends_.size() - 1;
  return static_cast<std::size_t>(it - bucket_ends_.begin());
}

ValidationReport validate(const WeightSpec& spec) {
  ValidationReport r;
  auto issue = [&](const char* cond, std::size_t b, std::size_t a, std::string msg) {
    r.issues.push_back({cond, b, a, std::move(msg)});
  };
  r.checked = {"buckets",    "gamma_positive",  "beta_positive",      "constant_c",
               "min_c_ge_1", "sum_inverse_diverges", "log_ratio_integrable"};

  const auto& ends = spec.bucket_ends();
  for (std::size_t b = 0; b < ends.size(); ++b) {
    double start = spec.bucket_start(b);
    if (!(ends[b] > start) || ends[b] > 1.0) {
      issue("buckets", b, 0, "bucket boundaries must increase within (0, 1]");
    }
  }
  if (ends.back() != 1.0) issue("buckets", ends.size() - 1, 0, "last bucket must end at 1");

  double min_c = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < spec.num_buckets(); ++b) {
    const double c0 = spec.gamma(b, 0) + spec.beta(b, 0);
    for (std::size_t a = 0; a < spec.num_pairs(); ++a) {
      const double g = spec.gamma(b, a);
      const double be = spec.beta(b, a);
      if (!(std::isfinite(g) && g > 0.0)) {
        issue("gamma_positive", b, a, "gamma must be finite and > 0");
        // gamma = 0 leaves sum 1/beta, divergent iff beta > 0.
        if (!(std::isfinite(be) && be > 0.0)) {
          issue("sum_inverse_diverges", b, a, "sum_k 1/f(k) is finite");
        }
      }
      if (!std::isfinite(be) || be < 0.0) {
        issue("beta_positive", b, a, "beta must be finite and >= 0");
      } else if (be == 0.0 && !spec.allow_zero_beta()) {
        issue("beta_positive", b, a, "beta = 0 requires allow_zero_beta");
      }
      if (std::isfinite(g) && std::isfinite(be) && std::abs(g + be - c0) > 1e-12) {
        issue("constant_c", b, a,
              "gamma + beta = " + std::to_string(g + be) + " differs from " + std::to_string(c0));
      }
      if (!(std::isfinite(g) && g > 0.0 && std::isfinite(std::log1p(be / g)))) {
        issue("log_ratio_integrable", b, a, "log(1 + beta/gamma) is not finite");
      }
    }
    min_c = std::min(min_c, c0);
  }
  if (!(min_c >= 1.0)) {
    issue("min_c_ge_1", 0, 0, "min over buckets of c is " + std::to_string(min_c) + " < 1");
  }
  return r;
}

void require_valid(const WeightSpec& spec) {
  ValidationReport r = validate(spec);
  if (!r.ok()) throw ValidationError("invalid weight spec: " + r.summary());
}

void require_color_law(const std::vector<double>& mu, std::size_t num_colors) {
  if (mu.size() != num_colors) throw StructuralError("color law has wrong length");
  for (double m : mu) {
    if (!(std::isfinite(m) && m > 0.0)) throw ValidationError("color law entries must be > 0");
  }
  if (std::abs(stable_sum(mu) - 1.0) > kMassTolerance) {
    throw ValidationError("color law must sum to 1");
  }
}

}  // namespace pa
