#include "pa/generator.hpp"

#include <cmath>

#include "pa/errors.hpp"

namespace pa {

namespace {

void check_inputs(const WeightSpec& spec, const std::vector<double>& mu, std::uint32_t n) {
  if (n < 2) throw DomainError("generate: n must be at least 2");
  require_valid(spec);
  require_color_law(mu, spec.num_colors());
}

std::uint32_t draw_color(const std::vector<double>& law, Rng& rng) {
  if (law.size() == 1) return 0;
  return static_cast<std::uint32_t>(sample_index(law, rng.uniform()));
}

// Vertices grouped by (color, in-degree) with O(1) moves between degrees and
// a list of occupied degrees per color.
class DegreeBuckets {
 public:
  DegreeBuckets(std::size_t num_colors, std::uint32_t capacity)
      : by_degree_(num_colors), occupied_(num_colors), occupied_pos_(num_colors),
        pos_(capacity + 1, 0), degree_(capacity + 1, 0), color_(capacity + 1, 0) {}

  void insert(std::uint32_t v, std::uint32_t color, std::uint32_t degree) {
    color_[v] = color;
    degree_[v] = degree;
    auto& lists = by_degree_[color];
    if (lists.size() <= degree) {
      lists.resize(degree + 1);
      occupied_pos_[color].resize(degree + 1, kNone);
    }
    if (lists[degree].empty()) {
      occupied_pos_[color][degree] = static_cast<std::uint32_t>(occupied_[color].size());
      occupied_[color].push_back(degree);
    }
    pos_[v] = static_cast<std::uint32_t>(lists[degree].size());
    lists[degree].push_back(v);
  }

  void bump(std::uint32_t v) {
    const std::uint32_t color = color_[v];
    const std::uint32_t degree = degree_[v];
    auto& list = by_degree_[color][degree];
    const std::uint32_t last = list.back();
    list[pos_[v]] = last;
    pos_[last] = pos_[v];
    list.pop_back();
    if (list.empty()) {
      auto& occ = occupied_[color];
      auto& occ_pos = occupied_pos_[color];
      const std::uint32_t slot = occ_pos[degree];
      occ[slot] = occ.back();
      occ_pos[occ[slot]] = slot;
      occ.pop_back();
      occ_pos[degree] = kNone;
    }
    insert(v, color, degree + 1);
  }

  const std::vector<std::uint32_t>& occupied(std::size_t color) const { return occupied_[color]; }
  const std::vector<std::uint32_t>& vertices(std::size_t color, std::uint32_t degree) const {
    return by_degree_[color][degree];
  }

 private:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<std::vector<std::vector<std::uint32_t>>> by_degree_;
  std::vector<std::vector<std::uint32_t>> occupied_;
  std::vector<std::vector<std::uint32_t>> occupied_pos_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> degree_;
  std::vector<std::uint32_t> color_;
};

}  // namespace

std::size_t sample_index(const std::vector<double>& weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  double target = u * total;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    if (target < weights[i]) return i;
    target -= weights[i];
  }
  return last_positive;
}

GrowthState::GrowthState(std::size_t num_colors, std::uint32_t capacity)
    : num_colors_(num_colors), members_(num_colors), hits_(num_colors) {
  indeg_.reserve(capacity);
  color_.reserve(capacity);
}

void GrowthState::add_vertex(std::uint32_t color) {
  indeg_.push_back(0);
  color_.push_back(color);
  members_[color].push_back(static_cast<std::uint32_t>(indeg_.size()));
}

void GrowthState::add_edge(std::uint32_t parent) {
  ++indeg_[parent - 1];
  hits_[color_[parent - 1]].push_back(parent);
}

double GrowthState::normalizer(const WeightSpec& spec, std::size_t bucket,
                               std::uint32_t child_color) const {
  double z = 0.0;
  for (std::size_t x = 0; x < num_colors_; ++x) {
    const std::size_t a = x * num_colors_ + child_color;
    z += spec.gamma(bucket, a) * static_cast<double>(hits_[x].size()) +
         spec.beta(bucket, a) * static_cast<double>(members_[x].size());
  }
  return z;
}

std::uint32_t GrowthState::draw_parent(const WeightSpec& spec, std::size_t bucket,
                                       std::uint32_t child_color, Rng& rng) const {
  std::size_t x = 0;
  double degree_part = 0.0;
  double class_weight = 0.0;
  if (num_colors_ == 1) {
    degree_part = spec.gamma(bucket, 0) * static_cast<double>(hits_[0].size());
    class_weight = degree_part + spec.beta(bucket, 0) * static_cast<double>(members_[0].size());
  } else {
    std::vector<double> w(num_colors_);
    for (std::size_t c = 0; c < num_colors_; ++c) {
      const std::size_t a = c * num_colors_ + child_color;
      w[c] = spec.gamma(bucket, a) * static_cast<double>(hits_[c].size()) +
             spec.beta(bucket, a) * static_cast<double>(members_[c].size());
    }
    x = sample_index(w, rng.uniform());
    const std::size_t a = x * num_colors_ + child_color;
    degree_part = spec.gamma(bucket, a) * static_cast<double>(hits_[x].size());
    class_weight = w[x];
  }
  if (rng.uniform() * class_weight < degree_part) {
    return hits_[x][rng.below(hits_[x].size())];
  }
  return members_[x][rng.below(members_[x].size())];
}

EventLog generate(const WeightSpec& spec, const std::vector<double>& mu, std::uint32_t n, Rng& rng) {
  check_inputs(spec, mu, n);
  EventLog log;
  log.n = n;
  log.num_colors = spec.num_colors();
  log.seed = rng.seed();
  log.stream = rng.stream();
  log.colors.reserve(n);
  log.events.reserve(n - 1);

  GrowthState state(spec.num_colors(), n);
  const std::uint32_t root_color = draw_color(mu, rng);
  state.add_vertex(root_color);
  log.colors.push_back(root_color);
  for (std::uint32_t m = 2; m <= n; ++m) {
    const std::size_t bucket = spec.bucket_of(static_cast<double>(m) / static_cast<double>(n));
    const std::uint32_t y = draw_color(mu, rng);
    const std::uint32_t parent = state.draw_parent(spec, bucket, y, rng);
    log.events.push_back({m, parent, state.color(parent), y, state.indegree(parent)});
    state.add_edge(parent);
    state.add_vertex(y);
    log.colors.push_back(y);
  }
  return log;
}

EventLog generate(const WeightSpec& spec, const std::vector<double>& mu, std::uint32_t n,
                  std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  return generate(spec, mu, n, rng);
}

EventLog generate_tilted(const WeightSpec& spec, const std::vector<double>& mu, const Tilt& tilt,
                         std::uint32_t n, Rng& rng) {
  check_inputs(spec, mu, n);
  tilt.check_compatible(spec);
  if (tilt.is_identity()) return generate(spec, mu, n, rng);

  const std::size_t colors = spec.num_colors();
  const std::vector<double> law = tilt.tilted_colors(mu);
  EventLog log;
  log.n = n;
  log.num_colors = colors;
  log.seed = rng.seed();
  log.stream = rng.stream();
  log.colors.reserve(n);
  log.events.reserve(n - 1);

  DegreeBuckets buckets(colors, n);
  std::vector<std::uint32_t> indeg(n + 1, 0);
  std::vector<std::uint32_t> color(n + 1, 0);

  // f~ tabulated per bucket up to k_g + 1; larger degrees are computed on demand.
  const std::size_t cached = tilt.k_g() + 2;
  std::vector<std::vector<double>> table(spec.num_buckets(),
                                         std::vector<double>(cached * spec.num_pairs()));
  for (std::size_t b = 0; b < spec.num_buckets(); ++b) {
    for (std::size_t k = 0; k < cached; ++k) {
      for (std::size_t a = 0; a < spec.num_pairs(); ++a) {
        table[b][k * spec.num_pairs() + a] = tilt.tilted_weight(spec, b, k, a);
      }
    }
  }
  auto weight = [&](std::size_t b, std::uint32_t k, std::size_t a) {
    return k < cached ? table[b][k * spec.num_pairs() + a] : tilt.tilted_weight(spec, b, k, a);
  };

  color[1] = draw_color(law, rng);
  buckets.insert(1, color[1], 0);
  log.colors.push_back(color[1]);

  std::vector<double> class_weights(colors);
  for (std::uint32_t m = 2; m <= n; ++m) {
    const std::size_t b = spec.bucket_of(static_cast<double>(m) / static_cast<double>(n));
    const std::uint32_t y = draw_color(law, rng);
    for (std::size_t x = 0; x < colors; ++x) {
      double w = 0.0;
      for (std::uint32_t k : buckets.occupied(x)) {
        w += static_cast<double>(buckets.vertices(x, k).size()) * weight(b, k, x * colors + y);
      }
      class_weights[x] = w;
    }
    const std::size_t x = sample_index(class_weights, rng.uniform());
    double target = rng.uniform() * class_weights[x];
    std::uint32_t chosen_degree = buckets.occupied(x).back();
    for (std::uint32_t k : buckets.occupied(x)) {
      const double w = static_cast<double>(buckets.vertices(x, k).size()) * weight(b, k, x * colors + y);
      if (w <= 0.0) continue;
      chosen_degree = k;
      if (target < w) break;
      target -= w;
    }
    const auto& candidates = buckets.vertices(x, chosen_degree);
    const std::uint32_t parent = candidates[rng.below(candidates.size())];

    log.events.push_back({m, parent, color[parent], y, indeg[parent]});
    ++indeg[parent];
    buckets.bump(parent);
    color[m] = y;
    buckets.insert(m, y, 0);
    log.colors.push_back(y);
  }
  return log;
}

EventLog generate_tilted(const WeightSpec& spec, const std::vector<double>& mu, const Tilt& tilt,
                         std::uint32_t n, std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed, stream);
  return generate_tilted(spec, mu, tilt, n, rng);
}

}  // namespace pa
