#pragma once

// Sequential construction of plain and colored preferential-attachment
// trees. Vertex m = 2..n draws a color from mu and attaches to one earlier
// vertex i with probability proportional to f_{m/n}(N(i), (X(i), X(m))).

#include <cstdint>
#include <vector>

#include "pa/event_log.hpp"
#include "pa/rng.hpp"
#include "pa/tilt.hpp"
#include "pa/weights.hpp"

namespace pa {

/// Per-color aggregates for the linear-weight sampler: vertex count V_x,
/// total in-degree D_x and a hit list holding one entry per received edge.
/// Drawing a parent of child color y is two-stage: a class x with
/// probability proportional to gamma D_x + beta V_x, then within the class a
/// hit-list entry (degree-proportional) with probability gamma D_x / (gamma
/// D_x + beta V_x), else a uniform class member.
class GrowthState {
 public:
  GrowthState(std::size_t num_colors, std::uint32_t capacity);

  void add_vertex(std::uint32_t color);
  void add_edge(std::uint32_t parent);

  std::uint32_t num_vertices() const { return static_cast<std::uint32_t>(indeg_.size()); }
  std::uint32_t indegree(std::uint32_t v) const { return indeg_[v - 1]; }
  std::uint32_t color(std::uint32_t v) const { return color_[v - 1]; }
  std::uint32_t class_size(std::size_t x) const {
    return static_cast<std::uint32_t>(members_[x].size());
  }
  std::uint32_t class_indegree(std::size_t x) const {
    return static_cast<std::uint32_t>(hits_[x].size());
  }

  /// sum_i f_b(N(i), (X(i), y)) from the class aggregates.
  double normalizer(const WeightSpec& spec, std::size_t bucket, std::uint32_t child_color) const;
  std::uint32_t draw_parent(const WeightSpec& spec, std::size_t bucket, std::uint32_t child_color,
                            Rng& rng) const;

 private:
  std::size_t num_colors_;
  std::vector<std::uint32_t> indeg_;
  std::vector<std::uint32_t> color_;
  std::vector<std::vector<std::uint32_t>> members_;
  std::vector<std::vector<std::uint32_t>> hits_;
};

/// Index drawn from nonnegative weights; u is uniform in [0, 1).
std::size_t sample_index(const std::vector<double>& weights, double u);

EventLog generate(const WeightSpec& spec, const std::vector<double>& mu, std::uint32_t n, Rng& rng);
EventLog generate(const WeightSpec& spec, const std::vector<double>& mu, std::uint32_t n,
                  std::uint64_t seed, std::uint64_t stream = 0);

/// Tilted dynamics: colors from mu~, parents proportional to f~. Normalizers
/// are summed over per-color degree histograms. The flagged identity tilt
/// runs the untilted sampler so shared seeds give identical logs.
EventLog generate_tilted(const WeightSpec& spec, const std::vector<double>& mu, const Tilt& tilt,
                         std::uint32_t n, Rng& rng);
EventLog generate_tilted(const WeightSpec& spec, const std::vector<double>& mu, const Tilt& tilt,
                         std::uint32_t n, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace pa
