#pragma once

#include <cstdint>
#include <vector>

#include "pa/event_log.hpp"
#include "pa/measures.hpp"

namespace pa {

/// Integer event counts behind the attachment measure: count(k, a) is the
/// number of events whose parent had in-degree k and whose color pair is a.
struct AttachmentCounts {
  std::size_t num_colors = 1;
  std::size_t kmax = 0;
  std::uint64_t total = 0;  // n - 1
  std::vector<std::uint64_t> counts;  // [k * num_pairs + a]

  std::size_t num_pairs() const { return num_colors * num_colors; }
  std::uint64_t count(std::size_t k, std::size_t pair) const {
    return k <= kmax ? counts[k * num_pairs() + pair] : 0;
  }
  std::uint64_t degree_count(std::size_t k) const;
};

AttachmentCounts attachment_counts(const EventLog& log);

/// M_X: mass 1/(n-1) on (parent in-degree at attachment, color pair) of
/// every event. For a single color the degree marginal is the empirical
/// degree measure L.
PairMeasure attachment_measure(const EventLog& log);
PairMeasure attachment_measure(const AttachmentCounts& counts);

/// In-degree histograms of vertices 1..m-1 just before vertex m attaches,
/// one per parent color. counts[a1][k].
struct ClassHistogram {
  std::uint32_t step = 0;
  std::vector<std::vector<std::uint64_t>> counts;
  std::vector<std::uint64_t> class_sizes;
};
ClassHistogram class_histogram(const EventLog& log, std::uint32_t step);

/// Step index m = ceil(t n) for a snapshot time t in [2/n, 1].
std::uint32_t snapshot_step(double t, std::uint32_t n);

/// Snapshots of the per-class in-degree laws at the given times (a subset
/// of {2/n, ..., 1}, increasing, ending at 1). nu_t(. | (a1, a2)) is the
/// class-a1 histogram at step ceil(t n); pair weights are products of class
/// fractions. The grid point 0 is prepended and carries the first snapshot.
PathMeasure snapshot_path(const EventLog& log, const std::vector<double>& times);
/// G uniform times i/G, i = 1..G.
PathMeasure snapshot_path(const EventLog& log, std::uint32_t grid_points);

/// Final in-degree law of vertices 1..n (diagnostic).
DegreeMeasure vertex_degree_measure(const EventLog& log);

}  // namespace pa
