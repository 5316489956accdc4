#include "pa/empirics.hpp"

#include <algorithm>
#include <cmath>

#include "pa/errors.hpp"

namespace pa {

std::uint64_t AttachmentCounts::degree_count(std::size_t k) const {
  if (k > kmax) return 0;
  std::uint64_t s = 0;
  for (std::size_t a = 0; a < num_pairs(); ++a) s += counts[k * num_pairs() + a];
  return s;
}

AttachmentCounts attachment_counts(const EventLog& log) {
  AttachmentCounts c;
  c.num_colors = log.num_colors;
  c.total = log.events.size();
  std::uint32_t kmax = 0;
  for (const auto& e : log.events) kmax = std::max(kmax, e.parent_indegree);
  c.kmax = kmax;
  c.counts.assign((kmax + 1) * c.num_pairs(), 0);
  for (const auto& e : log.events) {
    ++c.counts[e.parent_indegree * c.num_pairs() + e.parent_color * c.num_colors + e.child_color];
  }
  return c;
}

PairMeasure attachment_measure(const AttachmentCounts& counts) {
  std::vector<double> atoms(counts.counts.size());
  const auto total = static_cast<double>(counts.total);
  for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = static_cast<double>(counts.counts[i]) / total;
  return PairMeasure(counts.num_colors, counts.kmax, std::move(atoms));
}

PairMeasure attachment_measure(const EventLog& log) {
  return attachment_measure(attachment_counts(log));
}

ClassHistogram class_histogram(const EventLog& log, std::uint32_t step) {
  if (step < 2 || step > log.n) throw DomainError("snapshot step must lie in 2..n");
  ClassHistogram h;
  h.step = step;
  std::vector<std::uint32_t> indeg(step - 1, 0);
  // Edges of vertices 2..step-1 land among vertices 1..step-2.
  for (std::uint32_t m = 2; m < step; ++m) ++indeg[log.events[m - 2].parent - 1];
  std::uint32_t kmax = 0;
  for (auto d : indeg) kmax = std::max(kmax, d);
  h.counts.assign(log.num_colors, std::vector<std::uint64_t>(kmax + 1, 0));
  h.class_sizes.assign(log.num_colors, 0);
  for (std::uint32_t v = 1; v < step; ++v) {
    ++h.counts[log.color_of(v)][indeg[v - 1]];
    ++h.class_sizes[log.color_of(v)];
  }
  return h;
}

std::uint32_t snapshot_step(double t, std::uint32_t n) {
  const double scaled = t * static_cast<double>(n);
  const auto m = static_cast<std::uint32_t>(std::ceil(scaled - 1e-9));
  if (!(t <= 1.0) || m < 2) {
    throw DomainError("snapshot time must lie in [2/n, 1]");
  }
  return m;
}

PathMeasure snapshot_path(const EventLog& log, const std::vector<double>& times) {
  if (times.empty() || times.back() != 1.0) throw DomainError("snapshot times must end at 1");
  const std::size_t colors = log.num_colors;
  const std::size_t pairs = colors * colors;
  std::vector<double> grid{0.0};
  std::vector<PathMeasure::Snapshot> snaps;
  std::vector<std::vector<double>> weights;

  // Single forward replay across increasing steps.
  std::vector<std::uint32_t> indeg(log.n, 0);
  std::uint32_t replayed = 2;  // edges of vertices < replayed are applied
  for (double t : times) {
    if (t <= grid.back()) throw DomainError("snapshot times must be increasing");
    const std::uint32_t m = snapshot_step(t, log.n);
    for (; replayed < m; ++replayed) ++indeg[log.events[replayed - 2].parent - 1];

    std::vector<std::vector<double>> hist(colors);
    std::vector<double> sizes(colors, 0.0);
    for (std::uint32_t v = 1; v < m; ++v) {
      auto& h = hist[log.color_of(v)];
      if (h.size() <= indeg[v - 1]) h.resize(indeg[v - 1] + 1, 0.0);
      h[indeg[v - 1]] += 1.0;
      sizes[log.color_of(v)] += 1.0;
    }
    PathMeasure::Snapshot snap(pairs);
    std::vector<double> w(pairs, 0.0);
    const double total = static_cast<double>(m - 1);
    for (std::size_t a1 = 0; a1 < colors; ++a1) {
      std::optional<DegreeMeasure> cond;
      if (sizes[a1] > 0.0) cond = DegreeMeasure::normalized(hist[a1]);
      for (std::size_t a2 = 0; a2 < colors; ++a2) {
        snap[a1 * colors + a2] = cond;
        w[a1 * colors + a2] = sizes[a1] / total * (sizes[a2] / total);
      }
    }
    const double wsum = stable_sum(w);
    for (double& x : w) x /= wsum;
    grid.push_back(t);
    snaps.push_back(std::move(snap));
    weights.push_back(std::move(w));
  }
  snaps.insert(snaps.begin(), snaps.front());
  weights.insert(weights.begin(), weights.front());
  return PathMeasure(colors, std::move(grid), std::move(snaps), std::move(weights));
}

PathMeasure snapshot_path(const EventLog& log, std::uint32_t grid_points) {
  if (grid_points == 0) throw DomainError("grid needs at least one point");
  std::vector<double> times;
  for (std::uint32_t i = 1; i <= grid_points; ++i) {
    times.push_back(static_cast<double>(i) / static_cast<double>(grid_points));
  }
  times.back() = 1.0;
  return snapshot_path(log, times);
}

DegreeMeasure vertex_degree_measure(const EventLog& log) {
  auto indeg = final_indegrees(log);
  std::uint32_t kmax = *std::max_element(indeg.begin(), indeg.end());
  std::vector<double> h(kmax + 1, 0.0);
  for (auto d : indeg) h[d] += 1.0;
  return DegreeMeasure::normalized(std::move(h));
}

}  // namespace pa
