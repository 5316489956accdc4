#pragma once

// Complete attachment history of one generated tree. Vertices are numbered
// 1..n; vertex 1 is the root and vertex m >= 2 attaches to exactly one parent.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace pa {

struct AttachmentEvent {
  std::uint32_t m = 0;
  std::uint32_t parent = 0;
  std::uint32_t parent_color = 0;
  std::uint32_t child_color = 0;
  std::uint32_t parent_indegree = 0;  // before the new edge

  friend bool operator==(const AttachmentEvent&, const AttachmentEvent&) = default;
};

struct EventLog {
  std::uint32_t n = 0;
  std::size_t num_colors = 1;
  std::vector<std::uint32_t> colors;  // colors[v - 1] is the color of vertex v
  std::vector<AttachmentEvent> events;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::uint32_t color_of(std::uint32_t v) const { return colors[v - 1]; }

  friend bool operator==(const EventLog&, const EventLog&) = default;
};

/// Throws CorruptedLog unless: n - 1 events in order m = 2..n, parent < m,
/// colors consistent with the vertex color table, and every recorded
/// parent_indegree equals the number of earlier events with the same parent.
void replay_validate(const EventLog& log);

/// Final in-degrees, indexed by vertex - 1.
std::vector<std::uint32_t> final_indegrees(const EventLog& log);

/// CSV with header m,parent,parent_color,child_color,parent_indeg.
void write_csv(const EventLog& log, std::ostream& os);
std::string to_csv(const EventLog& log);
/// Parses and replay-validates. num_colors is inferred when 0.
EventLog read_csv(std::istream& is, std::size_t num_colors = 0);

}  // namespace pa
