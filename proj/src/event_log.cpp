#include "pa/event_log.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "pa/errors.hpp"

namespace pa {

void replay_validate(const EventLog& log) {
  if (log.n < 2) throw CorruptedLog("log has fewer than two vertices");
  if (log.colors.size() != log.n) throw CorruptedLog("color table does not cover all vertices");
  if (log.events.size() != log.n - 1) throw CorruptedLog("log must hold exactly n - 1 events");
  for (auto c : log.colors) {
    if (c >= log.num_colors) throw CorruptedLog("vertex color outside the alphabet");
  }
  std::vector<std::uint32_t> indeg(log.n, 0);
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const auto& e = log.events[i];
    const auto expected_m = static_cast<std::uint32_t>(i + 2);
    if (e.m != expected_m) throw CorruptedLog("event " + std::to_string(i) + " out of order");
    if (e.parent < 1 || e.parent >= e.m) {
      throw CorruptedLog("event m=" + std::to_string(e.m) + " has parent outside 1..m-1");
    }
    if (e.parent_color != log.color_of(e.parent) || e.child_color != log.color_of(e.m)) {
      throw CorruptedLog("event m=" + std::to_string(e.m) + " has inconsistent colors");
    }
    if (e.parent_indegree != indeg[e.parent - 1]) {
      throw CorruptedLog("event m=" + std::to_string(e.m) + " records in-degree " +
                         std::to_string(e.parent_indegree) + ", replay gives " +
                         std::to_string(indeg[e.parent - 1]));
    }
    ++indeg[e.parent - 1];
  }
}

std::vector<std::uint32_t> final_indegrees(const EventLog& log) {
  std::vector<std::uint32_t> indeg(log.n, 0);
  for (const auto& e : log.events) ++indeg[e.parent - 1];
  return indeg;
}

void write_csv(const EventLog& log, std::ostream& os) {
  static constexpr char kHeader[] = "m,parent,parent_color,child_color,parent_indeg\n";
  os.write(kHeader, sizeof(kHeader) - 1);
  std::string buf;
  buf.reserve(1 << 20);
  char field[16];
  auto put = [&](std::uint32_t v, char sep) {
    auto [ptr, ec] = std::to_chars(field, field + sizeof(field), v);
    buf.append(field, ptr);
    buf.push_back(sep);
  };
  for (const auto& e : log.events) {
    put(e.m, ',');
    put(e.parent, ',');
    put(e.parent_color, ',');
    put(e.child_color, ',');
    put(e.parent_indegree, '\n');
    if (buf.size() > (1 << 20) - 128) {
      os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::string to_csv(const EventLog& log) {
  std::ostringstream os;
  write_csv(log, os);
  return os.str();
}

EventLog read_csv(std::istream& is, std::size_t num_colors) {
  std::string line;
  if (!std::getline(is, line)) throw CorruptedLog("empty event log");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "m,parent,parent_color,child_color,parent_indeg") {
    throw CorruptedLog("unexpected event log header: " + line);
  }
  EventLog log;
  std::uint32_t max_color = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::uint32_t fields[5];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int f = 0; f < 5; ++f) {
      auto [ptr, ec] = std::from_chars(p, end, fields[f]);
      if (ec != std::errc() || (f < 4 && (ptr == end || *ptr != ',')) || (f == 4 && ptr != end)) {
        throw CorruptedLog("malformed event row: " + line);
      }
      p = ptr + 1;
    }
    log.events.push_back({fields[0], fields[1], fields[2], fields[3], fields[4]});
    max_color = std::max({max_color, fields[2], fields[3]});
  }
  if (log.events.empty()) throw CorruptedLog("event log has no events");
  log.n = static_cast<std::uint32_t>(log.events.size() + 1);
  log.num_colors = num_colors ? num_colors : max_color + 1;
  log.colors.assign(log.n, 0);
  log.colors[0] = log.events.front().parent_color;
  for (const auto& e : log.events) {
    if (e.m >= 2 && e.m <= log.n) log.colors[e.m - 1] = e.child_color;
  }
  replay_validate(log);
  return log;
}

}  // namespace pa
