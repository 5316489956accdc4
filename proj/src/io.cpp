#include "pa/io.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "pa/errors.hpp"

namespace pa {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  return out;
}

std::vector<std::vector<std::string>> read_rows(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty measure file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ValidationError("expected header '" + header + "', got '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  const std::size_t width = split(header).size();
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (cells.size() != width) throw ValidationError("malformed row '" + line + "'");
    rows.push_back(std::move(cells));
  }
  return rows;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ValidationError("not a number: '" + s + "'");
  return x;
}

std::size_t parse_index(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError("not an index: '" + s + "'");
  }
  return std::stoul(s);
}

}  // namespace

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const DegreeMeasure& m, std::ostream& os) {
  os << "k,p\n";
  for (std::size_t k = 0; k <= m.kmax(); ++k) os << k << ',' << format_real(m[k]) << '\n';
  os << "tail," << format_real(m.tail_mass()) << '\n';
}

void write_csv(const PairMeasure& m, std::ostream& os) {
  const std::size_t C = m.num_colors();
  os << "k,a1,a2,p\n";
  for (std::size_t k = 0; k <= m.kmax(); ++k) {
    for (std::size_t a = 0; a < m.num_pairs(); ++a) {
      os << k << ',' << a / C << ',' << a % C << ',' << format_real(m.atom(k, a)) << '\n';
    }
  }
  for (std::size_t a = 0; a < m.num_pairs(); ++a) {
    os << "tail," << a / C << ',' << a % C << ',' << format_real(m.tail(a)) << '\n';
  }
}

void write_csv(const PathMeasure& m, std::ostream& os) {
  const std::size_t C = m.num_colors();
  os << "i,t,a1,a2,k,p\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    const std::string prefix = std::to_string(i) + ',' + format_real(m.grid()[i]) + ',';
    for (std::size_t a = 0; a < m.num_pairs(); ++a) {
      const std::string pair = std::to_string(a / C) + ',' + std::to_string(a % C) + ',';
      os << prefix << pair << "weight," << format_real(m.pair_weights(i)[a]) << '\n';
      const auto& cond = m.snapshot(i)[a];
      if (!cond) continue;
      for (std::size_t k = 0; k <= cond->kmax(); ++k) {
        os << prefix << pair << k << ',' << format_real((*cond)[k]) << '\n';
      }
      os << prefix << pair << "tail," << format_real(cond->tail_mass()) << '\n';
    }
  }
}

DegreeMeasure read_degree_csv(std::istream& is) {
  std::vector<double> probs;
  double tail = 0.0;
  for (const auto& row : read_rows(is, "k,p")) {
    if (row[0] == "tail") {
      tail = parse_real(row[1]);
      continue;
    }
    const std::size_t k = parse_index(row[0]);
    if (k != probs.size()) throw ValidationError("degree rows must be consecutive from 0");
    probs.push_back(parse_real(row[1]));
  }
  if (probs.empty()) throw ValidationError("degree measure has no atoms");
  return DegreeMeasure(std::move(probs), tail);
}

PairMeasure read_pair_csv(std::istream& is) {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> atoms;
  std::map<std::pair<std::size_t, std::size_t>, double> tails;
  std::size_t C = 0, K = 0;
  for (const auto& row : read_rows(is, "k,a1,a2,p")) {
    const std::size_t a1 = parse_index(row[1]);
    const std::size_t a2 = parse_index(row[2]);
    C = std::max({C, a1 + 1, a2 + 1});
    if (row[0] == "tail") {
      tails[{a1, a2}] = parse_real(row[3]);
    } else {
      const std::size_t k = parse_index(row[0]);
      K = std::max(K, k);
      atoms[{k, a1, a2}] = parse_real(row[3]);
    }
  }
  if (C == 0) throw ValidationError("pair measure has no atoms");
  const std::size_t P = C * C;
  std::vector<double> flat((K + 1) * P, 0.0), tail(P, 0.0);
  for (const auto& [key, v] : atoms) {
    const auto [k, a1, a2] = key;
    flat[k * P + a1 * C + a2] = v;
  }
  for (const auto& [key, v] : tails) tail[key.first * C + key.second] = v;
  return PairMeasure(C, K, std::move(flat), std::move(tail));
}

PathMeasure read_path_csv(std::istream& is) {
  struct Cond {
    std::vector<double> probs;
    double tail = 0.0;
    bool present = false;
  };
  std::map<std::size_t, double> grid;
  std::map<std::size_t, std::map<std::pair<std::size_t, std::size_t>, double>> weights;
  std::map<std::size_t, std::map<std::pair<std::size_t, std::size_t>, Cond>> conds;
  std::size_t C = 0;
  for (const auto& row : read_rows(is, "i,t,a1,a2,k,p")) {
    const std::size_t i = parse_index(row[0]);
    grid[i] = parse_real(row[1]);
    const std::size_t a1 = parse_index(row[2]);
    const std::size_t a2 = parse_index(row[3]);
    C = std::max({C, a1 + 1, a2 + 1});
    const double p = parse_real(row[5]);
    if (row[4] == "weight") {
      weights[i][{a1, a2}] = p;
      continue;
    }
    Cond& c = conds[i][{a1, a2}];
    c.present = true;
    if (row[4] == "tail") {
      c.tail = p;
    } else {
      const std::size_t k = parse_index(row[4]);
      if (k != c.probs.size()) throw ValidationError("path degree rows must be consecutive from 0");
      c.probs.push_back(p);
    }
  }
  const std::size_t P = C * C;
  std::vector<double> g;
  std::vector<PathMeasure::Snapshot> snaps;
  std::vector<std::vector<double>> w;
  for (const auto& [i, t] : grid) {
    if (i != g.size()) throw ValidationError("path grid indices must be consecutive from 0");
    g.push_back(t);
    PathMeasure::Snapshot snap(P);
    std::vector<double> wi(P, 0.0);
    for (std::size_t a = 0; a < P; ++a) {
      auto wit = weights[i].find({a / C, a % C});
      if (wit != weights[i].end()) wi[a] = wit->second;
      auto cit = conds[i].find({a / C, a % C});
      if (cit != conds[i].end() && cit->second.present) {
        snap[a] = DegreeMeasure(cit->second.probs, cit->second.tail);
      }
    }
    snaps.push_back(std::move(snap));
    w.push_back(std::move(wi));
  }
  return PathMeasure(C, std::move(g), std::move(snaps), std::move(w));
}

nlohmann::json to_json(const DegreeMeasure& m) {
  return {{"type", "degree"},
          {"kmax", m.kmax()},
          {"probs", std::vector<double>(m.probs().begin(), m.probs().end())},
          {"tail", m.tail_mass()}};
}

nlohmann::json to_json(const PairMeasure& m) {
  nlohmann::json atoms = nlohmann::json::array();
  for (std::size_t k = 0; k <= m.kmax(); ++k) {
    std::vector<double> row(m.num_pairs());
    for (std::size_t a = 0; a < m.num_pairs(); ++a) row[a] = m.atom(k, a);
    atoms.push_back(row);
  }
  return {{"type", "pair"},
          {"num_colors", m.num_colors()},
          {"kmax", m.kmax()},
          {"atoms", atoms},
          {"tails", std::vector<double>(m.tails().begin(), m.tails().end())}};
}

nlohmann::json to_json(const PathMeasure& m) {
  nlohmann::json snaps = nlohmann::json::array();
  nlohmann::json weights = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : m.snapshot(i)) row.push_back(c ? to_json(*c) : nlohmann::json(nullptr));
    snaps.push_back(row);
    weights.push_back(m.pair_weights(i));
  }
  return {{"type", "path"},
          {"num_colors", m.num_colors()},
          {"grid", std::vector<double>(m.grid().begin(), m.grid().end())},
          {"pair_weights", weights},
          {"snapshots", snaps}};
}

namespace {
void expect_type(const nlohmann::json& j, const char* type) {
  if (!j.is_object() || j.value("type", "") != type) {
    throw ValidationError(std::string("expected a JSON object of type '") + type + "'");
  }
}
}  // namespace

DegreeMeasure degree_from_json(const nlohmann::json& j) {
  expect_type(j, "degree");
  auto probs = j.at("probs").get<std::vector<double>>();
  if (probs.size() != j.at("kmax").get<std::size_t>() + 1) throw ValidationError("kmax does not match probs");
  return DegreeMeasure(std::move(probs), j.at("tail").get<double>());
}

PairMeasure pair_from_json(const nlohmann::json& j) {
  expect_type(j, "pair");
  const auto C = j.at("num_colors").get<std::size_t>();
  const auto K = j.at("kmax").get<std::size_t>();
  const auto rows = j.at("atoms").get<std::vector<std::vector<double>>>();
  if (rows.size() != K + 1) throw ValidationError("kmax does not match atoms");
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != C * C) throw ValidationError("atom row has the wrong number of pairs");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return PairMeasure(C, K, std::move(flat), j.at("tails").get<std::vector<double>>());
}

PathMeasure path_from_json(const nlohmann::json& j) {
  expect_type(j, "path");
  const auto C = j.at("num_colors").get<std::size_t>();
  std::vector<PathMeasure::Snapshot> snaps;
  for (const auto& row : j.at("snapshots")) {
    PathMeasure::Snapshot s;
    for (const auto& c : row) {
      if (c.is_null()) s.emplace_back(std::nullopt);
      else s.emplace_back(degree_from_json(c));
    }
    snaps.push_back(std::move(s));
  }
  return PathMeasure(C, j.at("grid").get<std::vector<double>>(), std::move(snaps),
                     j.at("pair_weights").get<std::vector<std::vector<double>>>());
}

}  // namespace pa
