#pragma once

// INI experiment configuration:
//
//   [colors]
//   names = r, b
//   mu = 0.5, 0.5
//   [weights]
//   buckets = 0.5, 1
//   gamma = 1; 2
//   beta = 1
//   allow_zero_beta = false
//   [experiment]
//   seed = 7
//
// names defaults to one color "x" and mu to the uniform law. buckets lists
// right endpoints (default 1). gamma and beta hold one row per bucket,
// separated by ';', each a scalar or one value per pair a1 * |X| + a2; a
// single row is broadcast to every bucket. Experiment keys: seed, reps, n,
// kmax, grid, threads, event, constraints, n_list. Whole-line comments
// start with ';' or '#'.
// Unknown sections and keys are rejected.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pa/weights.hpp"

namespace pa {

struct Config {
  WeightSpec spec = WeightSpec::plain(1.0, 1.0);
  std::vector<double> mu{1.0};
  std::map<std::string, std::string> experiment;
  std::string text;

  std::optional<std::string> get(const std::string& key) const;
};

Config parse_config(std::istream& is);
Config parse_config_text(const std::string& text);
Config load_config(const std::string& path);
/// gamma = beta = 1, one color.
Config default_config();

std::vector<double> parse_real_list(const std::string& text);
std::vector<std::uint32_t> parse_count_list(const std::string& text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace pa
