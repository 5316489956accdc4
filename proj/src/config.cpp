#include "pa/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pa/errors.hpp"

namespace pa {

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"colors", {"names", "mu"}},
    {"weights", {"buckets", "gamma", "beta", "allow_zero_beta"}},
    {"experiment", {"seed", "reps", "n", "kmax", "grid", "threads", "event", "constraints", "n_list"}},
};

std::vector<std::string> split_trim(const std::string& text, const char* sep) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(sep));
  for (auto& p : parts) boost::trim(p);
  return parts;
}

std::vector<std::vector<double>> parse_table(const std::string& text, std::size_t buckets,
                                             std::size_t pairs, const std::string& name) {
  std::vector<std::vector<double>> rows;
  for (const auto& row_text : split_trim(text, ";")) {
    auto row = parse_real_list(row_text);
    if (row.size() == 1) row.assign(pairs, row[0]);
    if (row.size() != pairs) {
      throw ValidationError("[weights] " + name + ": a row needs 1 or " + std::to_string(pairs) + " values");
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() == 1) rows.resize(buckets, rows[0]);
  if (rows.size() != buckets) {
    throw ValidationError("[weights] " + name + ": expected " + std::to_string(buckets) + " bucket rows");
  }
  return rows;
}

}  // namespace

std::optional<std::string> Config::get(const std::string& key) const {
  auto it = experiment.find(key);
  if (it == experiment.end()) return std::nullopt;
  return it->second;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split_trim(text, ",")) {
    if (part.empty()) throw ValidationError("empty entry in list '" + text + "'");
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size()) throw ValidationError("not a number: '" + part + "'");
    out.push_back(x);
  }
  return out;
}

std::vector<std::uint32_t> parse_count_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (const auto& part : split_trim(text, ",")) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw ValidationError("not a count: '" + part + "'");
    }
    out.push_back(static_cast<std::uint32_t>(std::stoul(part)));
  }
  return out;
}

Config parse_config(std::istream& is) {
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_config_text(buffer.str());
}

Config parse_config_text(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    auto schema = kSchema.find(section);
    if (schema == kSchema.end()) {
      if (body.empty()) throw ValidationError("config: key '" + section + "' outside a section");
      throw ValidationError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!schema->second.count(key)) {
        throw ValidationError("config: unknown key '" + key + "' in [" + section + "]");
      }
    }
  }

  Config cfg;
  cfg.text = text;
  std::vector<std::string> names{"x"};
  if (auto s = tree.get_optional<std::string>("colors.names")) names = split_trim(*s, ",");
  const std::size_t C = names.size();
  const std::size_t P = C * C;
  if (auto s = tree.get_optional<std::string>("colors.mu")) {
    cfg.mu = parse_real_list(*s);
  } else {
    cfg.mu.assign(C, 1.0 / static_cast<double>(C));
  }
  std::vector<double> ends{1.0};
  if (auto s = tree.get_optional<std::string>("weights.buckets")) ends = parse_real_list(*s);
  const auto gamma = parse_table(tree.get<std::string>("weights.gamma", "1"), ends.size(), P, "gamma");
  const auto beta = parse_table(tree.get<std::string>("weights.beta", "1"), ends.size(), P, "beta");
  bool allow_zero = false;
  if (auto s = tree.get_optional<std::string>("weights.allow_zero_beta")) {
    const std::string v = boost::to_lower_copy(*s);
    if (v == "true" || v == "1" || v == "yes") allow_zero = true;
    else if (v == "false" || v == "0" || v == "no") allow_zero = false;
    else throw ValidationError("config: allow_zero_beta must be a boolean");
  }
  cfg.spec = WeightSpec(names, ends, gamma, beta, allow_zero);
  require_valid(cfg.spec);
  require_color_law(cfg.mu, C);
  if (auto exp = tree.get_child_optional("experiment")) {
    for (const auto& [key, value] : *exp) cfg.experiment[key] = value.data();
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return parse_config(in);
}

Config default_config() { return Config{}; }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace pa
