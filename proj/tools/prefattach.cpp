// Command-line driver: prefattach <subcommand> [flags]. Every run writes its
// outputs plus manifest.json into --out. Exit codes: 0 ok, 2 validation
// error, 3 runtime error; failures also emit a JSON error record.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <gmp.h>
#include <nlohmann/json.hpp>

#include "pa/config.hpp"
#include "pa/empirics.hpp"
#include "pa/errors.hpp"
#include "pa/event_log.hpp"
#include "pa/generator.hpp"
#include "pa/io.hpp"
#include "pa/optimize.hpp"
#include "pa/oracle.hpp"
#include "pa/predicate.hpp"
#include "pa/rare_events.hpp"
#include "pa/rates.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Flags {
  std::uint64_t seed = 1;
  std::size_t reps = 0;
  std::uint32_t n = 0;
  std::size_t kmax = 0;
  std::uint32_t grid = 0;
  std::string config;
  std::string out = ".";
  std::size_t threads = 1;
  // subcommand specific
  std::string event;
  std::string constraints;
  std::string measure;
  std::string path;
  std::string kind = "I";
  std::string method = "both";
  std::string n_list;
};

// Resolves a setting from the flag (when given), then [experiment], then a default.
template <class T>
T setting(const CLI::App& app, const char* flag, const T& flag_value, const pa::Config& cfg,
          const std::string& key, const T& fallback) {
  if (app.count(flag) > 0) return flag_value;
  if (auto v = cfg.get(key)) {
    std::istringstream in(*v);
    T out{};
    in >> out;
    if (in.fail() || !in.eof()) throw pa::ValidationError("config: bad value for '" + key + "'");
    return out;
  }
  return fallback;
}

std::string string_setting(const CLI::App& app, const char* flag, const std::string& flag_value,
                           const pa::Config& cfg, const std::string& key, const std::string& fallback) {
  if (app.count(flag) > 0) return flag_value;
  if (auto v = cfg.get(key)) return *v;
  return fallback;
}

json real(double x) { return std::isfinite(x) ? json(x) : json(x > 0 ? "inf" : (x < 0 ? "-inf" : "nan")); }

std::string csv_real(double x) {
  if (std::isfinite(x)) return pa::format_real(x);
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

// Writes outputs after checking them against their declared shape.
class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {}

  void prepare() { fs::create_directories(dir_); }

  void csv(const std::string& name, const std::string& content, const std::string& header) {
    const auto first = content.find('\n');
    if (content.compare(0, first, header) != 0) {
      throw std::logic_error("output " + name + ": header does not match the schema");
    }
    const auto columns = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    std::size_t start = 0;
    while (start < content.size()) {
      const auto end = content.find('\n', start);
      std::size_t commas = 0;
      for (std::size_t i = start; i < end; ++i) commas += content[i] == ',';
      if (commas + 1 != columns) throw std::logic_error("output " + name + ": ragged row");
      start = end + 1;
    }
    write(name, content);
  }

  void json_file(const std::string& name, const json& j, const std::vector<std::string>& required) {
    for (const auto& key : required) {
      if (!j.contains(key)) throw std::logic_error("output " + name + ": missing key '" + key + "'");
    }
    write(name, j.dump(2) + "\n");
  }

  const std::vector<std::string>& files() const { return files_; }
  const std::string& dir() const { return dir_; }

 private:
  void write(const std::string& name, const std::string& content) {
    std::ofstream os(fs::path(dir_) / name, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + (fs::path(dir_) / name).string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    files_.push_back(name);
  }

  std::string dir_;
  std::vector<std::string> files_;
};

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void require_plain(const pa::WeightSpec& spec, const char* what) {
  if (spec.num_colors() != 1 || !spec.is_time_constant()) {
    throw pa::ValidationError(std::string(what) + " needs a single-color, time-constant weight spec");
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pa::ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw pa::ValidationError("'" + path + "': " + e.what());
  }
}

bool is_json_path(const std::string& path) { return fs::path(path).extension() == ".json"; }

pa::DegreeMeasure load_degree(const std::string& path) {
  if (is_json_path(path)) return pa::degree_from_json(load_json_file(path));
  std::ifstream in(path);
  if (!in) throw pa::ValidationError("cannot open '" + path + "'");
  return pa::read_degree_csv(in);
}

pa::PairMeasure load_pair(const std::string& path) {
  if (is_json_path(path)) return pa::pair_from_json(load_json_file(path));
  std::ifstream in(path);
  if (!in) throw pa::ValidationError("cannot open '" + path + "'");
  return pa::read_pair_csv(in);
}

pa::PathMeasure load_path(const std::string& path) {
  if (is_json_path(path)) return pa::path_from_json(load_json_file(path));
  std::ifstream in(path);
  if (!in) throw pa::ValidationError("cannot open '" + path + "'");
  return pa::read_path_csv(in);
}

// ---------------------------------------------------------------- commands

void cmd_generate(const CLI::App& app, const Flags& f, const pa::Config& cfg, Output& out, json& summary) {
  const auto n = setting<std::uint32_t>(app, "--n", f.n, cfg, "n", 1000);
  const auto seed = setting<std::uint64_t>(app, "--seed", f.seed, cfg, "seed", 1);
  const auto grid = setting<std::uint32_t>(app, "--grid", f.grid, cfg, "grid", 0);
  const auto log = pa::generate(cfg.spec, cfg.mu, n, seed, 0);
  out.csv("events.csv", pa::to_csv(log), "m,parent,parent_color,child_color,parent_indeg");
  if (grid > 0) {
    out.json_file("attachment.json", pa::to_json(pa::attachment_measure(log)), {"type", "atoms"});
    out.json_file("path.json", pa::to_json(pa::snapshot_path(log, grid)), {"type", "grid", "snapshots"});
  }
  summary = {{"n", n}, {"seed", seed}, {"events", log.events.size()}};
}

void cmd_limit_dist(const CLI::App& app, const Flags& f, const pa::Config& cfg, Output& out, json& summary) {
  const auto kmax = setting<std::size_t>(app, "--kmax", f.kmax, cfg, "kmax", 10);
  const auto& spec = cfg.spec;
  if (!spec.is_time_constant()) throw pa::ValidationError("limit-dist needs time-constant weights");
  std::ostringstream os;
  if (spec.num_colors() == 1) {
    pa::write_csv(pa::pi_f(spec, 0, kmax), os);
    out.csv("limit_dist.csv", os.str(), "k,p");
  } else {
    const std::size_t C = spec.num_colors();
    os << "k,a1,a2,p\n";
    std::vector<pa::DegreeMeasure> laws;
    for (std::size_t a = 0; a < spec.num_pairs(); ++a) laws.push_back(pa::pi_f(spec, a, kmax));
    for (std::size_t k = 0; k <= kmax; ++k) {
      for (std::size_t a = 0; a < spec.num_pairs(); ++a) {
        os << k << ',' << a / C << ',' << a % C << ',' << pa::format_real(laws[a][k]) << '\n';
      }
    }
    for (std::size_t a = 0; a < spec.num_pairs(); ++a) {
      os << "tail," << a / C << ',' << a % C << ',' << pa::format_real(laws[a].tail_mass()) << '\n';
    }
    out.csv("limit_dist.csv", os.str(), "k,a1,a2,p");
  }
  summary = {{"kmax", kmax}};
}

json rate_json(const pa::RateValue& r) {
  json terms = json::array();
  for (double t : r.terms) terms.push_back(real(t));
  return {{"value", real(r.value)}, {"tail_bound", real(r.tail_bound)}, {"terms", terms}};
}

void cmd_rate(const CLI::App&, const Flags& f, const pa::Config& cfg, Output& out, json& summary) {
  if (f.measure.empty()) throw pa::ValidationError("rate: --measure is required");
  const auto& spec = cfg.spec;
  json result;
  if (f.kind == "I") {
    require_plain(spec, "rate I");
    const auto l = load_degree(f.measure);
    result = rate_json(pa::rate_I(l, spec.gamma(0, 0), spec.beta(0, 0)));
    const auto floor = pa::jensen_floor(l, spec.gamma(0, 0), spec.beta(0, 0));
    result["jensen_floor"] = real(floor.floor);
  } else if (f.kind == "J") {
    result = rate_json(pa::rate_J(load_pair(f.measure), cfg.mu, spec));
  } else if (f.kind == "J-tilde" || f.kind == "K" || f.kind == "K-hat") {
    if (f.path.empty()) throw pa::ValidationError("rate: --path is required for " + f.kind);
    const auto omega = load_pair(f.measure);
    const auto nu = load_path(f.path);
    if (f.kind == "J-tilde") {
      const auto r = pa::rate_J_tilde(omega, nu, cfg.mu, spec);
      result = rate_json(r.rate);
      result["matched"] = r.matched;
      result["match_distance"] = r.match_distance;
    } else if (f.kind == "K") {
      result = rate_json(pa::k_functional(omega, nu, cfg.mu, spec));
    } else {
      const auto r = pa::variational_K_hat(omega, nu, cfg.mu, spec);
      result = {{"value", real(r.value)}, {"tail_bound", 0.0}, {"terms", json::array()},
                {"sweeps", r.sweeps}, {"converged", r.converged}};
    }
  } else {
    throw pa::ValidationError("rate: --kind must be one of I, J, J-tilde, K, K-hat");
  }
  result["kind"] = f.kind;
  out.json_file("rate.json", result, {"value", "tail_bound", "terms"});
  summary = result;
}

void cmd_lln(const CLI::App& app, const Flags& f, const pa::Config& cfg, Output& out, json& summary) {
  const auto n = setting<std::uint32_t>(app, "--n", f.n, cfg, "n", 100000);
  const auto reps = setting<std::size_t>(app, "--reps", f.reps, cfg, "reps", 5);
  const auto seed = setting<std::uint64_t>(app, "--seed", f.seed, cfg, "seed", 1);
  const auto& spec = cfg.spec;
  if (!spec.is_time_constant()) throw pa::ValidationError("lln needs time-constant weights");
  const std::size_t P = spec.num_pairs();
  std::ostringstream os;
  os << "rep,n,tv_attachment_pi,tv_attachment_pi_tail,tv_final_pi\n";
  json rows = json::array();
  for (std::size_t r = 0; r < reps; ++r) {
    const auto log = pa::generate(spec, cfg.mu, n, seed, r);
    const auto M = pa::attachment_measure(log);
    const std::size_t K = M.kmax();
    // Largest per-pair TV between M_X(.|a) and pi_f(.|a), and against the tail law of pi_f.
    double tv_pi = 0.0, tv_tail = 0.0;
    for (std::size_t a = 0; a < P; ++a) {
      if (!M.has_conditional(a)) continue;
      const auto cond = M.conditional(a);
      const auto pi = pa::pi_f(spec, a, K);
      tv_pi = std::max(tv_pi, pa::tv_distance(cond, pi));
      // pi_hat(k) = sum_{j>k} pi(j), the attachment law of the limit tree.
      tv_tail = std::max(tv_tail, pa::tv_distance(cond, pa::DegreeMeasure::normalized(pa::tail(pi))));
    }
    // Final in-degree law of vertices against pi_f (single-color diagnostic).
    double tv_final = std::numeric_limits<double>::quiet_NaN();
    if (spec.num_colors() == 1) {
      const auto L = pa::vertex_degree_measure(log);
      tv_final = pa::tv_distance(L, pa::pi_f(spec, 0, L.kmax()));
    }
    os << r << ',' << n << ',' << csv_real(tv_pi) << ',' << csv_real(tv_tail) << ',' << csv_real(tv_final) << '\n';
    rows.push_back({{"rep", r}, {"n", n}, {"tv_attachment_pi", real(tv_pi)},
                    {"tv_attachment_pi_tail", real(tv_tail)}, {"tv_final_pi", real(tv_final)}});
  }
  out.csv("lln.csv", os.str(), "rep,n,tv_attachment_pi,tv_attachment_pi_tail,tv_final_pi");
  summary = {{"n", n}, {"reps", reps}, {"seed", seed}, {"rows", rows}};
}

void cmd_rare_event(const CLI::App& app, const Flags& f, const pa::Config& cfg, Output& out, json& summary) {
  const auto n = setting<std::uint32_t>(app, "--n", f.n, cfg, "n", 100);
  const auto reps = setting<std::size_t>(app, "--reps", f.reps, cfg, "reps", 10000);
  const auto seed = setting<std::uint64_t>(app, "--seed", f.seed, cfg, "seed", 1);
  const auto kmax = setting<std::size_t>(app, "--kmax", f.kmax, cfg, "kmax", 10);
  const auto threads = setting<std::size_t>(app, "--threads", f.threads, cfg, "threads", 1);
  const auto event = pa::Predicate::parse(string_setting(app, "--event", f.event, cfg, "event", "true"));
  if (f.method != "both" && f.method != "naive" && f.method != "is") {
    throw pa::ValidationError("rare-event: --method must be naive, is or both");
  }
  json result = {{"event", event.to_string()}, {"n", n}, {"reps", reps}, {"seed", seed}};
  if (f.method != "is") {
    const auto est = pa::naive_estimate(event, cfg.spec, cfg.mu, n, reps, seed, threads);
    result["naive"] = {{"p_hat", est.p_hat}, {"stderr", est.std_error}, {"hits", est.hits}, {"reps", est.reps}};
  }
  if (f.method != "naive") {
    json info;
    pa::Tilt tilt = pa::Tilt::identity(cfg.spec);
    if (cfg.spec.num_colors() == 1 && cfg.spec.is_time_constant() && !event.constant_value()) {
      pa::DegreeMeasure l_star;
      tilt = pa::event_tilt(event, cfg.spec, kmax, seed, threads, &l_star);
      info = {{"target", pa::to_json(l_star)}};
    }
    // Independent streams for the tilted replicas.
    const auto est = pa::is_estimate(event, cfg.spec, cfg.mu, tilt, n, reps, pa::splitmix64(seed), threads);
    result["p_hat"] = est.p_hat;
    result["stderr"] = est.std_error;
    result["ess"] = est.ess;
    result["excluded"] = est.excluded;
    result["mean_weight"] = est.mean_weight;
    result["mean_weight_stderr"] = est.mean_weight_std_error;
    result["tilt"] = info.is_null() ? json("identity") : info;
  } else {
    result["p_hat"] = result["naive"]["p_hat"];
    result["stderr"] = result["naive"]["stderr"];
    result["ess"] = reps;
    result["excluded"] = 0;
  }
  out.json_file("rare_event.json", result, {"p_hat", "stderr", "ess", "reps", "excluded"});
  summary = result;
}

void cmd_oracle(const CLI::App& app, const Flags& f, const pa::Config& cfg, Output& out, json& summary) {
  const auto n = setting<std::uint32_t>(app, "--n", f.n, cfg, "n", 4);
  const std::size_t C = cfg.spec.num_colors();
  std::ostringstream os;
  os << "outcome,colors,parents,numerator,denominator\n";
  mpq_class total = 0;
  std::size_t id = 0;
  pa::ExactLaw law;
  pa::for_each_outcome(pa::OracleDynamics::base(cfg.spec, cfg.mu, n),
                       [&](const pa::EventLog& log, const mpq_class& p) {
                         std::string colors, parents;
                         for (auto c : log.colors) colors += (colors.empty() ? "" : " ") + std::to_string(c);
                         for (const auto& e : log.events) {
                           parents += (parents.empty() ? "" : " ") + std::to_string(e.parent);
                         }
                         os << ++id << ',' << colors << ',' << parents << ',' << p.get_num().get_str() << ','
                            << p.get_den().get_str() << '\n';
                         total += p;
                         law[pa::exact_attachment_measure(log)] += p;
                       });
  out.csv("oracle.csv", os.str(), "outcome,colors,parents,numerator,denominator");
  json atoms = json::array();
  for (const auto& [key, p] : law) {
    json coords = json::array();
    for (const auto& q : key) coords.push_back(pa::to_string(q));
    atoms.push_back({{"measure", coords}, {"probability", pa::to_string(p)}});
  }
  json result = {{"n", n},           {"num_colors", C},        {"outcomes", id},
                 {"total", pa::to_string(total)}, {"attachment_law", atoms}};
  out.json_file("oracle.json", result, {"n", "outcomes", "total", "attachment_law"});
  summary = {{"n", n}, {"outcomes", id}, {"total", pa::to_string(total)}};
}

void cmd_minimize(const CLI::App& app, const Flags& f, const pa::Config& cfg, Output& out, json& summary) {
  require_plain(cfg.spec, "minimize");
  const auto kmax = setting<std::size_t>(app, "--kmax", f.kmax, cfg, "kmax", 10);
  const auto seed = setting<std::uint64_t>(app, "--seed", f.seed, cfg, "seed", 1);
  const auto threads = setting<std::size_t>(app, "--threads", f.threads, cfg, "threads", 1);
  const auto constraints =
      pa::Predicate::parse(string_setting(app, "--constraints", f.constraints, cfg, "constraints", "true"));
  pa::MinimizeOptions opt;
  opt.seed = seed;
  opt.threads = threads;
  const auto r = pa::minimize_rate_I(constraints, cfg.spec.gamma(0, 0), cfg.spec.beta(0, 0), kmax, opt);
  json starts = json::array();
  for (const auto& s : r.starts) {
    starts.push_back({{"value", real(s.value)}, {"residual", real(s.residual)}, {"iterations", s.iterations}});
  }
  json result = {{"constraints", constraints.to_string()}, {"kmax", kmax}, {"value", real(r.value)},
                 {"residual", real(r.residual)}, {"converged", r.converged}, {"best_start", r.best_start},
                 {"starts", starts}, {"l_star", pa::to_json(r.l_star)}};
  out.json_file("minimize.json", result, {"value", "residual", "l_star"});
  std::ostringstream os;
  pa::write_csv(r.l_star, os);
  out.csv("l_star.csv", os.str(), "k,p");
  summary = {{"value", real(r.value)}, {"converged", r.converged}};
}

void cmd_contract(const CLI::App& app, const Flags& f, const pa::Config& cfg, Output& out, json& summary) {
  const auto kmax = setting<std::size_t>(app, "--kmax", f.kmax, cfg, "kmax", 5);
  const auto seed = setting<std::uint64_t>(app, "--seed", f.seed, cfg, "seed", 1);
  const auto& spec = cfg.spec;
  if (!spec.is_time_constant()) throw pa::ValidationError("contract needs time-constant weights");
  pa::DegreeMeasure l = f.measure.empty() ? pa::pi_f(spec, 0, kmax) : load_degree(f.measure);
  pa::MinimizeOptions opt;
  opt.seed = seed;
  const auto r = pa::contraction_check(l, cfg.mu, spec, kmax, opt);
  json result = {{"kmax", kmax}, {"j_min", real(r.j_min)}, {"i_value", real(r.i_value)},
                 {"gap", real(r.gap)}, {"residual", real(r.residual)}, {"iterations", r.iterations}};
  out.json_file("contract.json", result, {"j_min", "i_value", "gap"});
  summary = result;
}

void cmd_decay_scan(const CLI::App& app, const Flags& f, const pa::Config& cfg, Output& out, json& summary) {
  const auto reps = setting<std::size_t>(app, "--reps", f.reps, cfg, "reps", 10000);
  const auto seed = setting<std::uint64_t>(app, "--seed", f.seed, cfg, "seed", 1);
  const auto kmax = setting<std::size_t>(app, "--kmax", f.kmax, cfg, "kmax", 10);
  const auto threads = setting<std::size_t>(app, "--threads", f.threads, cfg, "threads", 1);
  const auto event = pa::Predicate::parse(string_setting(app, "--event", f.event, cfg, "event", "true"));
  const auto n_list = pa::parse_count_list(string_setting(app, "--n-list", f.n_list, cfg, "n_list", "3,4,5,6,7,8,9,10"));
  pa::DecayScanConfig dc;
  dc.reps = reps;
  dc.seed = seed;
  dc.threads = threads;
  if (cfg.spec.num_colors() == 1 && cfg.spec.is_time_constant()) {
    try {
      dc.rate_prediction = pa::minimize_rate_I(event, cfg.spec.gamma(0, 0), cfg.spec.beta(0, 0), kmax).value;
    } catch (const pa::Infeasible&) {
    }
  }
  const auto rows = pa::decay_rate_scan(event, n_list, cfg.spec, cfg.mu, dc);
  std::ostringstream os;
  os << "n,method,p_hat,stderr,exact,decay,rate_prediction\n";
  json jrows = json::array();
  for (const auto& r : rows) {
    os << r.n << ',' << r.method << ',' << csv_real(r.p_hat) << ',' << csv_real(r.std_error) << ','
       << r.exact << ',' << csv_real(r.decay) << ','
       << (r.rate_prediction ? csv_real(*r.rate_prediction) : std::string()) << '\n';
    jrows.push_back({{"n", r.n}, {"method", r.method}, {"p_hat", real(r.p_hat)}, {"exact", r.exact},
                     {"decay", real(r.decay)}});
  }
  out.csv("decay_scan.csv", os.str(), "n,method,p_hat,stderr,exact,decay,rate_prediction");
  summary = {{"event", event.to_string()}, {"rows", jrows}};
}

int error_exit(const std::string& kind, const std::string& message, int code, const Output* out) {
  const json record = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << record.dump() << std::endl;
  if (out != nullptr) {
    std::error_code ec;
    if (fs::is_directory(out->dir(), ec)) {
      std::ofstream(fs::path(out->dir()) / "error.json") << record.dump(2) << "\n";
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preferential-attachment simulation, rates and rare-event toolkit"};
  app.set_version_flag("--version", PREFATTACH_VERSION);
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", f.seed, "Master seed");
    sub->add_option("--reps", f.reps, "Replicas");
    sub->add_option("--n", f.n, "Number of vertices");
    sub->add_option("--kmax", f.kmax, "Degree truncation");
    sub->add_option("--grid", f.grid, "Uniform snapshot times");
    sub->add_option("--config", f.config, "INI configuration file");
    sub->add_option("--out", f.out, "Output directory");
    sub->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  };

  struct Command {
    CLI::App* app;
    void (*run)(const CLI::App&, const Flags&, const pa::Config&, Output&, json&);
  };
  std::vector<Command> commands;
  auto add = [&](const char* name, const char* help, auto run) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    commands.push_back({sub, run});
    return sub;
  };

  add("generate", "Generate one tree and write its event log", cmd_generate);
  add("limit-dist", "Tabulate the limit degree law pi_f", cmd_limit_dist);
  auto* rate = add("rate", "Evaluate I, J, J-tilde, K or K-hat on measure files", cmd_rate);
  rate->add_option("--kind", f.kind, "I, J, J-tilde, K or K-hat");
  rate->add_option("--measure", f.measure, "Degree (I) or pair measure file, CSV or JSON");
  rate->add_option("--path", f.path, "Path measure file for J-tilde, K and K-hat");
  add("lln", "Distance of the attachment measure to pi_f over replicas", cmd_lln);
  auto* rare = add("rare-event", "Naive and importance-sampling estimates of an event", cmd_rare_event);
  rare->add_option("--event", f.event, "Event predicate, e.g. 'M(0)>=0.75'");
  rare->add_option("--method", f.method, "naive, is or both");
  add("oracle", "Exact outcome table for small n", cmd_oracle);
  auto* minimize = add("minimize", "Minimize the degree rate under threshold constraints", cmd_minimize);
  minimize->add_option("--constraints", f.constraints, "Constraint predicate");
  auto* contract = add("contract", "Compare min J over a degree marginal with I", cmd_contract);
  contract->add_option("--measure", f.measure, "Degree measure file (default pi_f)");
  auto* decay = add("decay-scan", "Tabulate -log P(event) / n over n", cmd_decay_scan);
  decay->add_option("--event", f.event, "Event predicate");
  decay->add_option("--n-list", f.n_list, "Comma-separated n values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit("usage", e.what(), 2, nullptr);
  }

  Output out(f.out);
  try {
    const pa::Config cfg = f.config.empty() ? pa::default_config() : pa::load_config(f.config);
    out.prepare();
    for (const auto& cmd : commands) {
      if (!cmd.app->parsed()) continue;
      json summary;
      cmd.run(*cmd.app, f, cfg, out, summary);
      std::vector<std::string> args(argv + 1, argv + argc);
      const json manifest = {
          {"tool", "prefattach"},
          {"version", PREFATTACH_VERSION},
          {"subcommand", cmd.app->get_name()},
          {"args", args},
          {"config_hash", hex64(pa::fnv1a64(cfg.text))},
          {"seed", f.seed},
          {"threads", f.threads},
          {"timestamp", utc_timestamp()},
          {"outputs", out.files()},
          {"libraries",
           {{"gmp", gmp_version}, {"boost", BOOST_LIB_VERSION}, {"nlohmann_json",
             std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                 "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
          {"summary", summary}};
      std::ofstream(fs::path(out.dir()) / "manifest.json") << manifest.dump(2) << "\n";
    }
  } catch (const pa::ValidationError& e) {
    return error_exit("validation", e.what(), 2, &out);
  } catch (const pa::StructuralError& e) {
    return error_exit("structural", e.what(), 2, &out);
  } catch (const pa::DomainError& e) {
    return error_exit("domain", e.what(), 2, &out);
  } catch (const pa::UndefinedConditional& e) {
    return error_exit("undefined-conditional", e.what(), 2, &out);
  } catch (const pa::Infeasible& e) {
    return error_exit("infeasible", e.what(), 2, &out);
  } catch (const pa::CorruptedLog& e) {
    return error_exit("corrupted-log", e.what(), 3, &out);
  } catch (const std::exception& e) {
    return error_exit("runtime", e.what(), 3, &out);
  }
  return 0;
}
