#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "pa/empirics.hpp"
#include "pa/errors.hpp"
#include "pa/event_log.hpp"
#include "pa/generator.hpp"
#include "pa/oracle.hpp"
#include "support.hpp"

namespace {

std::string key(const pa::EventLog& log) {
  std::string s;
  for (auto c : log.colors) s += std::to_string(c);
  s += '|';
  for (const auto& e : log.events) s += std::to_string(e.parent) + ',';
  return s;
}

// Chi-square goodness of fit of generated histories against the oracle law,
// pooling outcomes whose expected count is below 5.
double chi_square_p(const pa::WeightSpec& spec, const std::vector<double>& mu, std::uint32_t n,
                    std::size_t runs, std::uint64_t seed, bool tilted_identity = false) {
  std::map<std::string, double> expected;
  for (const auto& o : pa::enumerate(spec, mu, n)) expected[key(o.log)] = o.probability.get_d() * runs;
  std::map<std::string, double> observed;
  const auto tilt = pa::Tilt::identity(spec);
  for (std::size_t r = 0; r < runs; ++r) {
    const auto log = tilted_identity ? pa::generate_tilted(spec, mu, tilt, n, seed, r)
                                     : pa::generate(spec, mu, n, seed, r);
    const auto k = key(log);
    REQUIRE(expected.count(k) == 1);
    observed[k] += 1;
  }
  double stat = 0.0, pooled_e = 0.0, pooled_o = 0.0;
  std::size_t bins = 0;
  for (const auto& [k, e] : expected) {
    const double o = observed.count(k) ? observed[k] : 0.0;
    if (e < 5) {
      pooled_e += e;
      pooled_o += o;
      continue;
    }
    stat += (o - e) * (o - e) / e;
    ++bins;
  }
  if (pooled_e > 0) {
    stat += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
    ++bins;
  }
  boost::math::chi_squared dist(static_cast<double>(bins - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST_CASE("n = 2 has a single event") {
  const auto log = pa::generate(pa_test::two_color_mixed(), {0.5, 0.5}, 2, 1);
  REQUIRE(log.events.size() == 1);
  CHECK(log.events[0].m == 2);
  CHECK(log.events[0].parent == 1);
  CHECK(log.events[0].parent_indegree == 0);
  CHECK_THROWS_AS(pa::generate(pa::WeightSpec::plain(1, 1), {1.0}, 1, 1), pa::DomainError);
}

TEST_CASE("n = 3 parent frequency") {
  const std::size_t runs = 100000;
  std::size_t root = 0;
  for (std::size_t r = 0; r < runs; ++r) root += pa::generate(pa::WeightSpec::plain(1, 1), {1.0}, 3, 17, r).events[1].parent == 1;
  const double p = 2.0 / 3, phat = static_cast<double>(root) / runs;
  CHECK(std::abs(phat - p) < 3 * std::sqrt(p * (1 - p) / runs));
}

TEST_CASE("n = 4 histories match the oracle") {
  CHECK(chi_square_p(pa::WeightSpec::plain(1, 1), {1.0}, 4, 100000, 21) > 0.001);
  CHECK(chi_square_p(pa_test::two_color_mixed(), {0.3, 0.7}, 4, 100000, 22) > 0.001);
  CHECK(chi_square_p(pa_test::two_color_mixed(), {0.3, 0.7}, 5, 100000, 23) > 0.001);
}

TEST_CASE("identity tilt reproduces the base sampler") {
  const auto spec = pa_test::two_color_mixed();
  const auto tilt = pa::Tilt::identity(spec);
  for (std::uint64_t r = 0; r < 50; ++r) {
    CHECK(pa::generate_tilted(spec, {0.3, 0.7}, tilt, 300, 4, r) == pa::generate(spec, {0.3, 0.7}, 300, 4, r));
  }
  // An unflagged tilt numerically equal to the identity follows the histogram sampler.
  const pa::WeightSpec plain = pa::WeightSpec::plain(1, 1);
  std::vector<std::vector<double>> g(1, std::vector<double>(8));
  for (std::size_t k = 0; k < 8; ++k) g[0][k] = 2 * std::log(k + 1.0) - std::log(2.0);
  const pa::Tilt manual({0.0}, g, 7, 1, 0.0);
  CHECK(chi_square_p(plain, {1.0}, 4, 50000, 5, true) > 0.001);
  std::map<std::string, double> counts;
  for (std::size_t r = 0; r < 30000; ++r) counts[key(pa::generate_tilted(plain, {1.0}, manual, 4, 6, r))] += 1;
  double stat = 0.0;
  for (const auto& o : pa::enumerate(plain, {1.0}, 4)) {
    const double e = o.probability.get_d() * 30000;
    const double c = counts[key(o.log)];
    stat += (c - e) * (c - e) / e;
  }
  CHECK(boost::math::cdf(boost::math::complement(boost::math::chi_squared(5.0), stat)) > 0.001);
}

TEST_CASE("tilted color law") {
  const pa::Tilt t({std::log(2.0), 0.0}, {std::vector<double>(4, 0.0)}, 0, 4, 0.0);
  const auto mu_t = t.tilted_colors({0.5, 0.5});
  CHECK(mu_t[0] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(mu_t[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(t.log_normalizer({0.5, 0.5}) == doctest::Approx(std::log(1.5)).epsilon(1e-15));
}

TEST_CASE("zero tilt favours low-degree parents") {
  const auto spec = pa::WeightSpec::plain(1, 1);
  const auto base = pa::attachment_measure(pa::generate(spec, {1.0}, 10000, 8)).degree_marginal();
  const auto flat = pa::attachment_measure(pa::generate_tilted(spec, {1.0}, pa::Tilt::zero(spec), 10000, 8)).degree_marginal();
  const auto tb = pa::tail(base);
  const auto tf = pa::tail(flat);
  for (std::size_t k = 0; k < std::min(tb.size(), tf.size()); ++k) CHECK(tf[k] <= tb[k] + 1e-12);
}

TEST_CASE("logs replay and are deterministic") {
  const auto spec = pa_test::two_color_mixed();
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto log = pa::generate(spec, {0.3, 0.7}, 500, 99, r);
    CHECK_NOTHROW(pa::replay_validate(log));
    std::uint64_t total = 0;
    for (auto d : pa::final_indegrees(log)) total += d;
    CHECK(total == 499);
    CHECK(log == pa::generate(spec, {0.3, 0.7}, 500, 99, r));
    std::istringstream in(pa::to_csv(log));
    const auto back = pa::read_csv(in, 2);
    CHECK(back.events == log.events);
    CHECK(back.colors == log.colors);
  }
  CHECK_FALSE(pa::generate(spec, {0.3, 0.7}, 500, 99, 0) == pa::generate(spec, {0.3, 0.7}, 500, 99, 1));
}

TEST_CASE("corrupted logs are rejected") {
  auto log = pa::generate(pa::WeightSpec::plain(1, 1), {1.0}, 20, 1);
  log.events[5].parent_indegree += 1;
  CHECK_THROWS_AS(pa::replay_validate(log), pa::CorruptedLog);
  std::istringstream bad("m,parent,parent_color,child_color,parent_indeg\n2,1,0,0,0\n3,3,0,0,0\n");
  CHECK_THROWS_AS(pa::read_csv(bad), pa::CorruptedLog);
  std::istringstream header("m,parent\n2,1\n");
  CHECK_THROWS_AS(pa::read_csv(header), pa::CorruptedLog);
}
