#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "pa/errors.hpp"
#include "pa/generator.hpp"
#include "pa/oracle.hpp"
#include "pa/rare_events.hpp"
#include "pa/rates.hpp"
#include "support.hpp"

namespace {

pa::Tilt random_tilt(std::mt19937_64& gen, const pa::WeightSpec& spec, std::size_t k_g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> h(spec.num_colors());
  for (auto& x : h) x = u(gen);
  std::vector<std::vector<double>> g(spec.num_buckets(), std::vector<double>((k_g + 1) * spec.num_pairs()));
  for (auto& row : g) {
    for (auto& x : row) x = u(gen);
  }
  return pa::Tilt(h, g, k_g, spec.num_pairs(), u(gen));
}

}  // namespace

TEST_CASE("identity tilt gives zero log-likelihood ratio") {
  for (const auto& spec : {pa::WeightSpec::plain(1, 1), pa_test::two_color_mixed()}) {
    const std::vector<double> mu = spec.num_colors() == 1 ? std::vector<double>{1.0} : std::vector<double>{0.3, 0.7};
    const auto id = pa::Tilt::identity(spec);
    for (std::uint64_t r = 0; r < 200; ++r) {
      CHECK(pa::log_likelihood_ratio(pa::generate(spec, mu, 150, 31, r), id, spec, mu) == 0.0);
    }
  }
}

TEST_CASE("likelihood ratio matches the oracle") {
  std::mt19937_64 gen(2024);
  const pa::WeightSpec bucketed({"r", "b"}, {0.5, 1.0}, {{1.0, 2.0, 0.5, 1.5}, {2.0, 1.0, 1.0, 0.5}},
                                {{2.0, 1.0, 2.5, 1.5}, {0.5, 1.5, 1.5, 2.0}});
  for (const auto& spec : {pa::WeightSpec::plain(1, 1), pa_test::two_color_mixed(), bucketed}) {
    const std::vector<double> mu = spec.num_colors() == 1 ? std::vector<double>{1.0} : std::vector<double>{0.3, 0.7};
    for (int t = 0; t < 3; ++t) {
      const auto tilt = random_tilt(gen, spec, 2);
      for (std::uint32_t n = 3; n <= 5; ++n) {
        const auto base = pa::OracleDynamics::base(spec, mu, n);
        const auto tilted = pa::OracleDynamics::tilted(spec, mu, tilt, n);
        pa::for_each_outcome(base, [&](const pa::EventLog& log, const mpq_class& p) {
          const mpq_class pt = pa::exact_probability(tilted, log);
          const mpq_class ratio = pt / p;
          CHECK(pa::exact_likelihood_ratio(spec, mu, tilt, log) == ratio);
          CHECK(std::abs(pa::log_likelihood_ratio(log, tilt, spec, mu) - pa::log_rational(ratio)) < 1e-10);
        });
      }
    }
  }
}

TEST_CASE("hand-computed two-vertex ratio") {
  const auto spec = pa_test::two_color_uniform();
  const pa::Tilt tilt({std::log(2.0), 0.0}, {std::vector<double>(4, 0.0)}, 0, 4, 0.0);
  pa::EventLog log;
  log.n = 2;
  log.num_colors = 2;
  log.colors = {0, 0};
  log.events = {{2, 1, 0, 0, 0}};
  CHECK(pa::log_likelihood_ratio(log, tilt, spec, {0.5, 0.5}) == doctest::Approx(2 * std::log(4.0 / 3)).epsilon(1e-15));
  log.colors = {0, 1};
  log.events = {{2, 1, 0, 1, 0}};
  CHECK(pa::log_likelihood_ratio(log, tilt, spec, {0.5, 0.5}) ==
        doctest::Approx(std::log(4.0 / 3) + std::log(2.0 / 3)).epsilon(1e-15));
}

TEST_CASE("naive estimator examples") {
  const auto spec = pa::WeightSpec::plain(1, 1);
  CHECK(pa::naive_estimate(pa::Predicate::parse("true"), spec, {1.0}, 20, 100, 1).p_hat == 1.0);
  CHECK(pa::naive_estimate(pa::Predicate::parse("false"), spec, {1.0}, 20, 100, 1).p_hat == 0.0);
  const auto est = pa::naive_estimate(pa::Predicate::parse("M(0)>=1"), spec, {1.0}, 3, 100000, 5);
  CHECK(std::abs(est.p_hat - 1.0 / 3) < 3 * est.std_error);
  CHECK_THROWS_AS(pa::naive_estimate(pa::Predicate::parse("true"), spec, {1.0}, 3, 1, 5), pa::DomainError);
}

TEST_CASE("identity-tilt importance sampling equals the naive estimate") {
  const auto spec = pa_test::two_color_mixed();
  const auto event = pa::Predicate::parse("M(0)>=0.6");
  const auto is = pa::is_estimate(event, spec, {0.3, 0.7}, pa::Tilt::identity(spec), 30, 2000, 9);
  const auto nv = pa::naive_estimate(event, spec, {0.3, 0.7}, 30, 2000, 9);
  CHECK(is.p_hat == nv.p_hat);
  CHECK(is.std_error == nv.std_error);
  CHECK(is.hits == nv.hits);
  CHECK(is.ess == doctest::Approx(2000.0));
}

TEST_CASE("tilted weights have mean one") {
  std::mt19937_64 gen(6);
  const auto spec = pa::WeightSpec::plain(1, 1);
  std::vector<std::vector<double>> g(1, std::vector<double>(6));
  for (std::size_t k = 0; k < 6; ++k) g[0][k] = 2 * std::log(k + 1.0) - std::log(2.0) + (k == 0 ? 0.3 : 0.0);
  const pa::Tilt mild({0.0}, g, 5, 1, 0.0);
  const auto est = pa::is_estimate(pa::Predicate::parse("true"), spec, {1.0}, mild, 8, 20000, 3);
  CHECK(std::abs(est.p_hat - 1.0) < 3 * est.std_error);
  CHECK(std::abs(est.mean_weight - 1.0) < 4 * est.mean_weight_std_error);
}

TEST_CASE("suggest_tilt examples") {
  const auto spec = pa::WeightSpec::plain(1, 1);
  const auto pi = pa::pi_f(1, 1, 20);
  const auto flat = pa::suggest_tilt(pi, spec);
  for (std::size_t k = 0; k <= 20; ++k) CHECK(flat.tilted_weight(spec, 0, k, 0) == doctest::Approx(1.0).epsilon(1e-15));
  const pa::DegreeMeasure w({0.4, 0.3, 0.2, 0.1});
  const auto same = pa::suggest_tilt(w, w, spec);
  for (std::size_t k = 0; k <= 3; ++k) CHECK(same.tilted_weight(spec, 0, k, 0) == doctest::Approx(1.0).epsilon(1e-15));
  const pa::DegreeMeasure support({0.5, 0.1, 0.1, 0.1, 0.1, 0.1});
  const pa::DegreeMeasure gap({0.5, 0.2, 0.1, 0.1, 0.1, 0.0});
  try {
    pa::suggest_tilt(support, gap, spec);
    FAIL("expected a support violation");
  } catch (const pa::DomainError& e) {
    CHECK(std::string(e.what()).find("(5,0,0)") != std::string::npos);
  }
  // Matching the pi_hat attachment law against pi_f reproduces f up to scale.
  const auto hat = pa::DegreeMeasure::normalized(pa::tail(pi));
  const auto id = pa::suggest_tilt(hat, pi, spec);
  for (std::size_t k = 0; k <= 10; ++k) {
    CHECK(id.tilted_weight(spec, 0, k, 0) / id.tilted_weight(spec, 0, 0, 0) == doctest::Approx(k + 1.0).epsilon(1e-10));
  }
}

TEST_CASE("implied vertex law") {
  const auto pi = pa::pi_f(1, 1, 30);
  const auto hat = pa::tail(pi);
  double body = 0.0;
  for (double x : hat) body += x;
  const auto v = pa::implied_vertex_law(pa::DegreeMeasure(hat, 1.0 - body));
  CHECK_THROWS_AS(pa::implied_vertex_law(pa::DegreeMeasure({0.2, 0.5, 0.3})), pa::DomainError);
  const auto x = pa::DegreeMeasure({0.5, 0.3, 0.2});
  const auto nu = pa::implied_vertex_law(x);
  CHECK(nu[0] == doctest::Approx(0.5));
  CHECK(nu[1] == doctest::Approx(0.2));
  CHECK(nu[2] == doctest::Approx(0.1));
  CHECK(nu.tail_mass() == doctest::Approx(0.2));
  for (std::size_t k = 0; k <= 30; ++k) CHECK(v[k] == doctest::Approx(pi[k]).epsilon(1e-10));
}

TEST_CASE("decay scan examples") {
  const auto spec = pa::WeightSpec::plain(1, 1);
  const auto rows = pa::decay_rate_scan(pa::Predicate::parse("M(0)>=0.99"), {3, 4, 10}, spec, {1.0});
  CHECK(rows[0].exact == "1/3");
  CHECK(rows[0].decay == doctest::Approx(0.36620).epsilon(1e-5 / 0.36620));
  CHECK(rows[1].exact == "1/15");
  CHECK(rows[1].decay == doctest::Approx(std::log(15.0) / 4).epsilon(1e-12));
  CHECK(rows[2].method == "oracle");
  for (const auto& r : pa::decay_rate_scan(pa::Predicate::parse("true"), {3, 5, 12}, spec, {1.0})) CHECK(r.decay == 0.0);
  CHECK_THROWS_AS(pa::decay_rate_scan(pa::Predicate::parse("true"), {1}, spec, {1.0}), pa::DomainError);
}
