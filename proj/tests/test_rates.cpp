#include <doctest.h>

#include <cmath>
#include <random>

#include "pa/errors.hpp"
#include "pa/rates.hpp"
#include "support.hpp"

using pa::DegreeMeasure;
using pa::PairMeasure;
using pa::PathMeasure;

namespace {

PathMeasure constant_path(const PairMeasure& omega, std::vector<double> grid = {0.0, 1.0}) {
  PathMeasure::Snapshot conds(omega.num_pairs());
  for (std::size_t a = 0; a < omega.num_pairs(); ++a) {
    if (omega.has_conditional(a)) conds[a] = omega.conditional(a);
  }
  return PathMeasure::constant(omega.num_colors(), std::move(grid), conds, omega.pair_marginal());
}

double entropy(const DegreeMeasure& p, const std::vector<double>& ref) {
  double s = 0.0;
  for (std::size_t k = 0; k <= p.kmax(); ++k) {
    if (p[k] > 0) s += p[k] * std::log(p[k] / ref[k]);
  }
  return s;
}

}  // namespace

TEST_CASE("pi_f closed forms") {
  const auto pi = pa::pi_f(1, 1, 100);
  for (std::size_t k = 0; k <= 100; ++k) {
    const double kk = static_cast<double>(k);
    CHECK(std::abs(pi[k] - 4.0 / ((kk + 1) * (kk + 2) * (kk + 3))) < 1e-12);
  }
  const auto pi2 = pa::pi_f(1, 2, 50);
  CHECK(std::abs(pi2[0] - 0.6) < 1e-12);
  CHECK(std::abs(pi2[1] - 0.2) < 1e-12);
  CHECK(std::abs(pi2[2] - 3.0 / 35) < 1e-12);
  for (std::size_t k = 0; k <= 50; ++k) {
    const double kk = static_cast<double>(k);
    CHECK(std::abs(pi2[k] - 72.0 / ((kk + 2) * (kk + 3) * (kk + 4) * (kk + 5))) < 1e-12);
  }
  for (double g : {0.5, 1.0, 2.0, 3.5}) {
    for (double b : {0.5, 1.0, 4.0}) {
      if (g + b < 1) continue;
      const auto p = pa::pi_f(g, b, 40);
      double s = p.tail_mass();
      for (double x : p.probs()) s += x;
      CHECK(std::abs(s - 1.0) < 1e-12);
      const auto t = pa::tail(p);
      for (std::size_t k = 0; k <= 40; ++k) CHECK(std::abs(p[k] - (g + b) / (g * k + b) * t[k]) < 1e-12);
    }
  }
  CHECK_THROWS_AS(pa::pi_f(pa::WeightSpec({"x"}, {0.5, 1.0}, {{1.0}, {1.0}}, {{1.0}, {1.0}}), 0, 5), pa::DomainError);
}

TEST_CASE("rate_I examples") {
  const auto at_pi = pa::rate_I(pa::pi_f(1, 1, 200), 1, 1);
  CHECK(std::abs(at_pi.value) < 1e-10);
  CHECK(std::isinf(pa::rate_I(DegreeMeasure::delta(0, 5), 1, 1).value));
  const auto geo = pa::rate_I(pa_test::geometric_half(200), 1, 1);
  double series = 0.0;
  for (int k = 0; k <= 200; ++k) series += std::ldexp(1.0, -(k + 1)) * std::log((k + 1) / 2.0);
  CHECK(geo.value == doctest::Approx(series).epsilon(1e-12));
  CHECK(geo.value == doctest::Approx(-0.1854).epsilon(0.0005 / 0.1854));
  const auto floor = pa::jensen_floor(pa_test::geometric_half(200), 1, 1);
  CHECK(floor.reference_mass == doctest::Approx(2 * std::log(2.0)).epsilon(1e-6));
  CHECK(geo.value >= floor.floor);
}

TEST_CASE("Jensen floor on random measures") {
  std::mt19937_64 gen(41);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto l = pa_test::random_degree(gen, 20, 0.01);
    const auto r = pa::rate_I(l, 1, 1);
    const auto f = pa::jensen_floor(l, 1, 1);
    CHECK(r.value >= f.floor - 1e-9);
    CHECK(r.value >= -std::log(f.reference_mass) - 1e-9);
  }
}

TEST_CASE("rate_J examples") {
  const auto spec = pa_test::two_color_mixed();
  const std::vector<double> mu{0.3, 0.7};
  std::vector<DegreeMeasure> conds;
  for (std::size_t a = 0; a < 4; ++a) conds.push_back(pa::pi_f(spec, a, 300));
  // omega_2 = mu x mu has second-coordinate marginal mu.
  const std::vector<double> w2{0.09, 0.21, 0.21, 0.49};
  const auto omega = PairMeasure::from_conditionals(2, w2, conds);
  CHECK(std::abs(pa::rate_J(omega, mu, spec).value) < 1e-10);

  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 50; ++rep) {
    const auto l = pa_test::random_degree(gen, 12);
    const auto single = PairMeasure::product(l, 1, std::vector<double>{1.0});
    CHECK(pa::rate_J(single, {1.0}, pa::WeightSpec::plain(1, 1)).value == pa::rate_I(l, 1, 1).value);
  }
  // A top-of-support atom has zero tail reference.
  const auto finite = PairMeasure::product(DegreeMeasure({0.5, 0.5}), 1, std::vector<double>{1.0});
  CHECK(std::isinf(pa::rate_J(finite, {1.0}, pa::WeightSpec::plain(1, 1)).value));
}

TEST_CASE("rate_J_tilde examples") {
  const auto spec = pa::WeightSpec::plain(1, 1);
  const auto pi = PairMeasure::product(pa::pi_f(1, 1, 300), 1, std::vector<double>{1.0});
  const auto at_pi = pa::rate_J_tilde(pi, constant_path(pi, {0.0, 0.5, 1.0}), {1.0}, spec);
  CHECK(at_pi.matched);
  // The reference (c/f) pi_f is not pi_f, so the value is <log(f/c), pi_f>, not zero.
  double expected = 0.0;
  for (std::size_t k = 0; k <= 300; ++k) expected += pa::pi_f(1, 1, 300)[k] * std::log((k + 1.0) / 2.0);
  CHECK(at_pi.rate.value == doctest::Approx(expected).epsilon(1e-12));
  CHECK(at_pi.rate.value < -0.3);

  const auto p = DegreeMeasure({0.6, 0.3, 0.1});
  const auto q = DegreeMeasure({0.5, 0.3, 0.2});
  const auto omega_q = PairMeasure::product(q, 1, std::vector<double>{1.0});
  const auto omega_p = PairMeasure::product(p, 1, std::vector<double>{1.0});
  CHECK(pa::tv_distance(p, q) == doctest::Approx(0.1));
  const auto mismatch = pa::rate_J_tilde(omega_q, constant_path(omega_p), {1.0}, spec);
  CHECK_FALSE(mismatch.matched);
  CHECK(std::isinf(mismatch.rate.value));

  const PathMeasure two(1, {0.0, 0.5, 1.0}, {{p}, {p}, {q}}, {{1.0}, {1.0}, {1.0}});
  const auto r = pa::rate_J_tilde(omega_q, two, {1.0}, spec);
  std::vector<double> rp(3), rq(3);
  for (std::size_t k = 0; k < 3; ++k) {
    rp[k] = 2.0 / (k + 1.0) * p[k];
    rq[k] = 2.0 / (k + 1.0) * q[k];
  }
  CHECK(r.rate.value == doctest::Approx(0.5 * entropy(q, rp) + 0.5 * entropy(q, rq)).epsilon(1e-14));

  // Grid must refine the buckets.
  const pa::WeightSpec bucketed({"x"}, {0.4, 1.0}, {{1.0}, {2.0}}, {{1.0}, {1.0}});
  CHECK_THROWS_AS(pa::k_functional(omega_q, two, {1.0}, bucketed), pa::DomainError);
}

TEST_CASE("consistency chain on a geometric law") {
  const auto spec = pa::WeightSpec::plain(1, 1);
  const auto geo = PairMeasure::product(pa_test::geometric_half(60), 1, std::vector<double>{1.0});
  const double i = pa::rate_I(geo.degree_marginal(), 1, 1).value;
  const double j = pa::rate_J(geo, {1.0}, spec).value;
  const double jt = pa::rate_J_tilde(geo, constant_path(geo), {1.0}, spec).rate.value;
  CHECK(j == i);
  CHECK(std::abs(jt - j) < 1e-10);
}

TEST_CASE("K-hat zero tilt closed form") {
  const auto spec = pa_test::two_color_mixed();
  std::mt19937_64 gen(8);
  const std::vector<double> mu{0.4, 0.6};
  std::vector<DegreeMeasure> conds, nus;
  for (int a = 0; a < 4; ++a) {
    conds.push_back(pa_test::random_degree(gen, 6));
    nus.push_back(pa_test::random_degree(gen, 6));
  }
  const std::vector<double> w2{0.1, 0.2, 0.3, 0.4};
  const auto omega = PairMeasure::from_conditionals(2, w2, conds);
  PathMeasure::Snapshot snap(nus.begin(), nus.end());
  const auto nu = PathMeasure::constant(2, {0.0, 0.5, 1.0}, snap, w2);
  const double value = pa::k_hat_objective(omega, nu, mu, spec, {0.0, 0.0},
                                           std::vector<std::vector<double>>(2, std::vector<double>(7 * 4, 0.0)));
  double expected = std::log(spec.c(0));
  for (std::size_t a = 0; a < 4; ++a) {
    double inv = 0.0;
    for (std::size_t k = 0; k <= 6; ++k) {
      expected -= 2.0 * omega.atom(k, a) * std::log(spec.weight(0, k, a));
      inv += nus[a][k] / spec.weight(0, k, a);
    }
    expected -= w2[a] * std::log(inv);
  }
  CHECK(value == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("K-hat dominates K on mean-one conditionals") {
  std::mt19937_64 gen(77);
  const auto plain = pa::WeightSpec::plain(1, 1);
  const auto two = pa_test::two_color_uniform();
  for (int rep = 0; rep < 6; ++rep) {
    const bool colored = rep % 2 == 1;
    const auto& spec = colored ? two : plain;
    std::vector<DegreeMeasure> conds;
    for (std::size_t a = 0; a < spec.num_pairs(); ++a) conds.push_back(pa_test::tilted_dirichlet(gen, 15));
    const auto w2 = colored ? pa_test::dirichlet(gen, 4) : std::vector<double>{1.0};
    const std::vector<double> mu = colored ? std::vector<double>{0.45, 0.55} : std::vector<double>{1.0};
    const auto omega = PairMeasure::from_conditionals(spec.num_colors(), w2, conds);
    const auto nu = constant_path(omega);
    const double k = pa::k_functional(omega, nu, mu, spec).value;
    const auto kh = pa::variational_K_hat(omega, nu, mu, spec);
    CHECK(kh.value >= k - 1e-6);
  }
  // Fixed point: K = 0, optimized value nonnegative.
  const auto pi15 = pa::pi_f(1, 1, 15);
  const auto pi = PairMeasure::product(pi15, 1, std::vector<double>{1.0});
  const std::vector<double> body(pi15.probs().begin(), pi15.probs().end());
  const auto pi_body = PairMeasure::product(DegreeMeasure::normalized(body), 1, std::vector<double>{1.0});
  CHECK(pa::variational_K_hat(pi_body, constant_path(pi_body), {1.0}, plain).value >= -1e-6);
  // With nu = omega the entropy form reduces to <log(f/c), omega>.
  double expected = 0.0;
  for (std::size_t k = 0; k <= 15; ++k) expected += pi15[k] * std::log((k + 1.0) / 2.0);
  CHECK(pa::k_functional(pi, constant_path(pi), {1.0}, plain).value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("K-hat falls below K for heavy conditionals") {
  // The supremum exceeds K by 2 <log(c/f), omega>, negative when mass sits at high degree.
  const auto spec = pa::WeightSpec::plain(1, 1);
  const DegreeMeasure heavy({0.1, 0.1, 0.1, 0.1, 0.6});
  const auto omega = PairMeasure::product(heavy, 1, std::vector<double>{1.0});
  const auto nu = constant_path(omega);
  const double k = pa::k_functional(omega, nu, {1.0}, spec).value;
  const auto kh = pa::variational_K_hat(omega, nu, {1.0}, spec);
  double shift = 0.0;
  for (std::size_t j = 0; j <= 4; ++j) shift += 2.0 * heavy[j] * std::log(2.0 / (j + 1.0));
  CHECK(kh.converged);
  CHECK(kh.value == doctest::Approx(k + shift).epsilon(1e-6));
  CHECK(kh.value < k);
  pa::VariationalOptions none;
  none.max_sweeps = 0;
  CHECK_THROWS(pa::variational_K_hat(omega, nu, {1.0}, spec, none));
}
