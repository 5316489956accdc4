#include <doctest.h>

#include <cmath>

#include "pa/errors.hpp"
#include "pa/optimize.hpp"
#include "pa/rates.hpp"
#include "support.hpp"

using pa::Predicate;

TEST_CASE("unconstrained minimum is signed and below the fixed point") {
  const auto r = pa::minimize_rate_I(Predicate::constant(true), 1, 1, 3);
  CHECK(r.converged);
  CHECK(r.value <= pa::rate_I(pa::pi_f(1, 1, 3), 1, 1).value + 1e-8);
  CHECK(r.value < 0.0);
}

TEST_CASE("boundary-feasible fixed point") {
  const auto r = pa::minimize_rate_I(Predicate::parse("M(0)>=2/3"), 1, 1, 10);
  CHECK(r.value <= pa::rate_I(pa::pi_f(1, 1, 10), 1, 1).value + 1e-8);
}

TEST_CASE("minimizer agrees with grid search") {
  const auto event = Predicate::parse("M(0)>=0.9");
  const auto r = pa::minimize_rate_I(event, 1, 1, 3);
  const auto g = pa::grid_search_rate_I(event, 1, 1, 3);
  CHECK(r.converged);
  CHECK(r.value > 0.0);
  CHECK(std::abs(r.value - g.value) < 1e-4);
  CHECK(r.l_star[0] >= 0.9 - 1e-12);
  for (const auto& s : r.starts) CHECK(std::abs(s.value - r.value) < 1e-6);
}

TEST_CASE("nested constraint sets are monotone") {
  double previous = -1e300;
  for (const char* c : {"M(0)>=0.5", "M(0)>=0.7", "M(0)>=0.8", "M(0)>=0.8 && M(1)<=0.05", "M(0)>=0.9 && M(1)<=0.05"}) {
    const auto r = pa::minimize_rate_I(Predicate::parse(c), 1, 1, 6);
    CHECK(r.value >= previous - 1e-8);
    previous = r.value;
  }
}

TEST_CASE("best start never exceeds any feasible evaluated point") {
  const auto event = Predicate::parse("M(0)>=0.75");
  const auto r = pa::minimize_rate_I(event, 1, 1, 10);
  for (const auto& s : r.starts) CHECK(r.value <= s.value + 1e-12);
  CHECK(event.holds(r.l_star, 1e-12));
  CHECK(r.value == doctest::Approx(pa::rate_I(r.l_star, 1, 1).value).epsilon(1e-12));
}

TEST_CASE("infeasible and malformed constraints") {
  CHECK_THROWS_AS(pa::minimize_rate_I(Predicate::parse("M(0)>=0.7 && M(1)>=0.4"), 1, 1, 5), pa::Infeasible);
  CHECK_THROWS_AS(pa::minimize_rate_I(Predicate::parse("M(0)>=0.5 && M(0)<=0.4"), 1, 1, 5), pa::Infeasible);
  CHECK_THROWS_AS(pa::minimize_rate_I(Predicate::parse("M(0,0,0)>=0.5"), 1, 1, 5), pa::ValidationError);
  CHECK_THROWS_AS(pa::minimize_rate_I(Predicate::parse("M(9)>=0.1"), 1, 1, 5), pa::ValidationError);
}

TEST_CASE("contraction check") {
  const auto pi = pa::pi_f(1, 1, 5);
  const auto one = pa::contraction_check(pi, {1.0}, pa::WeightSpec::plain(1, 1), 5);
  CHECK(one.gap == 0.0);
  const auto two = pa::contraction_check(pi, {0.5, 0.5}, pa_test::two_color_uniform(), 5);
  CHECK(two.j_min <= two.i_value + 1e-6);
  CHECK(std::abs(two.i_value - pa::rate_I(pi, 1, 1).value) < 1e-15);
  CHECK(std::abs(two.gap) <= 1e-4);
  const pa::DegreeMeasure perturbed({0.6, 0.2, 0.08, 0.05, 0.03, 0.02}, 0.02);
  const auto p = pa::contraction_check(perturbed, {0.3, 0.7}, pa_test::two_color_uniform(), 5);
  CHECK(std::abs(p.gap) <= 1e-4);
}
