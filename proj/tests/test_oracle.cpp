#include <doctest.h>

#include <string>

#include "pa/errors.hpp"
#include "pa/oracle.hpp"
#include "support.hpp"

namespace {

mpq_class q(const char* s) { return mpq_class(s, 10); }

pa::ExactLaw attachment_law(std::uint32_t n) {
  return pa::exact_law(pa::exact_attachment_measure, pa::WeightSpec::plain(1, 1), {1.0}, n);
}

}  // namespace

TEST_CASE("outcome tables for small n") {
  const auto spec = pa::WeightSpec::plain(1, 1);
  const auto two = pa::enumerate(spec, {1.0}, 2);
  REQUIRE(two.size() == 1);
  CHECK(two[0].probability == 1);
  const auto three = pa::enumerate(spec, {1.0}, 3);
  REQUIRE(three.size() == 2);
  CHECK(three[0].probability == q("2/3"));
  CHECK(three[1].probability == q("1/3"));
  const auto four = pa::enumerate(spec, {1.0}, 4);
  CHECK(four.size() == 6);
  mpq_class total = 0;
  for (const auto& o : four) total += o.probability;
  CHECK(total == 1);
}

TEST_CASE("exact attachment laws") {
  const auto l3 = attachment_law(3);
  REQUIRE(l3.size() == 2);
  CHECK(l3.at({q("1/2"), q("1/2")}) == q("2/3"));
  CHECK(l3.at({q("1")}) == q("1/3"));
  const auto l4 = attachment_law(4);
  REQUIRE(l4.size() == 3);
  CHECK(l4.at({q("1/3"), q("1/3"), q("1/3")}) == q("2/5"));
  CHECK(l4.at({q("2/3"), q("1/3")}) == q("8/15"));
  CHECK(l4.at({q("1")}) == q("1/15"));
  const auto constant = pa::exact_law([](const pa::EventLog&) { return std::vector<mpq_class>{1}; },
                                      pa::WeightSpec::plain(1, 1), {1.0}, 5);
  REQUIRE(constant.size() == 1);
  CHECK(constant.begin()->second == 1);
}

TEST_CASE("exact event probabilities") {
  const auto spec = pa::WeightSpec::plain(1, 1);
  CHECK(pa::exact_event_probability(pa::Predicate::parse("M(0)>=0.99"), spec, {1.0}, 3) == q("1/3"));
  CHECK(pa::exact_event_probability(pa::Predicate::parse("M(0)>=0.99"), spec, {1.0}, 4) == q("1/15"));
  CHECK(pa::exact_event_probability(pa::Predicate::parse("true"), spec, {1.0}, 6) == 1);
  CHECK(pa::exact_event_probability(pa::Predicate::parse("false"), spec, {1.0}, 6) == 0);
  CHECK(pa::exact_event_probability(pa::Predicate::parse("M(0)>=1/2 && M(0)<=1/2"), spec, {1.0}, 3) == q("2/3"));
}

TEST_CASE("colored enumeration sums to one") {
  for (std::uint32_t n = 2; n <= 6; ++n) {
    mpq_class total = 0;
    std::size_t count = 0;
    pa::for_each_outcome(pa::OracleDynamics::base(pa_test::two_color_mixed(), {0.3, 0.7}, n),
                         [&](const pa::EventLog& log, const mpq_class& p) {
                           CHECK_NOTHROW(pa::replay_validate(log));
                           total += p;
                           ++count;
                         });
    CHECK(total == 1);
    double leaves = 1;
    for (std::uint32_t m = 1; m < n; ++m) leaves *= m;
    CHECK(static_cast<double>(count) == doctest::Approx(leaves * (1u << n)));
  }
}

TEST_CASE("oracle refuses large n") {
  const auto spec = pa::WeightSpec::plain(1, 1);
  CHECK(pa::default_oracle_limit(1) == 10);
  CHECK(pa::default_oracle_limit(2) == 7);
  try {
    pa::enumerate(spec, {1.0}, 11);
    FAIL("expected a refusal");
  } catch (const pa::DomainError& e) {
    CHECK(std::string(e.what()).find("outcomes") != std::string::npos);
  }
  CHECK(pa::outcome_count_estimate(2, 4) == doctest::Approx(96.0));
}

TEST_CASE("exact probability of a generated history") {
  const auto spec = pa_test::two_color_mixed();
  const auto dyn = pa::OracleDynamics::base(spec, {0.3, 0.7}, 5);
  pa::for_each_outcome(dyn, [&](const pa::EventLog& log, const mpq_class& p) {
    CHECK(pa::exact_probability(dyn, log) == p);
  });
  CHECK(pa::log_rational(q("1/15")) == doctest::Approx(-std::log(15.0)).epsilon(1e-15));
  CHECK(pa::to_string(q("8/15")) == "8/15");
}
