#include <doctest.h>

#include "pa/errors.hpp"
#include "pa/generator.hpp"
#include "pa/weights.hpp"
#include "support.hpp"

using pa::WeightSpec;

TEST_CASE("evaluate examples") {
  const auto s = WeightSpec::plain(1, 1);
  CHECK(s.evaluate(0.5, 0, 0) == 1.0);
  CHECK(s.evaluate(0.5, 3, 0) == 4.0);
  CHECK(WeightSpec::plain(1, 2).evaluate(1.0, 2, 0) == 4.0);
  const WeightSpec two({"x"}, {0.5, 1.0}, {{1.0}, {2.0}}, {{1.0}, {0.0}}, true);
  CHECK(pa::validate(two).ok());
  CHECK(two.evaluate(0.75, 3, 0) == 6.0);
  CHECK(two.evaluate(0.5, 3, 0) == 4.0);
  CHECK_THROWS_AS(two.evaluate(0.0, 1, 0), pa::DomainError);
  CHECK_THROWS_AS(two.evaluate(1.5, 1, 0), pa::DomainError);
}

TEST_CASE("evaluate is affine in k") {
  const auto s = pa_test::two_color_mixed();
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t k = 0; k < 50; ++k) CHECK(s.evaluate(0.3, k + 1, a) - s.evaluate(0.3, k, a) == s.gamma(0, a));
  }
}

TEST_CASE("validate examples") {
  CHECK(pa::validate(WeightSpec::plain(1, 1)).ok());
  const WeightSpec bad_c({"r", "b"}, {1.0}, {{1.0, 2.0, 1.0, 2.0}}, {{1.0, 1.0, 1.0, 1.0}});
  const auto r1 = pa::validate(bad_c);
  CHECK(r1.failed("constant_c"));
  CHECK_FALSE(r1.failed("gamma_positive"));
  const auto r2 = pa::validate(WeightSpec::plain(0.3, 0.3));
  CHECK(r2.failed("min_c_ge_1"));
  CHECK_THROWS_AS(pa::require_valid(WeightSpec::plain(0.3, 0.3)), pa::ValidationError);
  CHECK(pa::validate(WeightSpec::plain(1, 0)).failed("beta_positive"));
  CHECK(pa::validate(WeightSpec::plain(0, 2)).failed("gamma_positive"));
}

TEST_CASE("class normalizer equals gamma D + beta V") {
  const auto spec = pa_test::two_color_mixed();
  pa::Rng rng(3);
  const auto log = pa::generate(spec, {0.4, 0.6}, 200, rng);
  pa::GrowthState state(2, 200);
  state.add_vertex(log.colors[0]);
  for (const auto& e : log.events) {
    for (std::uint32_t y = 0; y < 2; ++y) {
      double direct = 0.0;
      for (std::uint32_t v = 1; v <= state.num_vertices(); ++v) {
        direct += spec.weight(0, state.indegree(v), state.color(v) * 2 + y);
      }
      double agg = 0.0;
      for (std::uint32_t x = 0; x < 2; ++x) {
        agg += spec.gamma(0, x * 2 + y) * state.class_indegree(x) + spec.beta(0, x * 2 + y) * state.class_size(x);
      }
      CHECK(direct == doctest::Approx(agg).epsilon(1e-13));
      CHECK(state.normalizer(spec, 0, y) == doctest::Approx(direct).epsilon(1e-13));
    }
    state.add_vertex(e.child_color);
    state.add_edge(e.parent);
  }
}
