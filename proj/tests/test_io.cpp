#include <doctest.h>

#include <random>
#include <sstream>

#include "pa/config.hpp"
#include "pa/errors.hpp"
#include "pa/generator.hpp"
#include "pa/empirics.hpp"
#include "pa/io.hpp"
#include "pa/predicate.hpp"
#include "support.hpp"

TEST_CASE("measure round trips are bit exact") {
  std::mt19937_64 gen(4);
  for (int rep = 0; rep < 50; ++rep) {
    const auto l = pa_test::random_degree(gen, 12, 0.013);
    std::stringstream csv;
    pa::write_csv(l, csv);
    CHECK(pa::read_degree_csv(csv) == l);
    CHECK(pa::degree_from_json(nlohmann::json::parse(pa::to_json(l).dump())) == l);
  }
  const auto log = pa::generate(pa_test::two_color_mixed(), {0.3, 0.7}, 300, 8);
  const auto omega = pa::attachment_measure(log);
  std::stringstream csv;
  pa::write_csv(omega, csv);
  CHECK(pa::read_pair_csv(csv) == omega);
  CHECK(pa::pair_from_json(nlohmann::json::parse(pa::to_json(omega).dump())) == omega);
  const auto path = pa::snapshot_path(log, 5);
  std::stringstream pcsv;
  pa::write_csv(path, pcsv);
  const auto back = pa::read_path_csv(pcsv);
  const auto jback = pa::path_from_json(nlohmann::json::parse(pa::to_json(path).dump()));
  for (const auto* p : {&back, &jback}) {
    REQUIRE(p->size() == path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
      CHECK(p->grid()[i] == path.grid()[i]);
      CHECK(p->pair_weights(i) == path.pair_weights(i));
      CHECK(p->snapshot(i) == path.snapshot(i));
    }
  }
  CHECK(pa::format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("malformed measure files are rejected") {
  std::istringstream bad_header("x,p\n0,1\n");
  CHECK_THROWS_AS(pa::read_degree_csv(bad_header), pa::ValidationError);
  std::istringstream bad_mass("k,p\n0,0.5\n1,0.2\n");
  CHECK_THROWS(pa::read_degree_csv(bad_mass));
  CHECK_THROWS(pa::degree_from_json(nlohmann::json{{"type", "pair"}}));
}

TEST_CASE("config parsing") {
  const auto cfg = pa::parse_config_text(
      "[colors]\nnames = r,b\nmu = 0.3,0.7\n"
      "[weights]\ngamma = 1,2,0.5,1.5\nbeta = 2,1,2.5,1.5\n"
      "[experiment]\nseed = 7\nreps = 10\n");
  CHECK(cfg.spec.num_colors() == 2);
  CHECK(cfg.spec.gamma(0, 1) == 2.0);
  CHECK(cfg.mu[1] == 0.7);
  CHECK(cfg.get("seed") == std::optional<std::string>("7"));
  CHECK_FALSE(cfg.get("n").has_value());

  const auto buckets = pa::parse_config_text("[weights]\nbuckets = 0.5,1\ngamma = 1;2\nbeta = 1;0\nallow_zero_beta = true\n");
  CHECK(buckets.spec.num_buckets() == 2);
  CHECK(buckets.spec.evaluate(0.75, 3, 0) == 6.0);

  CHECK_THROWS_AS(pa::parse_config_text("[weights]\ngama = 1\n"), pa::ValidationError);
  CHECK_THROWS_AS(pa::parse_config_text("[extra]\nx = 1\n"), pa::ValidationError);
  CHECK_THROWS_AS(pa::parse_config_text("[weights]\ngamma = 0.3\nbeta = 0.3\n"), pa::ValidationError);
  CHECK_THROWS_AS(pa::parse_config_text("[colors]\nnames = r,b\nmu = 0.3,0.6\n"), pa::ValidationError);
  CHECK(pa::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(pa::parse_count_list("3, 4,10") == std::vector<std::uint32_t>{3, 4, 10});
}

TEST_CASE("predicate parsing") {
  const auto p = pa::Predicate::parse("M(0) >= 0.75 && M(2,1,0)<=1/3 , L(1)>=1e-2 and V(0)<=0.9");
  REQUIRE(p.clauses().size() == 4);
  CHECK(p.clauses()[0].threshold == mpq_class(3, 4));
  CHECK(p.clauses()[1].colored);
  CHECK(p.clauses()[1].a1 == 1);
  CHECK(p.clauses()[1].threshold == mpq_class(1, 3));
  CHECK(p.clauses()[2].threshold == mpq_class(1, 100));
  CHECK(p.clauses()[3].measure == pa::Clause::Measure::kVertex);
  CHECK(p.max_degree() == 2);
  CHECK(pa::parse_rational("0.1") == mpq_class(1, 10));
  CHECK(pa::parse_rational("099") == 99);
  CHECK(pa::parse_rational("+2/4") == mpq_class(1, 2));
  CHECK_THROWS_AS(pa::Predicate::parse("M(0) > 0.5"), pa::ValidationError);
  CHECK_THROWS_AS(pa::Predicate::parse(""), pa::ValidationError);
  CHECK_THROWS_AS(pa::Predicate::parse("V(0,1,1)>=0.5"), pa::ValidationError);
  CHECK(*pa::Predicate::parse("true").constant_value());
  CHECK_FALSE(*pa::Predicate::parse("M(0)>=0.5 && false").constant_value());
}

TEST_CASE("predicates evaluate exactly on logs") {
  pa::EventLog log;
  log.n = 4;
  log.num_colors = 1;
  log.colors = {0, 0, 0, 0};
  log.events = {{2, 1, 0, 0, 0}, {3, 1, 0, 0, 1}, {4, 1, 0, 0, 2}};
  CHECK(pa::Predicate::parse("M(0)>=1/3 && M(0)<=1/3")(log));
  CHECK_FALSE(pa::Predicate::parse("M(0)>=0.34")(log));
  CHECK(pa::Predicate::parse("V(0)>=3/4 && V(3)>=1/4")(log));
  CHECK_FALSE(pa::Predicate::parse("V(0)>=0.76")(log));
  CHECK_THROWS_AS(pa::Predicate::parse("V(0)>=0.5")(pa::attachment_counts(log)), pa::StructuralError);
  CHECK_THROWS_AS(pa::Predicate::parse("M(0,1,0)>=0.5")(log), pa::StructuralError);
}
