#include "doctest.h"
#include "trilin/config.hpp"

using namespace trilin;

TEST_CASE("default configuration") {
  const SuiteConfig c = default_config();
  CHECK(c.primes == std::vector<int>{2, 3, 5});
  CHECK(c.level == 4);
  CHECK(c.samples >= 10);
  CHECK(c.tol == doctest::Approx(1e-9));
  CHECK(c.cases.size() >= 10);
  CHECK_NOTHROW(validate(c));
  CHECK(suite_names().size() == 10);
}

TEST_CASE("parsing") {
  const SuiteConfig c = parse_config_text(R"(
[context]
primes = 3
level = 5
tol = 1e-10
seed = 7
jobs = 2

[suite]
select = lemmas, eigen
timings = true

[characters.eps]
p = 3
images = 1/2
conductor = 1

[case.my-case]
p = 3
mu3 = eps
mu3p = eps
)");
  CHECK(c.primes == std::vector<int>{3});
  CHECK(c.level == 5);
  CHECK(c.tol == doctest::Approx(1e-10));
  CHECK(c.seed == 7);
  CHECK(c.jobs == 2);
  CHECK(c.suites == std::vector<std::string>{"lemmas", "eigen"});
  CHECK(c.timings);
  REQUIRE(c.cases.size() == 1);
  CHECK(c.cases[0].name == "my-case");
  CHECK(c.cases[0].fin3.conductor() == 1);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("rejected configurations") {
  CHECK_THROWS_AS(parse_config_text("[context]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[case.a]\np = 3\nmu1 = missing\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[characters.e]\np = 3\nimages = 1/2\nconductor = 2\n"), ConfigError);

  SuiteConfig c = default_config();
  c.level = 9;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config();
  c.primes = {7};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config();
  c.nonzero_tol = c.tol / 2;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config();
  c.samples = 3;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config();
  c.suites = {"nope"};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config();
  c.cases.push_back(c.cases.front());
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("list splitting") {
  CHECK(split_list(" a, b ,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_list("").empty());
}
