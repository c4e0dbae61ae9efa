#include <doctest.h>

#include <set>

#include "navevo/error.hpp"
#include "navevo/parallel.hpp"
#include "navevo/random.hpp"
#include "navevo/text.hpp"

using namespace navevo;

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    CHECK(x != c.next());
  }
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2}) != derive_seed(2, {2}));
}

TEST_CASE("uniform draws stay in range") {
  Rng rng(7);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform(-1.5, 1.5);
    REQUIRE(u >= -1.5);
    REQUIRE(u < 1.5);
    const auto k = rng.uniform_int(3, 9);
    REQUIRE(k >= 3);
    REQUIRE(k <= 9);
    seen.insert(k);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("fixed-point text") {
  CHECK(text::fixed(1.5, 3) == "1.500");
  CHECK(text::fixed(-0.0000001, 3) == "0.000");
  CHECK(text::quantize(0.1234567891234, 9) == *text::parse_double(text::fixed(0.1234567891234, 9)));
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double v = text::quantize(rng.uniform(-50.0, 50.0), 9);
    REQUIRE(*text::parse_double(text::fixed(v, 9)) == v);
  }
}

TEST_CASE("token parsing") {
  CHECK(text::parse_double("2.5") == 2.5);
  CHECK(text::parse_double("+2") == 2.0);
  CHECK_FALSE(text::parse_double("2.5x"));
  CHECK_FALSE(text::parse_double(""));
  CHECK_FALSE(text::parse_double("nan"));
  CHECK(text::parse_int("-12") == -12);
  CHECK_FALSE(text::parse_int("1.0"));
  CHECK(text::parse_bool("true") == true);
  CHECK(text::parse_bool("0") == false);
  CHECK_FALSE(text::parse_bool("maybe"));
  const auto parts = text::split_ws("  a\tbb  c ");
  REQUIRE(parts.size() == 3);
  CHECK(parts[1] == "bb");
  CHECK(text::trim("  x y \n") == "x y");
}

TEST_CASE("missing files raise errors") {
  CHECK_THROWS_AS(text::read_file("/nonexistent/navevo/file"), Error);
}

TEST_CASE("parallel_for visits every index once") {
  for (int jobs : {1, 2, 5}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) REQUIRE(h == 1);
  }
  CHECK(resolve_jobs(3) == 3);
  CHECK(resolve_jobs(0) >= 1);
}
