#include <doctest.h>

#include <json.hpp>

#include "tcfft/error.hpp"
#include "tcfft/merge.hpp"
#include "tcfft/plan.hpp"

using namespace tcfft;

TEST_SUITE("plan") {

TEST_CASE("schedule examples") {
  CHECK(schedule_radices(2) == std::vector<int>{2});
  CHECK(schedule_radices(4) == std::vector<int>{4});
  CHECK(schedule_radices(8) == std::vector<int>{8});
  CHECK(schedule_radices(16) == std::vector<int>{16});
  CHECK(schedule_radices(256) == std::vector<int>{256});
  CHECK(schedule_radices(8192) == std::vector<int>{8192});
  CHECK(schedule_radices(1 << 14) == std::vector<int>{8192, 2});
  CHECK(schedule_radices(1 << 17) == std::vector<int>{8192, 16});
  CHECK(schedule_radices(1 << 20) == std::vector<int>{8192, 128});
  CHECK(schedule_radices(1 << 26) == std::vector<int>{8192, 8192});
  CHECK(schedule_radices(std::size_t{1} << 27) == std::vector<int>{8192, 8192, 2});
}

TEST_CASE("schedules multiply back and use catalog radices for k in [1, 27]") {
  for (int k = 1; k <= 27; ++k) {
    const std::size_t n = std::size_t{1} << k;
    const auto s = schedule_radices(n);
    std::size_t product = 1;
    for (const int r : s) {
      CHECK(is_catalog_radix(r));
      product *= static_cast<std::size_t>(r);
    }
    CHECK(product == n);
    CHECK(s == schedule_radices(n));
  }
}

TEST_CASE("unsupported sizes") {
  CHECK_THROWS_AS(schedule_radices(96), UnsupportedSize);
  CHECK_THROWS_AS(schedule_radices(1), UnsupportedSize);
  CHECK_THROWS_AS(schedule_radices(0), UnsupportedSize);
  CHECK_THROWS_AS(plan_1d(96, 1), UnsupportedSize);
  CHECK_THROWS_AS(plan_1d(1, 1), UnsupportedSize);
  CHECK_THROWS_AS(plan_2d(16, 24, 1), UnsupportedSize);
  CHECK_THROWS_AS(plan_1d(16, 0), ArgumentError);
  PlanOptions o;
  o.continuous_size = 2;
  CHECK_THROWS_AS(plan_1d(16, 1, o), ArgumentError);
  o.continuous_size = 128;
  CHECK_THROWS_AS(plan_1d(16, 1, o), ArgumentError);
  o.continuous_size = 48;
  CHECK_THROWS_AS(plan_1d(16, 1, o), ArgumentError);
}

TEST_CASE("1D plans") {
  const Plan p = plan_1d(131072, 4);
  CHECK(p.initialized());
  CHECK(p.dims == 1);
  CHECK(p.nx == 131072);
  CHECK(p.batch == 4);
  CHECK(p.schedule_x == std::vector<int>{8192, 16});
  CHECK(p.schedule_y.empty());
  CHECK(p.continuous_size == 32);
  CHECK(p.precision == PrecisionMode::half);
  CHECK(sequence_length(p) == 131072);
  CHECK(plan_1d(256, 1).schedule_x == std::vector<int>{256});
  CHECK(plan_1d(256, 1) == plan_1d(256, 1));
  CHECK_FALSE(Plan{}.initialized());
}

TEST_CASE("2D plans") {
  const Plan p = plan_2d(256, 256, 2);
  CHECK(p.dims == 2);
  CHECK(p.schedule_x == std::vector<int>{256});
  CHECK(p.schedule_y == std::vector<int>{256});
  CHECK(sequence_length(p) == 65536);
  const Plan q = plan_2d(512, 256, 1);
  CHECK(q.schedule_x == std::vector<int>{512});
  CHECK(q.schedule_y == std::vector<int>{256});
  const Plan s = plan_2d(2, 2, 1);
  CHECK(s.schedule_x == std::vector<int>{2});
  CHECK(s.schedule_y == std::vector<int>{2});
}

TEST_CASE("schedule overrides are validated") {
  PlanOptions o;
  o.schedule_x = std::vector<int>{16, 256};
  CHECK(plan_1d(4096, 1, o).schedule_x == std::vector<int>{16, 256});
  o.schedule_x = std::vector<int>{16, 16};
  CHECK_THROWS_AS(plan_1d(4096, 1, o), ArgumentError);
  o.schedule_x = std::vector<int>{64, 48};
  CHECK_THROWS_AS(plan_1d(3072 * 1, 1, o), UnsupportedSize);
  CHECK_THROWS_AS(plan_1d(4096, 1, o), ArgumentError);
  o.schedule_x = std::vector<int>{};
  CHECK_THROWS_AS(plan_1d(4096, 1, o), ArgumentError);
  PlanOptions y;
  y.schedule_y = std::vector<int>{2, 8};
  CHECK(plan_2d(4, 16, 1, y).schedule_y == std::vector<int>{2, 8});
}

TEST_CASE("precision names") {
  CHECK(to_string(PrecisionMode::half) == "half");
  CHECK(to_string(PrecisionMode::double_reference) == "double");
  CHECK(parse_precision("double") == PrecisionMode::double_reference);
  CHECK(parse_precision("half") == PrecisionMode::half);
  CHECK_THROWS_AS(parse_precision("single"), ArgumentError);
}

TEST_CASE("JSON serialization has a stable key order") {
  CHECK(to_json(plan_1d(256, 1)) ==
        R"({"dims":1,"nx":256,"batch":1,"schedule_x":[256],"continuous_size":32,"precision":"half"})");
  PlanOptions o;
  o.precision = PrecisionMode::double_reference;
  o.continuous_size = 8;
  CHECK(to_json(plan_2d(512, 256, 3, o)) ==
        R"({"dims":2,"nx":512,"ny":256,"batch":3,"schedule_x":[512],"schedule_y":[256],"continuous_size":8,"precision":"double"})");
  const auto j = nlohmann::json::parse(to_json(plan_1d(131072, 2)));
  CHECK(j["schedule_x"] == nlohmann::json::array({8192, 16}));
  CHECK(to_json(plan_1d(1 << 20, 1)) == to_json(plan_1d(1 << 20, 1)));
}

}  // TEST_SUITE
