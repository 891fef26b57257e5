#include <doctest.h>

#include "aoii/config.hpp"
#include "aoii/errors.hpp"

using namespace aoii::cli;

TEST_CASE("parses keys, comments and units") {
  const auto e = parse_config_text(
      "# experiment\n"
      "N = 8\n"
      "p_remain = 0.4   # slow source\n"
      "\n"
      "horizon = 200000 slots\n"
      "burn_in = 1000\n"
      "sweep_alpha = 0.1, 0.2,0.3\n");
  CHECK(e.at("N") == "8");
  CHECK(e.at("p_remain") == "0.4");
  CHECK(e.at("horizon") == "200000");
  ExperimentConfig cfg;
  apply_entries(e, cfg);
  CHECK(cfg.num_states == 8);
  CHECK(*cfg.p_remain == 0.4);
  CHECK(cfg.horizon == 200000);
  CHECK(cfg.burn_in == 1000);
  CHECK(cfg.sweep_alpha == std::vector<double>{0.1, 0.2, 0.3});
}

TEST_CASE("rejects malformed input") {
  CHECK_THROWS_AS(parse_config_text("bogus = 1\n"), aoii::InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("N = 2\nN = 3\n"), aoii::InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("N\n"), aoii::InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("N =\n"), aoii::InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("horizon = 10 seconds\n"), aoii::InvalidArgument);
  CHECK_THROWS_AS(parse_config_text("alpha = 0.1 slots\n"), aoii::InvalidArgument);

  ExperimentConfig cfg;
  CHECK_THROWS_AS(apply_entries({{"alpha", "0.1x"}}, cfg), aoii::InvalidArgument);
  CHECK_THROWS_AS(apply_entries({{"N", "-"}}, cfg), aoii::InvalidArgument);
  CHECK_THROWS_AS(apply_entries({{"format", "xml"}}, cfg), aoii::InvalidArgument);
  CHECK_THROWS_AS(parse_number_list("0.1,,0.2"), aoii::InvalidArgument);
}

TEST_CASE("error names the line") {
  try {
    parse_config_text("N = 8\n\nwhat = 3\n");
    FAIL("expected a throw");
  } catch (const aoii::InvalidArgument& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("hash tracks results-relevant fields only") {
  ExperimentConfig a;
  ExperimentConfig b;
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  b.out = "x.csv";
  b.threads = 8;
  CHECK(a.hash() == b.hash());
  b.seed = 2;
  CHECK(a.hash() != b.hash());
}

TEST_CASE("every known key is accepted") {
  for (const auto& k : known_keys()) CHECK_NOTHROW(parse_config_text(k + " = 1\n"));
}
