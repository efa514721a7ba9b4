#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "bltk.h"

TEST_CASE("version and gamma utility") {
  REQUIRE(bltk_version() != nullptr);
  CHECK(std::strlen(bltk_version()) > 0);
  CHECK(bltk_gamma(5.0) == doctest::Approx(24.0).epsilon(1e-12));
  CHECK(bltk_gamma(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("open rejects bad input with an error message") {
  bltk_run* run = nullptr;
  CHECK(bltk_run_open("no/such/file.json", nullptr, 0, nullptr, nullptr, &run) ==
        BLTK_ERR_INPUT);
  CHECK(run == nullptr);
  CHECK(std::strlen(bltk_last_error()) > 0);
  CHECK(bltk_run_open(nullptr, nullptr, 0, nullptr, nullptr, &run) ==
        BLTK_ERR_INPUT);
}

TEST_CASE("open, tag, validate, close") {
  bltk_run* run = nullptr;
  REQUIRE(bltk_run_open("configs/run_example1.json", nullptr, 0,
                        "out/capi_smoke", nullptr, &run) == BLTK_OK);
  REQUIRE(run != nullptr);
  CHECK(std::strlen(bltk_run_tag(run)) > 0);
  CHECK(bltk_run_stage(run, "validate") == BLTK_OK);
  CHECK(bltk_run_stage(run, "no_such_stage") == BLTK_ERR_INPUT);
  bltk_run_close(run);
}

TEST_CASE("stage ordering is enforced through the C interface") {
  bltk_run* run = nullptr;
  REQUIRE(bltk_run_open("configs/run_example1.json", nullptr, 0,
                        "out/capi_order", nullptr, &run) == BLTK_OK);
  // flatness requires validate + both solves first.
  CHECK(bltk_run_stage(run, "flatness") == BLTK_ERR_ORDER);
  CHECK(std::strlen(bltk_last_error()) > 0);
  bltk_run_close(run);
}

TEST_CASE("overrides reach the constraint validator") {
  // Lowering chi must flip validate into a constraint failure (exit 1).
  const char* ov[] = {"params.chi=5"};
  bltk_run* run = nullptr;
  REQUIRE(bltk_run_open("configs/run_example1.json", ov, 1, "out/capi_chi",
                        nullptr, &run) == BLTK_OK);
  CHECK(bltk_run_stage(run, "validate") == BLTK_ERR_CONSTRAINT);
  bltk_run_close(run);
}

TEST_CASE("one-shot validate helper") {
  CHECK(bltk_validate_file("configs/run_example1.json") == BLTK_OK);
  CHECK(bltk_validate_file("configs/missing.json") == BLTK_ERR_INPUT);
}
