#include "doctest.h"
#include "loadmatch/error.hpp"
#include "loadmatch/verify.hpp"
#include "support.hpp"

using namespace loadmatch;

TEST_CASE("suites pass on the real components and catch corrupted ones") {
  for (const std::string& suite : suite_names()) {
    CAPTURE(suite);
    for (const PropertyResult& r : run_suite(suite, 7, false)) {
      CAPTURE(r.name);
      CAPTURE(r.witness);
      CHECK(r.pass);
      CHECK(r.cases > 0);
    }
    bool caught = false;
    for (const PropertyResult& r : run_suite(suite, 7, true)) {
      if (!r.pass) {
        caught = true;
        CHECK_FALSE(r.witness.empty());
      }
    }
    CHECK(caught);
  }
  CHECK(test::throws_code([] { (void)run_suite("nope", 1, false); }, ErrorCode::kInvalidArgument));
}
