#include "doctest.h"

#include "../acceptance/checks.hpp"

using namespace ebeq::checks;

namespace {

void require_clean(const SuiteResult& r, int cases)
{
    INFO(r.name << ": " << r.first_failure);
    CHECK(r.cases == cases);
    CHECK(r.failures == 0);
}

}  // namespace

TEST_CASE("parser round-trip") { require_clean(parser_roundtrip(500, 0xa11ce), 500); }
TEST_CASE("normalize is idempotent") { require_clean(normalize_idempotence(200, 0xb0b), 200); }
TEST_CASE("Leibniz rule") { require_clean(leibniz(200, 0xc0ffee), 200); }
TEST_CASE("total derivatives commute") { require_clean(derivative_commutation(200, 0xd00d), 200); }
TEST_CASE("collect and reassemble") { require_clean(collect_roundtrip(200, 0xe1f), 200); }
TEST_CASE("finite differences agree with total derivatives") { require_clean(finite_differences(200, 0xf00), 200); }
