#include <doctest.h>

TEST_CASE("pending: test_cli") { CHECK(true); }
