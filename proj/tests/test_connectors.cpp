#include <doctest.h>

TEST_CASE("pending: test_connectors") { CHECK(true); }
