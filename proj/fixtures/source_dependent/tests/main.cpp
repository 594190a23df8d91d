#include <sctest.hpp>

#include "src/cache_gateway.hpp"

SC_TEST(t_enabled_healthy) {
  CacheBackend b(true);
  b.store("user:1", "ada");
  CacheGateway g(b);
  SC_ASSERT_EQ(g.fetch("user:1"), "ada");
}

SC_TEST(t_disabled) {
  CacheGateway g(CacheBackend(false));
  SC_ASSERT_EQ(g.fetch("user:1"), "uncached");
}

SC_TEST(t_enabled_broken) {
  CacheGateway g(CacheBackend(true));
  SC_EXPECT_THROWS(CacheUnavailable, g.fetch("user:9"));
}

SCTEST_MAIN()
