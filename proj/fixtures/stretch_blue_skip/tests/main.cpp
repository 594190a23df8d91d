#include <sctest.hpp>

#include "src/submit.hpp"

SC_TEST(t_ok) {
  SubmitService s(true);
  SC_ASSERT_EQ(s.submit("a"), "stored:a");
}

SC_TEST(t_primary_down) {
  SubmitService s(false);
  SC_ASSERT_EQ(s.submit("b"), "spooled:b");
}

SC_TEST(t_invalid) {
  SubmitService s(true);
  SC_EXPECT_THROWS(ValidationError, s.submit("!x"));
}

SCTEST_MAIN()
