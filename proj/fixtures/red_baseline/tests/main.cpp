#include <sctest.hpp>

#include "src/calc.hpp"

SC_TEST(t_works) { SC_ASSERT_EQ(div_or_zero(6, 3), 2); }

SC_TEST(t_broken) { SC_ASSERT_EQ(div_or_zero(6, 0), 1); }

SCTEST_MAIN()
