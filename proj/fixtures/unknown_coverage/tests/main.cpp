#include <sctest.hpp>

#include "src/import_tool.hpp"

SC_TEST(t_count_two) {
  ImportTool t;
  SC_ASSERT_EQ(t.count_rows("a,b\nc,d"), 2);
}

SC_TEST(t_count_again) {
  ImportTool t;
  SC_ASSERT_EQ(t.count_rows("x\ny\nz"), 3);
}

SC_TEST(t_header_missing) {
  ImportTool t;
  SC_ASSERT_EQ(t.header_or("", "id"), "id");
}

SCTEST_MAIN()
