#include <resil/pipeline.hpp>

#include <gtest/gtest.h>

#include "temp_tree.hpp"

namespace {

using namespace resil;

RuntimeSources real_runtime() {
  RuntimeSources rt;
  rt.sc_runtime = read_file(fs::path(RESIL_RUNTIME_DIR) / "sc_runtime.hpp");
  rt.sctest = read_file(fs::path(RESIL_RUNTIME_DIR) / "sctest.hpp");
  return rt;
}

constexpr const char* kBuildCmd =
    "c++ -std=c++17 -O0 -I. -I\"$SC_INCLUDE\" src/*.cpp tests/*.cpp -o tests_bin";
constexpr const char* kTestCmd = "./tests_bin --results={results} --test={test}";

RunConfig base_config(const fs::path& root, const fs::path& out) {
  RunConfig cfg;
  cfg.project_root = root;
  cfg.build_cmd = kBuildCmd;
  cfg.test_cmd = kTestCmd;
  cfg.timeout_seconds = 30;
  cfg.out_dir = out;
  cfg.runtime = real_runtime();
  return cfg;
}

TEST(ValidateConfig, AcceptsWellFormedConfig) {
  testutil::TempTree tree("cfg_ok");
  tree.write("src/a.cpp", "int f() { return 1; }\n");
  EXPECT_NO_THROW(validate_config(base_config(tree.path(), tree.path() / "out")));
}

TEST(ValidateConfig, RejectsBrokenConfigs) {
  testutil::TempTree tree("cfg_bad");
  tree.write("src/a.cpp", "int f() { return 1; }\n");
  const RunConfig good = base_config(tree.path(), tree.path() / "out");

  auto expect_rejected = [](RunConfig cfg, const std::string& needle) {
    try {
      validate_config(cfg);
      FAIL() << "config accepted, expected rejection mentioning: " << needle;
    } catch (const error& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };

  RunConfig c = good;
  c.project_root = tree.path() / "absent";
  expect_rejected(c, "not a directory");

  c = good;
  c.build_cmd.clear();
  expect_rejected(c, "build command");

  c = good;
  c.test_cmd = "./tests_bin";  // no {results}
  expect_rejected(c, "{results}");

  c = good;
  c.timeout_seconds = 0;
  expect_rejected(c, "timeout");

  c = good;
  c.jobs = 0;
  expect_rejected(c, "jobs");

  c = good;
  c.formats = {"json", "pdf"};
  expect_rejected(c, "format");

  c = good;
  c.fail_on = "always";
  expect_rejected(c, "fail-on");

  c = good;
  c.runtime.sctest.clear();
  expect_rejected(c, "runtime");
}

void write_kv_project(testutil::TempTree& tree, bool broken_test) {
  tree.write("src/store.hpp",
             "#pragma once\n"
             "#include <map>\n"
             "#include <stdexcept>\n"
             "#include <string>\n"
             "\n"
             "struct MissingKey : std::runtime_error {\n"
             "  using std::runtime_error::runtime_error;\n"
             "};\n"
             "\n"
             "class KvStore {\n"
             " public:\n"
             "  void put(const std::string& k, const std::string& v) { data_[k] = v; }\n"
             "  std::string lookup(const std::string& k) const;\n"
             "  std::string get_or_default(const std::string& k) const;\n"
             "\n"
             " private:\n"
             "  std::map<std::string, std::string> data_;\n"
             "};\n");
  tree.write("src/store.cpp",
             "#include \"src/store.hpp\"\n"
             "\n"
             "std::string KvStore::lookup(const std::string& k) const {\n"
             "  auto it = data_.find(k);\n"
             "  if (it == data_.end()) throw MissingKey(\"no such key: \" + k);\n"
             "  return it->second;\n"
             "}\n"
             "\n"
             "std::string KvStore::get_or_default(const std::string& k) const {\n"
             "  try {\n"
             "    return lookup(k);\n"
             "  } catch (const MissingKey&) {\n"
             "    return \"fallback\";\n"
             "  }\n"
             "}\n");
  std::string tests =
      "#include <sctest.hpp>\n"
      "#include \"src/store.hpp\"\n"
      "\n"
      "SC_TEST(t_hit) {\n"
      "  KvStore s;\n"
      "  s.put(\"a\", \"v\");\n"
      "  SC_ASSERT_EQ(s.get_or_default(\"a\"), \"v\");\n"
      "}\n"
      "\n"
      "SC_TEST(t_miss) {\n"
      "  KvStore s;\n"
      "  SC_ASSERT_EQ(s.get_or_default(\"b\"), \"fallback\");\n"
      "}\n";
  if (broken_test) {
    tests +=
        "\n"
        "SC_TEST(t_broken) {\n"
        "  SC_ASSERT_EQ(1, 2);\n"
        "}\n";
  }
  tests += "\nSCTEST_MAIN()\n";
  tree.write("tests/main.cpp", tests);
}

TEST(Pipeline, AbortsWhenBaselineSuiteIsRed) {
  testutil::TempTree tree("red_base");
  write_kv_project(tree, /*broken_test=*/true);
  RunConfig cfg = base_config(tree.path(), tree.path() / "out");
  try {
    run_pipeline(cfg);
    FAIL() << "pipeline ran on a red baseline";
  } catch (const pipeline_error& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("baseline"), std::string::npos) << msg;
    EXPECT_NE(msg.find("t_broken"), std::string::npos) << msg;
  }
}

TEST(Pipeline, MinimalGreenProjectEndToEnd) {
  testutil::TempTree tree("green_kv");
  write_kv_project(tree, /*broken_test=*/false);
  RunConfig cfg = base_config(tree.path(), tree.path() / "out");
  cfg.fail_on = "not-resilient";
  PipelineResult result = run_pipeline(cfg);

  ASSERT_EQ(result.inventory.sites.size(), 1u);
  const std::string site = result.inventory.sites[0].site_id;
  EXPECT_EQ(result.inventory.sites[0].caught_types, std::vector<std::string>{"MissingKey"});

  // Matrix: injection scoped to the two covering tests; recovery satisfies
  // t_miss (it expected the fallback anyway) but breaks t_hit.
  ASSERT_EQ(result.matrix.rows.size(), 1u);
  const auto& cells = result.matrix.rows[0].cells;
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells.at("t_hit").state, Cell::kFailed);
  EXPECT_EQ(cells.at("t_miss").state, Cell::kPassed);

  ASSERT_EQ(result.verdicts.size(), 1u);
  EXPECT_EQ(result.verdicts[0].source_independence, VerdictValue::kSatisfied);
  EXPECT_EQ(result.verdicts[0].resilience, VerdictValue::kViolated);
  EXPECT_TRUE(result.fail_on_triggered);

  // Cost model: one traced standard run, one injected run per covering cell.
  const auto& launches = result.report.launches;
  EXPECT_EQ(launches.at("baseline_run"), 1);
  EXPECT_EQ(launches.at("standard_run"), 1);
  EXPECT_EQ(launches.at("injected_run"), 2);

  EXPECT_TRUE(result.report.flaky_excluded.empty());
  EXPECT_EQ(result.report.stats.total, 2);
  EXPECT_EQ(result.report.stats.pink, 1);
  EXPECT_EQ(result.report.stats.white, 1);
  EXPECT_EQ(result.report.stats.blue, 0);

  for (const char* rel : {"inventory.json", "matrix.json", "trace.log", "report.json",
                          "report.md"}) {
    EXPECT_TRUE(fs::exists(cfg.out_dir / rel)) << rel;
  }

  // Re-deriving the verdicts from the persisted artifacts alone must agree
  // with the live run.
  auto again = reeval_from_artifacts(cfg.out_dir);
  ASSERT_EQ(again.size(), result.verdicts.size());
  EXPECT_EQ(again[0].site_id, site);
  EXPECT_EQ(again[0].source_independence, result.verdicts[0].source_independence);
  EXPECT_EQ(again[0].resilience, result.verdicts[0].resilience);
}

}  // namespace
