#include "resil/stretcher.hpp"

#include <gtest/gtest.h>

#include <map>

#include "resil/site_model.hpp"
#include "resil/util/fs.hpp"
#include "temp_tree.hpp"

namespace {

using namespace resil;
using testutil::TempTree;

const char* kProject = R"(struct E1 { };
struct E2 { };
struct E3 { };
struct E4 { };
void g();
int f1() { try { g(); return 1; } catch (const E1& e) { return 0; } }
int f2() { try { g(); return 1; } catch (const E2& e) { return 0; } }
int f3() { try { g(); return 1; } catch (const E3& e) { return 0; } }
int f4() { try { g(); return 1; } catch (...) { return 0; } }
int f5() { try { g(); return 1; } catch (const E4& e) { return 0; } }
int f6() { try { g(); return 1; } catch (const E1& e) { return 0; } }
)";

struct Scenario {
  TempTree tmp{"stretch"};
  SiteInventory inv;

  Scenario() {
    tmp.write("src/a.cpp", kProject);
    inv = enumerate_sites(tmp.path(), AppFilter{});
  }

  const TryCatchSite& site(size_t i) const { return inv.sites.at(i); }
};

TraceLog trace_from(const std::string& text) { return parse_trace(text); }

TEST(StretchClassification, CasesFromStandardTrace) {
  Scenario s;
  ASSERT_EQ(s.inv.sites.size(), 6u);
  std::string t;
  // site0: never traversed uncaught (white only)
  t += R"({"ev":"test_begin","test":"t1","seq":1})" "\n";
  t += R"({"ev":"usage","site":")" + s.site(0).site_id + R"(","test":"t1","kind":"white","ex":"E1","seq":2})" "\n";
  // site1: blue without a matching bubble (caught upstream)
  t += R"({"ev":"usage","site":")" + s.site(1).site_id + R"(","test":"t1","kind":"blue","ex":"IoError","seq":3})" "\n";
  // site2: blue whose exception also bubbles into the test
  t += R"({"ev":"usage","site":")" + s.site(2).site_id + R"(","test":"t1","kind":"blue","ex":"E3","seq":4})" "\n";
  t += R"({"ev":"bubble","test":"t1","ex":"E3","seq":5})" "\n";
  // site4: only an injected blue, which must not count
  t += R"({"ev":"usage","site":")" + s.site(4).site_id + R"(","test":"t1","kind":"blue","ex":"E4","seq":6,"inj":true})" "\n";
  t += R"({"ev":"test_end","test":"t1","seq":7})" "\n";
  TraceLog log = trace_from(t);

  EXPECT_EQ(classify_candidate(s.site(0), log), StretchCase::kNeverTraversedUncaught);
  EXPECT_EQ(classify_candidate(s.site(1), log), StretchCase::kCaughtUpstream);
  EXPECT_EQ(classify_candidate(s.site(2), log), StretchCase::kBubblesToBlue);
  EXPECT_EQ(classify_candidate(s.site(4), log), StretchCase::kNeverTraversedUncaught);
}

TEST(StretchClassification, AlreadyGeneric) {
  Scenario s;
  EXPECT_FALSE(is_already_generic(s.site(0)));
  EXPECT_TRUE(is_already_generic(s.site(3)));  // catch(...)

  TryCatchSite wide;
  wide.caught_types = {"std::exception"};
  EXPECT_TRUE(is_already_generic(wide));
  wide.caught_types = {"::std::exception"};
  EXPECT_TRUE(is_already_generic(wide));
}

TEST(StretchRewrite, ReplacesOnlyTheTargetClauseType) {
  Scenario s;
  std::string text = read_file(s.tmp.path() / "src/a.cpp");
  ASSERT_TRUE(apply_stretch(text, s.site(1)));
  EXPECT_NE(text.find("catch (const std::exception& e) { return 0; } }\nint f3()"),
            std::string::npos)
      << text;
  // the other clauses are untouched
  EXPECT_NE(text.find("catch (const E1& e)"), std::string::npos);
  EXPECT_NE(text.find("catch (const E3& e)"), std::string::npos);
  EXPECT_EQ(text.find("catch (const E2& e)"), std::string::npos);
}

TEST(StretchRewrite, GenericSiteIsLeftAlone) {
  Scenario s;
  std::string text = read_file(s.tmp.path() / "src/a.cpp");
  std::string before = text;
  EXPECT_FALSE(apply_stretch(text, s.site(3)));
  EXPECT_EQ(text, before);
}

// Full phase with a scripted validator:
//   site0 (E1): accepted individually, survives the combined tree
//   site1 (E2): rejected individually by t_broken
//   site2 (E3): skipped, its exception is asserted by a blue test
//   site3 (...): skipped, already generic
//   site4 (E4): accepted individually, rolled back from the combined tree
//   site5 (E1): independence not satisfied -> not a candidate at all
TEST(StretchPhase, DecisionsRollbackAndPatches) {
  Scenario s;
  std::string t;
  t += R"({"ev":"test_begin","test":"t1","seq":1})" "\n";
  t += R"({"ev":"usage","site":")" + s.site(2).site_id + R"(","test":"t1","kind":"blue","ex":"E3","seq":2})" "\n";
  t += R"({"ev":"bubble","test":"t1","ex":"E3","seq":3})" "\n";
  t += R"({"ev":"test_end","test":"t1","seq":4})" "\n";
  TraceLog log = trace_from(t);

  std::vector<ContractVerdict> verdicts;
  for (size_t i = 0; i < s.inv.sites.size(); ++i) {
    ContractVerdict v;
    v.site_id = s.site(i).site_id;
    v.source_independence = (i == 5) ? VerdictValue::kViolated : VerdictValue::kSatisfied;
    verdicts.push_back(v);
  }

  int combined_calls = 0;
  std::map<std::string, int> validated;
  TreeValidator validate = [&](const fs::path& tree, const std::string& label) {
    EXPECT_TRUE(fs::exists(tree / "src/a.cpp")) << label;
    ++validated[label];
    if (label == s.site(1).site_id) return std::vector<std::string>{"t_broken"};
    if (label == "combined") {
      ++combined_calls;
      if (combined_calls == 1) return std::vector<std::string>{"t_interplay"};
    }
    return std::vector<std::string>{};
  };

  TempTree work("stretch_work");
  std::string combined_diff;
  auto outcomes = run_stretch_phase(s.tmp.path(), work.path(), s.inv, verdicts, log, validate,
                                    &combined_diff);

  ASSERT_EQ(outcomes.size(), 5u);  // site5 is not a candidate
  std::map<std::string, const StretchOutcome*> by_id;
  for (const auto& o : outcomes) by_id[o.site_id] = &o;

  EXPECT_EQ(by_id[s.site(0).site_id]->decision, StretchDecision::kStretched);
  EXPECT_EQ(by_id[s.site(1).site_id]->decision, StretchDecision::kRejectedByTests);
  EXPECT_EQ(by_id[s.site(1).site_id]->failing_tests, std::vector<std::string>{"t_broken"});
  EXPECT_EQ(by_id[s.site(2).site_id]->decision, StretchDecision::kSkippedBlue);
  EXPECT_EQ(by_id[s.site(2).site_id]->kase, StretchCase::kBubblesToBlue);
  EXPECT_EQ(by_id[s.site(3).site_id]->decision, StretchDecision::kSkippedAlreadyGeneric);
  EXPECT_EQ(by_id[s.site(4).site_id]->decision, StretchDecision::kInterplay);
  EXPECT_EQ(by_id[s.site(4).site_id]->failing_tests, std::vector<std::string>{"t_interplay"});
  EXPECT_EQ(by_id.count(s.site(5).site_id), 0u);

  // individual patches exist for every attempted site
  EXPECT_NE(by_id[s.site(0).site_id]->patch.find("+int f1() { try { g(); return 1; } catch "
                                                 "(const std::exception& e)"),
            std::string::npos);
  EXPECT_FALSE(by_id[s.site(1).site_id]->patch.empty());
  EXPECT_TRUE(by_id[s.site(2).site_id]->patch.empty());

  // the final tree carries only the surviving stretch
  EXPECT_NE(combined_diff.find("f1()"), std::string::npos);
  EXPECT_EQ(combined_diff.find("f6()"), std::string::npos);
  EXPECT_EQ(combined_diff.find("catch (const E4"), std::string::npos);
  std::string final_text = read_file(work.path() / "final/src/a.cpp");
  EXPECT_NE(final_text.find("int f1() { try { g(); return 1; } catch (const std::exception& e)"),
            std::string::npos);
  // f6 keeps its E1 clause: it was never a candidate
  EXPECT_NE(final_text.find("int f6() { try { g(); return 1; } catch (const E1& e)"),
            std::string::npos);

  // rollback re-validated the shrunk combination
  EXPECT_EQ(combined_calls, 2);
  EXPECT_EQ(validated[s.site(0).site_id], 1);
}

TEST(StretchPhase, SingleAcceptedSiteSkipsCombinedRun) {
  Scenario s;
  TraceLog log;
  std::vector<ContractVerdict> verdicts(1);
  verdicts[0].site_id = s.site(0).site_id;
  verdicts[0].source_independence = VerdictValue::kSatisfied;

  int combined_calls = 0;
  TreeValidator validate = [&](const fs::path&, const std::string& label) {
    if (label == "combined") ++combined_calls;
    return std::vector<std::string>{};
  };
  TempTree work("stretch_single");
  std::string combined_diff;
  auto outcomes = run_stretch_phase(s.tmp.path(), work.path(), s.inv, verdicts, log, validate,
                                    &combined_diff);
  ASSERT_EQ(outcomes.size(), 1u);
  EXPECT_EQ(outcomes[0].decision, StretchDecision::kStretched);
  EXPECT_EQ(combined_calls, 0) << "one accepted stretch is already validated";
  EXPECT_FALSE(combined_diff.empty());
}

TEST(StretchPhase, BuildFailurePseudoEntryRejects) {
  Scenario s;
  TraceLog log;
  std::vector<ContractVerdict> verdicts(1);
  verdicts[0].site_id = s.site(0).site_id;
  verdicts[0].source_independence = VerdictValue::kSatisfied;

  TreeValidator validate = [&](const fs::path&, const std::string&) {
    return std::vector<std::string>{"<build failed> a.cpp:7: error: no member"};
  };
  TempTree work("stretch_bf");
  auto outcomes = run_stretch_phase(s.tmp.path(), work.path(), s.inv, verdicts, log, validate,
                                    nullptr);
  ASSERT_EQ(outcomes.size(), 1u);
  EXPECT_EQ(outcomes[0].decision, StretchDecision::kRejectedByTests);
  ASSERT_EQ(outcomes[0].failing_tests.size(), 1u);
  EXPECT_NE(outcomes[0].failing_tests[0].find("<build failed>"), std::string::npos);
}

}  // namespace
