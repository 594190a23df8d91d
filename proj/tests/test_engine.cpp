#include "resil/engine.hpp"

#include <gtest/gtest.h>

#include <random>

#include "literal_oracle.hpp"

namespace {

using namespace resil;
using oracle::Instance;
using oracle::PredicateBits;

// -- equivalence against the brute-force reference ---------------------------

TEST(EngineOracle, MatchesLiteralExpansionOnRandomInstances) {
  std::mt19937 rng(20260814);
  for (int iter = 0; iter < 500; ++iter) {
    Instance ins = oracle::random_instance(rng);
    auto mat = oracle::materialize(ins);
    for (int s = 0; s < ins.n_sites; ++s) {
      PredicateBits want = oracle::literal_eval(ins, s);
      std::string id = ins.site_id(s);
      EXPECT_EQ(eval_source_independent(mat.matrix, mat.cov, mat.inv, id), want.si)
          << "instance " << iter << " site " << s;
      EXPECT_EQ(eval_source_dependent(mat.matrix, mat.cov, mat.inv, id), want.sd)
          << "instance " << iter << " site " << s;
      EXPECT_EQ(eval_resilient(mat.matrix, mat.cov, mat.inv, id), want.res)
          << "instance " << iter << " site " << s;
      EXPECT_EQ(eval_not_resilient(mat.matrix, mat.cov, mat.inv, id), want.nres)
          << "instance " << iter << " site " << s;
    }
  }
}

// -- soundness properties -----------------------------------------------------

TEST(EngineSoundness, ContradictoryPredicatesNeverCoexist) {
  std::mt19937 rng(4252);
  for (int iter = 0; iter < 1000; ++iter) {
    Instance ins = oracle::random_instance(rng);
    auto mat = oracle::materialize(ins);
    for (int s = 0; s < ins.n_sites; ++s) {
      std::string id = ins.site_id(s);
      ContractVerdict v = verdict(mat.matrix, mat.cov, mat.inv, id);
      EXPECT_FALSE(v.si_pred && v.sd_pred) << "instance " << iter;
      EXPECT_FALSE(v.res_pred && v.nres_pred) << "instance " << iter;
      if (v.res_pred) EXPECT_TRUE(v.si_pred) << "resilient must imply source independent";
      // verdict mapping never reports contradictions either
      if (v.resilience == VerdictValue::kSatisfied) {
        EXPECT_NE(v.source_independence, VerdictValue::kViolated);
      }
    }
  }
}

// -- hand-built cases ----------------------------------------------------------

Instance single_site(std::vector<std::vector<UsageKind>> kinds, std::vector<bool> pass) {
  Instance ins;
  ins.n_sites = 1;
  ins.n_tests = static_cast<int>(kinds.size());
  ins.kinds = {std::move(kinds)};
  ins.pass = {std::move(pass)};
  return ins;
}

ContractVerdict verdict_of(const Instance& ins) {
  auto mat = oracle::materialize(ins);
  return verdict(mat.matrix, mat.cov, mat.inv, ins.site_id(0));
}

using K = UsageKind;

TEST(EngineVerdicts, SourceIndependentNotResilient) {
  // whites pass under injection, a pink-covered test fails
  auto v = verdict_of(single_site({{K::kWhite}, {K::kPink}}, {true, false}));
  EXPECT_EQ(v.source_independence, VerdictValue::kSatisfied);
  EXPECT_EQ(v.resilience, VerdictValue::kViolated);
}

TEST(EngineVerdicts, SourceDependent) {
  auto v = verdict_of(single_site({{K::kWhite}, {K::kPink}}, {false, true}));
  EXPECT_EQ(v.source_independence, VerdictValue::kViolated);
  EXPECT_EQ(v.resilience, VerdictValue::kViolated);
}

TEST(EngineVerdicts, PurelyResilient) {
  auto v = verdict_of(single_site({{K::kWhite}, {K::kPink}}, {true, true}));
  EXPECT_EQ(v.source_independence, VerdictValue::kSatisfied);
  EXPECT_EQ(v.resilience, VerdictValue::kSatisfied);
}

TEST(EngineVerdicts, MixedUsagesWithinOneTest) {
  // white+pink in the same test: the white conjunct binds pass to that test
  auto v = verdict_of(single_site({{K::kWhite, K::kPink}}, {false}));
  EXPECT_EQ(v.source_independence, VerdictValue::kUnknown);  // si false, but not all-white => sd false
  EXPECT_EQ(v.resilience, VerdictValue::kViolated);
  EXPECT_FALSE(v.si_pred);
  EXPECT_FALSE(v.sd_pred);
}

TEST(EngineVerdicts, VacuousSiGetsUnknownWithoutWhiteEvidence) {
  // only blue usages: si holds vacuously but there is no white evidence and
  // no pure resilience, so the verdict must stay unknown
  auto v = verdict_of(single_site({{K::kBlue}}, {true}));
  EXPECT_TRUE(v.si_pred);
  EXPECT_EQ(v.source_independence, VerdictValue::kUnknown);
  EXPECT_EQ(v.resilience, VerdictValue::kUnknown);  // no pink usage anywhere
}

TEST(EngineVerdicts, PinkOnlySiteCanStillBeResilient) {
  auto v = verdict_of(single_site({{K::kPink}, {K::kPink}}, {true, true}));
  EXPECT_EQ(v.resilience, VerdictValue::kSatisfied);
  // si holds vacuously and resilience supplies the evidence
  EXPECT_EQ(v.source_independence, VerdictValue::kSatisfied);
}

TEST(EngineVerdicts, UncoveredSiteIsUnknownBothWays) {
  Instance ins = single_site({{}, {}}, {true, true});
  auto v = verdict_of(ins);
  EXPECT_EQ(v.source_independence, VerdictValue::kUnknown);
  EXPECT_EQ(v.resilience, VerdictValue::kUnknown);
  ASSERT_FALSE(v.evidence.empty());
  EXPECT_NE(v.evidence[0].find("never executed"), std::string::npos);
}

TEST(EngineVerdicts, MissingRowMakesSatisfactionUnreachable) {
  // a covered site whose injection row is absent (uninjectable type):
  // violations cannot be claimed and neither can satisfaction
  Instance ins = single_site({{K::kWhite}}, {true});
  auto mat = oracle::materialize(ins);
  mat.matrix.rows.clear();
  auto v = verdict(mat.matrix, mat.cov, mat.inv, ins.site_id(0));
  EXPECT_EQ(v.source_independence, VerdictValue::kUnknown);
  EXPECT_EQ(v.resilience, VerdictValue::kUnknown);
}

TEST(EngineVerdicts, NotRunCellBlocksSatisfactionButNotViolation) {
  Instance ins = single_site({{K::kWhite}, {K::kPink}}, {true, true});
  auto mat = oracle::materialize(ins);
  mat.matrix.rows[0].cells[ins.test_id(1)] = CellValue{};  // never ran
  auto v = verdict(mat.matrix, mat.cov, mat.inv, ins.site_id(0));
  EXPECT_EQ(v.source_independence, VerdictValue::kUnknown);
  EXPECT_EQ(v.resilience, VerdictValue::kUnknown);

  // an explicit failure elsewhere still surfaces as a violation
  mat.matrix.rows[0].cells[ins.test_id(0)] = {Cell::kFailed, false};
  v = verdict(mat.matrix, mat.cov, mat.inv, ins.site_id(0));
  EXPECT_EQ(v.source_independence, VerdictValue::kViolated);  // all-white test failed
  EXPECT_EQ(v.resilience, VerdictValue::kViolated);
}

TEST(EngineVerdicts, MultiTypeRowsCombineConjunctively) {
  // two clauses at one site: the white test passes for one injected type and
  // fails for the other => source dependent
  SiteInventory inv;
  TryCatchSite s;
  s.site_id = "s0";
  s.caught_types = {"E1", "E2"};
  inv.sites = {s};
  CoverageIndex cov;
  cov.by_site["s0"]["t0"] = {UsageKind::kWhite};
  InjectionMatrix m;
  m.rows.push_back({"s0", "E1", {{"t0", {Cell::kPassed, false}}}});
  m.rows.push_back({"s0", "E2", {{"t0", {Cell::kFailed, false}}}});
  auto v = verdict(m, cov, inv, "s0");
  EXPECT_EQ(v.source_independence, VerdictValue::kViolated);
  EXPECT_EQ(v.resilience, VerdictValue::kViolated);

  // with both types passing the contract is satisfied
  m.rows[1].cells["t0"] = {Cell::kPassed, false};
  v = verdict(m, cov, inv, "s0");
  EXPECT_EQ(v.source_independence, VerdictValue::kSatisfied);
}

TEST(EngineVerdicts, ErrorCellCountsAsFailure) {
  Instance ins = single_site({{K::kWhite}}, {true});
  auto mat = oracle::materialize(ins);
  mat.matrix.rows[0].cells[ins.test_id(0)] = {Cell::kFailed, true};
  auto v = verdict(mat.matrix, mat.cov, mat.inv, ins.site_id(0));
  EXPECT_EQ(v.source_independence, VerdictValue::kViolated);
  EXPECT_EQ(v.resilience, VerdictValue::kViolated);
}

// -- sweep ---------------------------------------------------------------------

struct FakeRun {
  std::map<std::string, TestVerdict> outcomes;  // key: site|type|test
  mutable std::mutex mu;
  mutable std::vector<std::string> calls;

  TestVerdict operator()(const TryCatchSite& site, const std::string& type,
                         const std::string& test) const {
    std::string key = site.site_id + "|" + type + "|" + test;
    {
      std::lock_guard<std::mutex> lk(mu);
      calls.push_back(key);
    }
    auto it = outcomes.find(key);
    if (it == outcomes.end()) return TestVerdict::kPass;
    if (it->second == TestVerdict::kError) throw pipeline_error("runner crashed");
    return it->second;
  }
};

TEST(Sweep, RunsCoveringCellsOnlyAndSkipsUninjectable) {
  SiteInventory inv;
  TryCatchSite s1, s2;
  s1.site_id = "s1";
  s1.caught_types = {"E1", "E2"};
  s2.site_id = "s2";
  s2.caught_types = {"F"};
  inv.sites = {s1, s2};

  CoverageIndex cov;
  cov.by_site["s1"]["t1"] = {UsageKind::kWhite};
  cov.by_site["s1"]["t2"] = {UsageKind::kPink};
  cov.by_site["s2"];  // uncovered

  FakeRun fake;
  fake.outcomes["s1|E1|t1"] = TestVerdict::kFail;
  std::set<std::pair<std::string, std::string>> uninjectable = {{"s1", "E2"}};

  auto run = [&](const TryCatchSite& a, const std::string& b, const std::string& c) {
    return fake(a, b, c);
  };
  InjectionMatrix m = short_circuit_sweep(inv, cov, uninjectable, run, 1);

  // one row for s1/E1 (E2 excluded), one empty row for s2/F
  ASSERT_EQ(m.rows.size(), 2u);
  EXPECT_EQ(m.rows[0].injected_type, "E1");
  EXPECT_EQ(m.rows[1].site_id, "s2");
  EXPECT_TRUE(m.rows[1].cells.empty());
  EXPECT_EQ(fake.calls.size(), 2u);  // covering cells only

  EXPECT_EQ(m.rows[0].cells.at("t1").state, Cell::kFailed);
  EXPECT_EQ(m.rows[0].cells.at("t2").state, Cell::kPassed);
}

TEST(Sweep, RunnerExceptionsBecomeErrorCells) {
  SiteInventory inv;
  TryCatchSite s;
  s.site_id = "s1";
  s.caught_types = {"E"};
  inv.sites = {s};
  CoverageIndex cov;
  cov.by_site["s1"]["t1"] = {UsageKind::kWhite};

  FakeRun fake;
  fake.outcomes["s1|E|t1"] = TestVerdict::kError;
  auto run = [&](const TryCatchSite& a, const std::string& b, const std::string& c) {
    return fake(a, b, c);
  };
  InjectionMatrix m = short_circuit_sweep(inv, cov, {}, run, 1);
  ASSERT_EQ(m.rows.size(), 1u);
  EXPECT_EQ(m.rows[0].cells.at("t1").state, Cell::kFailed);
  EXPECT_TRUE(m.rows[0].cells.at("t1").from_error);
}

TEST(Sweep, ParallelExecutionMatchesSerial) {
  std::mt19937 rng(99);
  Instance ins = oracle::random_instance(rng, 5, 8);
  auto mat = oracle::materialize(ins);
  auto run = [&](const TryCatchSite& site, const std::string&,
                 const std::string& test) -> TestVerdict {
    int s = std::stoi(site.site_id.substr(1));
    int t = std::stoi(test.substr(1));
    return ins.pass[s][t] ? TestVerdict::kPass : TestVerdict::kFail;
  };
  InjectionMatrix serial = short_circuit_sweep(mat.inv, mat.cov, {}, run, 1);
  InjectionMatrix parallel = short_circuit_sweep(mat.inv, mat.cov, {}, run, 4);
  ASSERT_EQ(serial.rows.size(), parallel.rows.size());
  for (size_t i = 0; i < serial.rows.size(); ++i) {
    ASSERT_EQ(serial.rows[i].cells.size(), parallel.rows[i].cells.size());
    for (const auto& [test, cell] : serial.rows[i].cells) {
      EXPECT_EQ(parallel.rows[i].cells.at(test).state, cell.state);
    }
  }
}

// -- persistence -----------------------------------------------------------------

TEST(MatrixJson, RoundTripPreservesVerdicts) {
  std::mt19937 rng(1234);
  for (int iter = 0; iter < 50; ++iter) {
    Instance ins = oracle::random_instance(rng);
    auto mat = oracle::materialize(ins);
    nlohmann::json j = matrix_to_json(mat.matrix);
    InjectionMatrix back = matrix_from_json(j, mat.inv);
    for (int s = 0; s < ins.n_sites; ++s) {
      std::string id = ins.site_id(s);
      auto a = verdict(mat.matrix, mat.cov, mat.inv, id);
      auto b = verdict(back, mat.cov, mat.inv, id);
      EXPECT_EQ(a.source_independence, b.source_independence) << "iter " << iter;
      EXPECT_EQ(a.resilience, b.resilience) << "iter " << iter;
    }
  }
}

TEST(MatrixJson, ErrorCellsSurvive) {
  InjectionMatrix m;
  m.rows.push_back({"s1", "E", {{"t1", {Cell::kFailed, true}}, {"t2", {Cell::kPassed, false}}}});
  nlohmann::json j = matrix_to_json(m);
  EXPECT_EQ(j["s1"]["t1"], "error");
  EXPECT_EQ(j["s1"]["t2"], "pass");

  SiteInventory inv;
  TryCatchSite s;
  s.site_id = "s1";
  s.caught_types = {"E"};
  inv.sites = {s};
  InjectionMatrix back = matrix_from_json(j, inv);
  ASSERT_EQ(back.rows.size(), 1u);
  EXPECT_TRUE(back.rows[0].cells.at("t1").from_error);
  EXPECT_EQ(back.rows[0].cells.at("t1").state, Cell::kFailed);
}

TEST(MatrixJson, FailureDominatesAcrossRows) {
  InjectionMatrix m;
  m.rows.push_back({"s1", "E1", {{"t1", {Cell::kPassed, false}}}});
  m.rows.push_back({"s1", "E2", {{"t1", {Cell::kFailed, false}}}});
  nlohmann::json j = matrix_to_json(m);
  EXPECT_EQ(j["s1"]["t1"], "fail");
}

}  // namespace
