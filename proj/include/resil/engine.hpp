#pragma once

// Injection matrix construction and the two resilience contracts.
//
// For a site x with covering tests A_x (tests with at least one recorded
// traversal), usage kinds from the standard run and pass_with_injection[a,x]
// from the sweep:
//
//   source_independent[x]  = forall a in A_x, forall u in usages(x,a):
//                              white(u) implies pass(a,x)
//   source_dependent[x]    = exists a in A_x: (forall u: white(u)) and not pass(a,x)
//   resilient[x]           = (forall a in A_x: pass(a,x)) and (exists a, u: pink(u))
//   not_resilient[x]       = exists a in A_x: not pass(a,x)
//
// The predicates are evaluated literally (including vacuous truth); mapping to
// reported verdicts adds the evidence guards that turn vacuous satisfaction
// into UNKNOWN.

#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "resil/errors.hpp"
#include "resil/harness.hpp"
#include "resil/site_model.hpp"

namespace resil {

enum class Cell { kNotRun, kPassed, kFailed };

struct CellValue {
  Cell state = Cell::kNotRun;
  bool from_error = false;  // runner failure (crash/timeout) recorded as FAILED
};

// One (site, injected exception type) row. Cells exist for covering tests only.
struct MatrixRow {
  std::string site_id;
  std::string injected_type;
  std::map<std::string, CellValue> cells;
};

struct InjectionMatrix {
  std::vector<MatrixRow> rows;

  std::vector<const MatrixRow*> rows_of(const std::string& site_id) const {
    std::vector<const MatrixRow*> out;
    for (const auto& r : rows) {
      if (r.site_id == site_id) out.push_back(&r);
    }
    return out;
  }
};

// Runs one injected suite execution; the verdict of `test` under injection.
using InjectedRunFn = std::function<TestVerdict(const TryCatchSite& site, const std::string& type,
                                                const std::string& test)>;

// Builds the pass/fail matrix: one row per (site, caught type) — minus rows the
// runtime reported as unsynthesizable — one injected suite execution per
// covering test. Runner failures become FAILED cells; the sweep never aborts.
inline InjectionMatrix short_circuit_sweep(const SiteInventory& inv, const CoverageIndex& cov,
                                           const std::set<std::pair<std::string, std::string>>& uninjectable,
                                           const InjectedRunFn& run, int jobs = 1) {
  InjectionMatrix m;
  struct Task {
    size_t row;
    const TryCatchSite* site;
    std::string type;
    std::string test;
  };
  std::vector<Task> tasks;
  for (const auto& site : inv.sites) {
    for (const auto& type : site.caught_types) {
      if (uninjectable.count({site.site_id, type})) continue;
      MatrixRow row;
      row.site_id = site.site_id;
      row.injected_type = type;
      for (const auto& test : cov.covering_tests(site.site_id)) {
        row.cells[test] = CellValue{};
      }
      m.rows.push_back(std::move(row));
      for (const auto& test : cov.covering_tests(site.site_id)) {
        tasks.push_back({m.rows.size() - 1, &site, type, test});
      }
    }
  }

  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      const Task& t = tasks[k];
      TestVerdict v = TestVerdict::kError;
      try {
        v = run(*t.site, t.type, t.test);
      } catch (const std::exception&) {
        v = TestVerdict::kError;
      }
      // cells were preallocated; distinct tasks write distinct entries
      CellValue& cell = m.rows[t.row].cells.find(t.test)->second;
      if (v == TestVerdict::kPass) {
        cell.state = Cell::kPassed;
      } else {
        cell.state = Cell::kFailed;
        cell.from_error = (v == TestVerdict::kError);
      }
    }
  };
  int n = jobs < 1 ? 1 : jobs;
  if (n == 1 || tasks.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return m;
}

namespace detail {

struct SiteEvidence {
  std::vector<std::string> covering;                     // A_x
  std::map<std::string, std::vector<UsageKind>> usages;  // standard run
  // pass/fail are independent half-truths so missing cells assert neither:
  // passed needs a complete passing row set, failed needs an explicit failure.
  std::map<std::string, bool> passed;
  std::map<std::string, bool> failed;
  bool evaluable = true;  // every caught type has a row, every covering cell ran
};

inline SiteEvidence gather(const InjectionMatrix& m, const CoverageIndex& cov,
                           const SiteInventory& inv, const std::string& site_id) {
  SiteEvidence ev;
  auto it = cov.by_site.find(site_id);
  if (it != cov.by_site.end()) {
    for (const auto& [test, kinds] : it->second) {
      ev.covering.push_back(test);
      ev.usages[test] = kinds;
    }
  }
  auto rows = m.rows_of(site_id);
  const TryCatchSite* site = inv.find(site_id);
  size_t expected_rows = site ? site->caught_types.size() : 1;
  if (rows.size() < expected_rows) ev.evaluable = false;
  for (const auto& test : ev.covering) {
    bool all_pass = !rows.empty();
    bool any_fail = false;
    for (const auto* row : rows) {
      auto c = row->cells.find(test);
      if (c == row->cells.end() || c->second.state == Cell::kNotRun) {
        ev.evaluable = false;
        all_pass = false;
      } else if (c->second.state == Cell::kFailed) {
        all_pass = false;
        any_fail = true;
      }
    }
    ev.passed[test] = all_pass;
    ev.failed[test] = any_fail;
  }
  return ev;
}

}  // namespace detail

inline bool eval_source_independent(const InjectionMatrix& m, const CoverageIndex& cov,
                                    const SiteInventory& inv, const std::string& site_id) {
  auto ev = detail::gather(m, cov, inv, site_id);
  for (const auto& a : ev.covering) {
    for (UsageKind u : ev.usages[a]) {
      if (u == UsageKind::kWhite && !ev.passed[a]) return false;
    }
  }
  return true;
}

inline bool eval_source_dependent(const InjectionMatrix& m, const CoverageIndex& cov,
                                  const SiteInventory& inv, const std::string& site_id) {
  auto ev = detail::gather(m, cov, inv, site_id);
  for (const auto& a : ev.covering) {
    const auto& us = ev.usages[a];
    bool all_white = !us.empty();
    for (UsageKind u : us) {
      if (u != UsageKind::kWhite) all_white = false;
    }
    if (all_white && ev.failed[a]) return true;
  }
  return false;
}

inline bool eval_resilient(const InjectionMatrix& m, const CoverageIndex& cov,
                           const SiteInventory& inv, const std::string& site_id) {
  auto ev = detail::gather(m, cov, inv, site_id);
  bool any_pink = false;
  for (const auto& a : ev.covering) {
    if (!ev.passed[a]) return false;
    for (UsageKind u : ev.usages[a]) {
      if (u == UsageKind::kPink) any_pink = true;
    }
  }
  return any_pink;
}

inline bool eval_not_resilient(const InjectionMatrix& m, const CoverageIndex& cov,
                               const SiteInventory& inv, const std::string& site_id) {
  auto ev = detail::gather(m, cov, inv, site_id);
  for (const auto& a : ev.covering) {
    if (ev.failed[a]) return true;
  }
  return false;
}

enum class VerdictValue { kSatisfied, kViolated, kUnknown };

inline const char* to_string(VerdictValue v) {
  switch (v) {
    case VerdictValue::kSatisfied: return "SATISFIED";
    case VerdictValue::kViolated: return "VIOLATED";
    case VerdictValue::kUnknown: return "UNKNOWN";
  }
  return "?";
}

struct ContractVerdict {
  std::string site_id;
  VerdictValue source_independence = VerdictValue::kUnknown;
  VerdictValue resilience = VerdictValue::kUnknown;
  bool si_pred = false;
  bool sd_pred = false;
  bool res_pred = false;
  bool nres_pred = false;
  std::vector<std::string> evidence;
};

// Maps predicate values to reported verdicts. Literal truth is not enough for
// SATISFIED: source independence additionally needs observed white usages (or
// pure resilience, which subsumes them) and a fully-run matrix; pure
// resilience needs the full matrix too. Violations stand on the failing
// evidence alone.
inline ContractVerdict verdict(const InjectionMatrix& m, const CoverageIndex& cov,
                               const SiteInventory& inv, const std::string& site_id) {
  auto ev = detail::gather(m, cov, inv, site_id);
  ContractVerdict v;
  v.site_id = site_id;
  v.si_pred = eval_source_independent(m, cov, inv, site_id);
  v.sd_pred = eval_source_dependent(m, cov, inv, site_id);
  v.res_pred = eval_resilient(m, cov, inv, site_id);
  v.nres_pred = eval_not_resilient(m, cov, inv, site_id);

  bool white_evidence = false;
  for (const auto& [test, kinds] : ev.usages) {
    for (UsageKind k : kinds) {
      if (k == UsageKind::kWhite) white_evidence = true;
    }
  }

  if (v.sd_pred) {
    v.source_independence = VerdictValue::kViolated;
  } else if (v.si_pred && ev.evaluable && (white_evidence || v.res_pred)) {
    v.source_independence = VerdictValue::kSatisfied;
  } else {
    v.source_independence = VerdictValue::kUnknown;
  }

  if (v.res_pred && ev.evaluable) {
    v.resilience = VerdictValue::kSatisfied;
  } else if (v.nres_pred) {
    v.resilience = VerdictValue::kViolated;
  } else {
    v.resilience = VerdictValue::kUnknown;
  }

  for (const auto& a : ev.covering) {
    std::string kinds;
    for (UsageKind k : ev.usages[a]) {
      if (!kinds.empty()) kinds += ",";
      kinds += to_string(k);
    }
    std::string outcome = ev.passed[a] ? "passed" : (ev.failed[a] ? "failed" : "not run");
    v.evidence.push_back(a + ": usages [" + kinds + "], injected run " + outcome);
  }
  if (ev.covering.empty()) v.evidence.push_back("site never executed by the suite");
  return v;
}

inline std::vector<ContractVerdict> all_verdicts(const InjectionMatrix& m,
                                                 const CoverageIndex& cov,
                                                 const SiteInventory& inv) {
  std::vector<ContractVerdict> out;
  for (const auto& s : inv.sites) out.push_back(verdict(m, cov, inv, s.site_id));
  return out;
}

// ---------------------------------------------------------------------------
// Matrix persistence: {site_id: {test_id: "pass"|"fail"|"error"}} with rows of
// one site aggregated conjunctively (a test maps to "fail"/"error" if any row
// failed there).

inline nlohmann::json matrix_to_json(const InjectionMatrix& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& row : m.rows) {
    auto& site_obj = j[row.site_id];
    if (site_obj.is_null()) site_obj = nlohmann::json::object();
    for (const auto& [test, cell] : row.cells) {
      if (cell.state == Cell::kNotRun) continue;
      std::string val = cell.state == Cell::kPassed ? "pass" : (cell.from_error ? "error" : "fail");
      if (site_obj.contains(test)) {
        std::string prev = site_obj[test].get<std::string>();
        if (prev == "pass") site_obj[test] = val;  // failure dominates
      } else {
        site_obj[test] = val;
      }
    }
  }
  return j;
}

// Rebuilds an evaluable matrix from persisted form: one row per caught type of
// the site, each carrying the aggregated cells.
inline InjectionMatrix matrix_from_json(const nlohmann::json& j, const SiteInventory& inv) {
  InjectionMatrix m;
  for (const auto& site : inv.sites) {
    if (!j.contains(site.site_id)) continue;
    for (const auto& type : site.caught_types) {
      MatrixRow row;
      row.site_id = site.site_id;
      row.injected_type = type;
      for (const auto& [test, val] : j.at(site.site_id).items()) {
        std::string s = val.get<std::string>();
        CellValue c;
        c.state = (s == "pass") ? Cell::kPassed : Cell::kFailed;
        c.from_error = (s == "error");
        row.cells[test] = c;
      }
      m.rows.push_back(std::move(row));
    }
  }
  return m;
}

}  // namespace resil
