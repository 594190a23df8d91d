#pragma once

// End-to-end analysis pipeline:
//   enumerate sites -> green uninstrumented baseline -> instrument -> standard
//   traced run -> transparency/flakiness diff -> taxonomy + coverage ->
//   injection sweep (scoped to covering tests) -> contract verdicts ->
//   optional catch stretching -> report artifacts.

#include <chrono>
#include <set>
#include <string>
#include <vector>

#include "resil/engine.hpp"
#include "resil/errors.hpp"
#include "resil/harness.hpp"
#include "resil/instrumenter.hpp"
#include "resil/report.hpp"
#include "resil/site_model.hpp"
#include "resil/stretcher.hpp"
#include "resil/trace.hpp"

namespace resil {

struct RunConfig {
  fs::path project_root;
  std::string build_cmd;
  std::string test_cmd;  // template with {results} and {test}
  AppFilter filter;
  double timeout_seconds = 30;
  int jobs = 1;
  bool stretch = false;
  std::set<std::string> formats{"json", "md"};
  fs::path out_dir = "resil-out";
  std::string fail_on;  // empty, "source-dependent" or "not-resilient"
  RuntimeSources runtime;
};

inline void validate_config(const RunConfig& cfg) {
  if (!fs::is_directory(cfg.project_root)) {
    throw error("project root is not a directory: " + cfg.project_root.string());
  }
  if (cfg.build_cmd.empty()) throw error("build command must not be empty");
  if (cfg.test_cmd.empty()) throw error("test command must not be empty");
  if (cfg.test_cmd.find("{results}") == std::string::npos) {
    throw error("test command must contain the {results} placeholder");
  }
  if (cfg.timeout_seconds <= 0) throw error("timeout must be positive");
  if (cfg.jobs < 1) throw error("jobs must be at least 1");
  for (const auto& f : cfg.formats) {
    if (f != "json" && f != "md") throw error("unknown report format: " + f);
  }
  if (!cfg.fail_on.empty() && cfg.fail_on != "source-dependent" && cfg.fail_on != "not-resilient") {
    throw error("unknown --fail-on verdict: " + cfg.fail_on);
  }
  if (cfg.runtime.sc_runtime.empty() || cfg.runtime.sctest.empty()) {
    throw error("runtime header sources are not configured");
  }
}

struct PipelineResult {
  Report report;
  SiteInventory inventory;
  InjectionMatrix matrix;
  std::vector<ContractVerdict> verdicts;
  std::vector<StretchOutcome> stretch;
  bool fail_on_triggered = false;
};

namespace detail {

inline std::string sanitize_component(const std::string& s) {
  std::string out;
  for (char c : s) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  }
  return out;
}

inline std::string location_of(const TryCatchSite& s) {
  return s.try_span.file + ":" + std::to_string(s.try_span.start_line) + "#" +
         std::to_string(s.catch_ordinal);
}

inline std::vector<std::string> failing_names(const std::vector<TestResult>& tests) {
  std::vector<std::string> out;
  for (const auto& t : tests) {
    if (t.verdict == TestVerdict::kFail || t.verdict == TestVerdict::kError) {
      out.push_back(t.test_id);
    }
  }
  return out;
}

}  // namespace detail

inline PipelineResult run_pipeline(const RunConfig& cfg) {
  validate_config(cfg);
  auto t_start = std::chrono::steady_clock::now();

  const fs::path out = cfg.out_dir;
  const fs::path trees = out / "trees";
  const fs::path runs = out / "runs";
  const fs::path logs = out / "logs";
  remove_tree(trees);
  remove_tree(runs);
  remove_tree(out / "patches");
  fs::create_directories(out);
  fs::create_directories(runs);
  fs::create_directories(logs);

  ProcessRunner runner;
  PipelineResult result;

  // --- site inventory -------------------------------------------------------
  result.inventory = enumerate_sites(cfg.project_root, cfg.filter);
  write_file(out / "inventory.json", inventory_to_json(result.inventory).dump(2) + "\n");

  // All subject trees are copied from a pristine snapshot that excludes the
  // artifact directory, which may itself live inside the project root.
  const fs::path snapshot = trees / "pristine";
  copy_tree(cfg.project_root, snapshot, {out});

  // --- uninstrumented baseline (green gate + behavior reference) ------------
  const fs::path baseline_tree = trees / "baseline";
  copy_tree(snapshot, baseline_tree);
  write_runtime(baseline_tree, cfg.runtime);
  build_tree(runner, baseline_tree, cfg.build_cmd, cfg.timeout_seconds * 10,
             logs / "baseline-build.log", "baseline_build");

  SuiteRunSpec base_spec;
  base_spec.tree = baseline_tree;
  base_spec.test_cmd = cfg.test_cmd;
  base_spec.timeout_seconds = cfg.timeout_seconds;
  base_spec.results_path = runs / "baseline.xml";
  base_spec.capture_path = logs / "baseline-run.log";
  base_spec.category = "baseline_run";
  SuiteRunOutcome baseline = run_suite_once(runner, base_spec);
  if (baseline.proc.timed_out) throw pipeline_error("baseline suite run timed out");
  if (!baseline.results_present) {
    throw pipeline_error("baseline suite produced no results file:\n" + baseline.proc.output_tail);
  }
  auto red = detail::failing_names(baseline.tests);
  if (!red.empty()) {
    throw pipeline_error("cannot analyze: baseline suite is red, failing tests: " +
                         join(red, ", "));
  }

  // --- instrumented tree + standard traced run ------------------------------
  const fs::path inst_tree = trees / "instrumented";
  instrument(snapshot, inst_tree, result.inventory, cfg.filter, cfg.runtime);
  build_tree(runner, inst_tree, cfg.build_cmd, cfg.timeout_seconds * 10,
             logs / "instrumented-build.log", "instrumented_build");

  SuiteRunSpec std_spec;
  std_spec.tree = inst_tree;
  std_spec.test_cmd = cfg.test_cmd;
  std_spec.timeout_seconds = cfg.timeout_seconds;
  std_spec.mode = "standard";
  std_spec.trace_path = (out / "trace.log").string();
  std_spec.results_path = runs / "standard.xml";
  std_spec.capture_path = logs / "standard-run.log";
  std_spec.category = "standard_run";
  std::error_code ec;
  fs::remove(out / "trace.log", ec);
  SuiteRunOutcome standard = run_suite_once(runner, std_spec);
  if (standard.proc.timed_out) throw pipeline_error("standard instrumented run timed out");
  if (!standard.results_present) {
    throw pipeline_error("instrumented suite produced no results file:\n" +
                         standard.proc.output_tail);
  }
  TraceLog trace = parse_trace(read_file(out / "trace.log"));

  // Transparency and flakiness: instrumentation with an empty plan must not
  // change any verdict; tests that do differ are excluded and reported.
  std::vector<std::string> flaky = diff_verdicts(baseline.tests, standard.tests);
  std::set<std::string> excluded(flaky.begin(), flaky.end());

  std::vector<TestResult> kept;
  for (const auto& t : standard.tests) {
    if (!excluded.count(t.test_id)) kept.push_back(t);
  }
  std::vector<TestRecord> records = color_tests(kept, trace);
  SuiteStats stats = compute_stats(records);
  CoverageIndex coverage = build_coverage_index(trace, result.inventory);
  for (auto& [site, tests] : coverage.by_site) {
    for (const auto& name : excluded) tests.erase(name);
  }

  // --- capability records: rows the runtime cannot inject -------------------
  std::set<std::pair<std::string, std::string>> uninjectable;
  for (const auto& c : trace.caps) {
    if (!c.ok) uninjectable.insert({c.site_id, c.type});
  }

  // --- injection sweep -------------------------------------------------------
  InjectedRunFn injected_run = [&](const TryCatchSite& site, const std::string& type,
                                   const std::string& test) -> TestVerdict {
    std::string tag = detail::sanitize_component(site.site_id) + "-" +
                      detail::sanitize_component(type) + "-" + detail::sanitize_component(test);
    SuiteRunSpec spec;
    spec.tree = inst_tree;
    spec.test_cmd = cfg.test_cmd;
    spec.timeout_seconds = cfg.timeout_seconds;
    spec.mode = "inject";
    spec.plan_site = site.site_id;
    spec.plan_type = type;
    spec.test_filter = test;
    spec.trace_path = (runs / ("inject-" + tag + ".trace")).string();
    spec.results_path = runs / ("inject-" + tag + ".xml");
    spec.capture_path = logs / ("inject-" + tag + ".log");
    spec.category = "injected_run";
    SuiteRunOutcome outcome = run_suite_once(runner, spec);
    if (outcome.proc.timed_out || !outcome.results_present) return TestVerdict::kError;
    for (const auto& t : outcome.tests) {
      if (t.test_id == test) return t.verdict;
    }
    return TestVerdict::kError;
  };
  result.matrix = short_circuit_sweep(result.inventory, coverage, uninjectable, injected_run,
                                      cfg.jobs);
  write_file(out / "matrix.json", matrix_to_json(result.matrix).dump(2) + "\n");

  // --- contract verdicts -----------------------------------------------------
  result.verdicts = all_verdicts(result.matrix, coverage, result.inventory);

  // --- catch stretching ------------------------------------------------------
  std::string combined_diff;
  if (cfg.stretch) {
    TreeValidator validator = [&](const fs::path& tree, const std::string& label)
        -> std::vector<std::string> {
      std::string tag = detail::sanitize_component(label);
      write_runtime(tree, cfg.runtime);
      try {
        build_tree(runner, tree, cfg.build_cmd, cfg.timeout_seconds * 10,
                   logs / ("stretch-" + tag + "-build.log"), "stretch_build");
      } catch (const pipeline_error& e) {
        return {std::string("<build failed> ") + e.what()};
      }
      SuiteRunSpec spec;
      spec.tree = tree;
      spec.test_cmd = cfg.test_cmd;
      spec.timeout_seconds = cfg.timeout_seconds;
      spec.results_path = runs / ("stretch-" + tag + ".xml");
      spec.capture_path = logs / ("stretch-" + tag + "-run.log");
      spec.category = "stretch_run";
      SuiteRunOutcome outcome = run_suite_once(runner, spec);
      if (outcome.proc.timed_out) return {"<suite timed out>"};
      if (!outcome.results_present) return {"<no results file>"};
      return detail::failing_names(outcome.tests);
    };
    result.stretch = run_stretch_phase(snapshot, trees / "stretch", result.inventory,
                                       result.verdicts, trace, validator, &combined_diff);
    fs::create_directories(out / "patches");
    for (const auto& o : result.stretch) {
      if (!o.patch.empty()) {
        write_file(out / "patches" / (o.site_id + ".diff"), o.patch);
      }
    }
    write_file(out / "patches" / "combined.diff", combined_diff);
  }

  // --- report ----------------------------------------------------------------
  Report& rep = result.report;
  rep.project = cfg.project_root.string();
  rep.fingerprint = result.inventory.project_fingerprint;
  rep.stats = stats;
  rep.flaky_excluded = flaky;
  for (const auto& [site, type] : uninjectable) rep.uninjectable.emplace_back(site, type);

  rep.counts.sites_total = static_cast<int>(result.inventory.sites.size());
  for (const auto& site : result.inventory.sites) {
    SiteReport sr;
    sr.site_id = site.site_id;
    sr.location = detail::location_of(site);
    sr.function = site.enclosing_function;
    sr.caught_types = site.caught_types;
    sr.covered = !coverage.covering_tests(site.site_id).empty();
    if (sr.covered) ++rep.counts.sites_executed;
    for (const auto& v : result.verdicts) {
      if (v.site_id != site.site_id) continue;
      sr.resilience = to_string(v.resilience);
      sr.independence = to_string(v.source_independence);
      sr.evidence = v.evidence;
      if (v.resilience == VerdictValue::kSatisfied) ++rep.counts.purely_resilient;
      if (v.resilience == VerdictValue::kViolated) ++rep.counts.not_resilient;
      if (v.resilience == VerdictValue::kUnknown) ++rep.counts.unknown_resilience;
      if (v.source_independence == VerdictValue::kSatisfied) ++rep.counts.source_independent;
      if (v.source_independence == VerdictValue::kViolated) ++rep.counts.source_dependent;
      if (v.source_independence == VerdictValue::kUnknown) ++rep.counts.unknown_independence;
    }
    for (const auto& o : result.stretch) {
      if (o.site_id != site.site_id) continue;
      sr.stretch_case = to_string(o.kase);
      sr.stretch_decision = to_string(o.decision);
      sr.failing_tests = o.failing_tests;
      ++rep.counts.stretch_candidates;
      switch (o.decision) {
        case StretchDecision::kStretched: ++rep.counts.stretched; break;
        case StretchDecision::kRejectedByTests: ++rep.counts.stretch_rejected; break;
        case StretchDecision::kSkippedBlue: ++rep.counts.stretch_skipped_blue; break;
        case StretchDecision::kSkippedAlreadyGeneric: ++rep.counts.stretch_skipped_generic; break;
        case StretchDecision::kInterplay: ++rep.counts.stretch_interplay; break;
      }
    }
    rep.sites.push_back(std::move(sr));
  }
  rep.launches = runner.launch_counts();
  rep.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  if (cfg.formats.count("json")) {
    write_file(out / "report.json", report_to_json(rep).dump(2) + "\n");
  }
  if (cfg.formats.count("md")) {
    write_file(out / "report.md", render_markdown(rep));
  }

  if (cfg.fail_on == "source-dependent") {
    for (const auto& v : result.verdicts) {
      if (v.source_independence == VerdictValue::kViolated) result.fail_on_triggered = true;
    }
  } else if (cfg.fail_on == "not-resilient") {
    for (const auto& v : result.verdicts) {
      if (v.resilience == VerdictValue::kViolated) result.fail_on_triggered = true;
    }
  }
  return result;
}

// Recomputes verdicts from the persisted artifacts of a previous run (no
// subject process is launched).
inline std::vector<ContractVerdict> reeval_from_artifacts(const fs::path& out_dir) {
  SiteInventory inv =
      inventory_from_json(nlohmann::json::parse(read_file(out_dir / "inventory.json")));
  InjectionMatrix matrix =
      matrix_from_json(nlohmann::json::parse(read_file(out_dir / "matrix.json")), inv);
  TraceLog trace = parse_trace(read_file(out_dir / "trace.log"));
  CoverageIndex coverage = build_coverage_index(trace, inv);
  return all_verdicts(matrix, coverage, inv);
}

}  // namespace resil
