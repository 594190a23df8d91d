// resil: dynamic analysis of try-catch resilience via exception injection.
//
//   resil analyze <project_root> --build <cmd> --tests <cmd-template> [...]
//   resil reeval <out_dir>
//
// analyze drives the full pipeline against a project whose suite passes, and
// writes report.json / report.md / matrix.json / trace.log / patches/ into the
// output directory. reeval recomputes verdicts from those artifacts without
// launching any subject process.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <resil/resil.hpp>

#include "runtime_blob.hpp"

namespace {

int run_analyze(const resil::RunConfig& cfg) {
  resil::PipelineResult result = resil::run_pipeline(cfg);
  std::printf("analyzed %zu sites in %s\n", result.inventory.sites.size(),
              cfg.project_root.string().c_str());
  for (const auto& site : result.report.sites) {
    std::printf("  %-28s independence=%-9s resilience=%-9s%s%s\n", site.location.c_str(),
                site.independence.c_str(), site.resilience.c_str(),
                site.stretch_decision.empty() ? "" : " stretch=",
                site.stretch_decision.c_str());
  }
  std::printf("report: %s\n", (cfg.out_dir / "report.json").string().c_str());
  if (result.fail_on_triggered) {
    std::fprintf(stderr, "fail-on verdict present: %s\n", cfg.fail_on.c_str());
    return 2;
  }
  return 0;
}

int run_reeval(const std::string& out_dir) {
  auto verdicts = resil::reeval_from_artifacts(out_dir);
  for (const auto& v : verdicts) {
    std::printf("%s independence=%s resilience=%s\n", v.site_id.c_str(),
                resil::to_string(v.source_independence), resil::to_string(v.resilience));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"try-catch resilience analysis via exception injection"};
  app.require_subcommand(1);

  resil::RunConfig cfg;
  cfg.runtime.sc_runtime = std::string(resil::kScRuntimeSource);
  cfg.runtime.sctest = std::string(resil::kSctestSource);

  std::string project_root;
  std::string formats = "json,md";
  std::string out_dir = "resil-out";

  CLI::App* analyze = app.add_subcommand("analyze", "run the analysis pipeline on a project");
  analyze->add_option("project_root", project_root, "project to analyze")->required();
  analyze->add_option("--build", cfg.build_cmd, "shell command that builds the project")
      ->required();
  analyze->add_option("--tests", cfg.test_cmd,
                      "test command template; {results} and {test} are substituted")
      ->required();
  analyze->add_option("--app-filter", cfg.filter.app_patterns,
                      "glob(s) selecting application sources (default src/**)");
  analyze->add_option("--test-filter", cfg.filter.test_patterns,
                      "glob(s) selecting test sources, excluded from analysis");
  analyze->add_option("--timeout", cfg.timeout_seconds, "per-run timeout in seconds");
  analyze->add_option("--jobs", cfg.jobs, "parallel injected runs");
  analyze->add_flag("--stretch", cfg.stretch, "attempt catch stretching after analysis");
  analyze->add_option("--format", formats, "report formats, comma separated (json,md)");
  analyze->add_option("--out", out_dir, "output directory");
  analyze->add_option("--fail-on", cfg.fail_on,
                      "exit nonzero when a verdict occurs (source-dependent, not-resilient)");

  std::string reeval_dir;
  CLI::App* reeval = app.add_subcommand("reeval", "recompute verdicts from saved artifacts");
  reeval->add_option("out_dir", reeval_dir, "output directory of a previous analyze run")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      cfg.project_root = project_root;
      cfg.out_dir = out_dir;
      cfg.formats.clear();
      for (const auto& f : resil::split(formats, ',')) {
        if (!f.empty()) cfg.formats.insert(resil::trim(f));
      }
      return run_analyze(cfg);
    }
    return run_reeval(reeval_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
