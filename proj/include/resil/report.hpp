#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "resil/engine.hpp"
#include "resil/harness.hpp"
#include "resil/stretcher.hpp"

namespace resil {

struct SiteReport {
  std::string site_id;
  std::string location;  // file:line#ordinal
  std::string function;
  std::vector<std::string> caught_types;
  bool covered = false;
  std::string resilience = "UNKNOWN";
  std::string independence = "UNKNOWN";
  std::string stretch_case;      // empty when the site was not a candidate
  std::string stretch_decision;  // empty when the site was not a candidate
  std::vector<std::string> failing_tests;
  std::vector<std::string> evidence;
};

struct ReportCounts {
  int sites_total = 0;
  int sites_executed = 0;
  int purely_resilient = 0;
  int source_independent = 0;
  int source_dependent = 0;
  int not_resilient = 0;
  int unknown_resilience = 0;
  int unknown_independence = 0;
  int stretch_candidates = 0;
  int stretched = 0;
  int stretch_rejected = 0;
  int stretch_skipped_blue = 0;
  int stretch_skipped_generic = 0;
  int stretch_interplay = 0;
};

struct Report {
  std::string project;
  std::string fingerprint;
  SuiteStats stats;
  ReportCounts counts;
  std::vector<SiteReport> sites;
  std::vector<std::string> flaky_excluded;
  std::vector<std::pair<std::string, std::string>> uninjectable;  // (site, type)
  std::map<std::string, long> launches;
  double duration_seconds = 0;
};

inline nlohmann::json report_to_json(const Report& r) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& s : r.sites) {
    sites.push_back({{"site_id", s.site_id},
                     {"location", s.location},
                     {"function", s.function},
                     {"caught_types", s.caught_types},
                     {"covered", s.covered},
                     {"resilience", s.resilience},
                     {"independence", s.independence},
                     {"stretch_case", s.stretch_case},
                     {"stretch_decision", s.stretch_decision},
                     {"failing_tests", s.failing_tests},
                     {"evidence", s.evidence}});
  }
  nlohmann::json uninj = nlohmann::json::array();
  for (const auto& [site, type] : r.uninjectable) {
    uninj.push_back({{"site", site}, {"type", type}});
  }
  return {{"project", r.project},
          {"fingerprint", r.fingerprint},
          {"suite",
           {{"total", r.stats.total},
            {"blue", r.stats.blue},
            {"white", r.stats.white},
            {"pink", r.stats.pink},
            {"failed", r.stats.failed},
            {"skipped", r.stats.skipped},
            {"errored", r.stats.errored}}},
          {"counts",
           {{"sites_total", r.counts.sites_total},
            {"sites_executed", r.counts.sites_executed},
            {"purely_resilient", r.counts.purely_resilient},
            {"source_independent", r.counts.source_independent},
            {"source_dependent", r.counts.source_dependent},
            {"not_resilient", r.counts.not_resilient},
            {"unknown_resilience", r.counts.unknown_resilience},
            {"unknown_independence", r.counts.unknown_independence},
            {"stretch_candidates", r.counts.stretch_candidates},
            {"stretched", r.counts.stretched},
            {"stretch_rejected", r.counts.stretch_rejected},
            {"stretch_skipped_blue", r.counts.stretch_skipped_blue},
            {"stretch_skipped_generic", r.counts.stretch_skipped_generic},
            {"stretch_interplay", r.counts.stretch_interplay}}},
          {"sites", sites},
          {"flaky_excluded", r.flaky_excluded},
          {"uninjectable", uninj},
          {"launches", r.launches},
          {"duration_seconds", r.duration_seconds}};
}

inline Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.project = j.at("project").get<std::string>();
  r.fingerprint = j.at("fingerprint").get<std::string>();
  const auto& suite = j.at("suite");
  r.stats.total = suite.at("total").get<int>();
  r.stats.blue = suite.at("blue").get<int>();
  r.stats.white = suite.at("white").get<int>();
  r.stats.pink = suite.at("pink").get<int>();
  r.stats.failed = suite.at("failed").get<int>();
  r.stats.skipped = suite.at("skipped").get<int>();
  r.stats.errored = suite.at("errored").get<int>();
  const auto& c = j.at("counts");
  r.counts.sites_total = c.at("sites_total").get<int>();
  r.counts.sites_executed = c.at("sites_executed").get<int>();
  r.counts.purely_resilient = c.at("purely_resilient").get<int>();
  r.counts.source_independent = c.at("source_independent").get<int>();
  r.counts.source_dependent = c.at("source_dependent").get<int>();
  r.counts.not_resilient = c.at("not_resilient").get<int>();
  r.counts.unknown_resilience = c.at("unknown_resilience").get<int>();
  r.counts.unknown_independence = c.at("unknown_independence").get<int>();
  r.counts.stretch_candidates = c.at("stretch_candidates").get<int>();
  r.counts.stretched = c.at("stretched").get<int>();
  r.counts.stretch_rejected = c.at("stretch_rejected").get<int>();
  r.counts.stretch_skipped_blue = c.at("stretch_skipped_blue").get<int>();
  r.counts.stretch_skipped_generic = c.at("stretch_skipped_generic").get<int>();
  r.counts.stretch_interplay = c.at("stretch_interplay").get<int>();
  for (const auto& js : j.at("sites")) {
    SiteReport s;
    s.site_id = js.at("site_id").get<std::string>();
    s.location = js.at("location").get<std::string>();
    s.function = js.at("function").get<std::string>();
    s.caught_types = js.at("caught_types").get<std::vector<std::string>>();
    s.covered = js.at("covered").get<bool>();
    s.resilience = js.at("resilience").get<std::string>();
    s.independence = js.at("independence").get<std::string>();
    s.stretch_case = js.at("stretch_case").get<std::string>();
    s.stretch_decision = js.at("stretch_decision").get<std::string>();
    s.failing_tests = js.at("failing_tests").get<std::vector<std::string>>();
    s.evidence = js.at("evidence").get<std::vector<std::string>>();
    r.sites.push_back(std::move(s));
  }
  r.flaky_excluded = j.at("flaky_excluded").get<std::vector<std::string>>();
  for (const auto& ju : j.at("uninjectable")) {
    r.uninjectable.emplace_back(ju.at("site").get<std::string>(), ju.at("type").get<std::string>());
  }
  for (const auto& [k, v] : j.at("launches").items()) {
    r.launches[k] = v.get<long>();
  }
  r.duration_seconds = j.at("duration_seconds").get<double>();
  return r;
}

// Markdown rendering. The per-site table keeps a fixed column order:
// site, resilience, independence, stretch.
inline std::string render_markdown(const Report& r) {
  std::string md;
  md += "# Resilience analysis\n\n";
  md += "project: `" + r.project + "`\n";
  md += "fingerprint: `" + r.fingerprint + "`\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", r.duration_seconds);
  md += "duration: " + std::string(buf) + "s\n\n";

  md += "## Test suite\n\n";
  md += "| passing | blue | white | pink | failed | skipped |\n";
  md += "|--------:|-----:|------:|-----:|-------:|--------:|\n";
  md += "| " + std::to_string(r.stats.total) + " | " + std::to_string(r.stats.blue) + " | " +
        std::to_string(r.stats.white) + " | " + std::to_string(r.stats.pink) + " | " +
        std::to_string(r.stats.failed) + " | " + std::to_string(r.stats.skipped) + " |\n\n";

  md += "## Try-catch sites\n\n";
  md += "| site | resilience | independence | stretch |\n";
  md += "|------|------------|--------------|---------|\n";
  for (const auto& s : r.sites) {
    std::string site_cell = s.location;
    if (!s.function.empty()) site_cell += " `" + s.function + "`";
    std::string stretch_cell = "-";
    if (!s.stretch_decision.empty()) {
      stretch_cell = s.stretch_decision;
      if (!s.stretch_case.empty()) stretch_cell += " (" + s.stretch_case + ")";
      if (!s.failing_tests.empty()) stretch_cell += " failing: " + join(s.failing_tests, ", ");
    }
    md += "| " + site_cell + " | " + s.resilience + " | " + s.independence + " | " +
          stretch_cell + " |\n";
  }
  md += "\n## Summary\n\n";
  md += "- sites: " + std::to_string(r.counts.sites_executed) + " executed of " +
        std::to_string(r.counts.sites_total) + "\n";
  md += "- purely resilient: " + std::to_string(r.counts.purely_resilient) + "\n";
  md += "- source independent: " + std::to_string(r.counts.source_independent) + "\n";
  md += "- source dependent: " + std::to_string(r.counts.source_dependent) + "\n";
  md += "- not resilient: " + std::to_string(r.counts.not_resilient) + "\n";
  md += "- unknown resilience: " + std::to_string(r.counts.unknown_resilience) + "\n";
  md += "- unknown independence: " + std::to_string(r.counts.unknown_independence) + "\n";
  if (r.counts.stretch_candidates > 0) {
    md += "- stretch: " + std::to_string(r.counts.stretched) + " of " +
          std::to_string(r.counts.stretch_candidates) + " candidates applied (" +
          std::to_string(r.counts.stretch_rejected) + " rejected, " +
          std::to_string(r.counts.stretch_interplay) + " interplay, " +
          std::to_string(r.counts.stretch_skipped_blue) + " blue-skipped, " +
          std::to_string(r.counts.stretch_skipped_generic) + " already generic)\n";
  }

  md += "\n## Exclusions\n\n";
  if (r.flaky_excluded.empty()) {
    md += "- flaky tests: none\n";
  } else {
    md += "- flaky tests: " + join(r.flaky_excluded, ", ") + "\n";
  }
  if (r.uninjectable.empty()) {
    md += "- uninjectable catch types: none\n";
  } else {
    for (const auto& [site, type] : r.uninjectable) {
      md += "- uninjectable: " + site + " type " + type + "\n";
    }
  }

  md += "\n## Process launches\n\n";
  for (const auto& [k, v] : r.launches) {
    md += "- " + k + ": " + std::to_string(v) + "\n";
  }
  return md;
}

}  // namespace resil
