#pragma once

// Catch stretching: widening the caught type of source-independent sites to
// the root exception type, validated against the test suite. Sites whose
// escaping exceptions are asserted by blue tests are never stretched; all
// applied stretches are re-validated together and rolled back most recent
// first when they only fail in combination.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "resil/diff.hpp"
#include "resil/engine.hpp"
#include "resil/site_model.hpp"
#include "resil/trace.hpp"
#include "resil/util/fs.hpp"

namespace resil {

enum class StretchCase {
  kNeverTraversedUncaught,  // no blue usage in the standard run
  kCaughtUpstream,          // escaped this site, handled elsewhere in the app
  kBubblesToBlue,           // escaped all the way into a (blue) test
};

inline const char* to_string(StretchCase c) {
  switch (c) {
    case StretchCase::kNeverTraversedUncaught: return "never-traversed-uncaught";
    case StretchCase::kCaughtUpstream: return "caught-upstream";
    case StretchCase::kBubblesToBlue: return "bubbles-to-blue";
  }
  return "?";
}

enum class StretchDecision {
  kStretched,
  kSkippedBlue,
  kSkippedAlreadyGeneric,
  kRejectedByTests,
  kInterplay,  // individually sound, rolled back from the combined tree
};

inline const char* to_string(StretchDecision d) {
  switch (d) {
    case StretchDecision::kStretched: return "STRETCHED";
    case StretchDecision::kSkippedBlue: return "SKIPPED_BLUE";
    case StretchDecision::kSkippedAlreadyGeneric: return "SKIPPED_ALREADY_GENERIC";
    case StretchDecision::kRejectedByTests: return "REJECTED_BY_TESTS";
    case StretchDecision::kInterplay: return "INTERPLAY";
  }
  return "?";
}

struct StretchOutcome {
  std::string site_id;
  StretchCase kase = StretchCase::kNeverTraversedUncaught;
  StretchDecision decision = StretchDecision::kSkippedAlreadyGeneric;
  std::vector<std::string> failing_tests;
  std::string patch;  // unified diff of the single-site stretch
};

inline constexpr const char* kRootExceptionType = "std::exception";

inline bool is_already_generic(const TryCatchSite& site) {
  if (site.catch_all) return true;
  const std::string& t = site.caught_types.front();
  return t == "std::exception" || t == "::std::exception";
}

// Classification from the standard run only (injected traversals say nothing
// about the suite's organic expectations). Precondition: the site's source
// independence verdict is SATISFIED.
inline StretchCase classify_candidate(const TryCatchSite& site, const TraceLog& standard) {
  bool any_blue = false;
  bool reaches_test = false;
  for (const auto& u : standard.usages) {
    if (u.site_id != site.site_id || u.kind != UsageKind::kBlue || u.injected) continue;
    any_blue = true;
    for (const auto& b : standard.bubbles) {
      if (b.test_id == u.test_id && u.exception_type && b.exception_type == *u.exception_type) {
        reaches_test = true;
      }
    }
  }
  if (!any_blue) return StretchCase::kNeverTraversedUncaught;
  return reaches_test ? StretchCase::kBubblesToBlue : StretchCase::kCaughtUpstream;
}

// Replaces the clause's declared type with the root type in file_text.
// Returns false when the clause is already generic. The rewrite touches only
// the type token range, so the resulting patch is a single minimal hunk.
inline bool apply_stretch(std::string& file_text, const TryCatchSite& site) {
  if (is_already_generic(site)) return false;
  if (site.type_end <= site.type_begin || site.type_end > file_text.size()) {
    throw error("stretch: site " + site.site_id + " has no usable type span");
  }
  file_text.replace(site.type_begin, site.type_end - site.type_begin, kRootExceptionType);
  return true;
}

// Builds and runs the full suite in tree_root; returns failing/erroring test
// ids, empty meaning the suite is green. A build failure is reported as a
// single pseudo-entry describing the failure.
using TreeValidator =
    std::function<std::vector<std::string>(const fs::path& tree_root, const std::string& label)>;

namespace detail {

// Applies a set of stretches to a pristine copy of the project at tree_root.
inline void materialize_stretched_tree(const fs::path& project_root, const fs::path& tree_root,
                                       const std::vector<const TryCatchSite*>& sites) {
  remove_tree(tree_root);
  copy_tree(project_root, tree_root);
  std::map<std::string, std::vector<const TryCatchSite*>> by_file;
  for (const auto* s : sites) by_file[s->try_span.file].push_back(s);
  for (auto& [rel, file_sites] : by_file) {
    std::sort(file_sites.begin(), file_sites.end(),
              [](const TryCatchSite* a, const TryCatchSite* b) {
                return a->type_begin > b->type_begin;  // descending keeps offsets valid
              });
    std::string text = read_file(project_root / rel);
    for (const auto* s : file_sites) apply_stretch(text, *s);
    write_file(tree_root / rel, text);
  }
}

inline std::string diff_against_original(const fs::path& project_root, const fs::path& tree_root,
                                         const std::vector<const TryCatchSite*>& sites) {
  std::set<std::string> files;
  for (const auto* s : sites) files.insert(s->try_span.file);
  std::string out;
  for (const auto& rel : files) {
    out += unified_diff(read_file(project_root / rel), read_file(tree_root / rel), "a/" + rel,
                        "b/" + rel);
  }
  return out;
}

}  // namespace detail

// Runs the whole stretch phase against candidates (sites whose source
// independence is SATISFIED): individual validation, then combined validation
// with greedy most-recent-first rollback. Returns outcomes in document order;
// combined_diff receives the final accepted patch set.
inline std::vector<StretchOutcome> run_stretch_phase(
    const fs::path& project_root, const fs::path& work_dir, const SiteInventory& inv,
    const std::vector<ContractVerdict>& verdicts, const TraceLog& standard_trace,
    const TreeValidator& validate, std::string* combined_diff) {
  std::vector<StretchOutcome> outcomes;
  std::vector<const TryCatchSite*> attempted;

  for (const auto& v : verdicts) {
    if (v.source_independence != VerdictValue::kSatisfied) continue;
    const TryCatchSite* site = inv.find(v.site_id);
    if (!site) continue;
    StretchOutcome out;
    out.site_id = site->site_id;
    if (is_already_generic(*site)) {
      out.decision = StretchDecision::kSkippedAlreadyGeneric;
      out.kase = classify_candidate(*site, standard_trace);
      outcomes.push_back(std::move(out));
      continue;
    }
    out.kase = classify_candidate(*site, standard_trace);
    if (out.kase == StretchCase::kBubblesToBlue) {
      out.decision = StretchDecision::kSkippedBlue;
      outcomes.push_back(std::move(out));
      continue;
    }
    attempted.push_back(site);
    outcomes.push_back(std::move(out));
  }

  auto outcome_of = [&](const std::string& site_id) -> StretchOutcome& {
    for (auto& o : outcomes) {
      if (o.site_id == site_id) return o;
    }
    throw error("stretch: unknown site " + site_id);
  };

  std::vector<const TryCatchSite*> accepted;
  for (const auto* site : attempted) {
    fs::path tree = work_dir / site->site_id;
    detail::materialize_stretched_tree(project_root, tree, {site});
    StretchOutcome& out = outcome_of(site->site_id);
    out.patch = detail::diff_against_original(project_root, tree, {site});
    std::vector<std::string> failing = validate(tree, site->site_id);
    if (failing.empty()) {
      out.decision = StretchDecision::kStretched;
      accepted.push_back(site);
    } else {
      out.decision = StretchDecision::kRejectedByTests;
      out.failing_tests = std::move(failing);
    }
  }

  if (accepted.size() >= 2) {
    while (!accepted.empty()) {
      fs::path tree = work_dir / "combined";
      detail::materialize_stretched_tree(project_root, tree, accepted);
      std::vector<std::string> failing = validate(tree, "combined");
      if (failing.empty()) break;
      // individually sound but failing together: drop the most recent stretch
      const TryCatchSite* dropped = accepted.back();
      accepted.pop_back();
      StretchOutcome& out = outcome_of(dropped->site_id);
      out.decision = StretchDecision::kInterplay;
      out.failing_tests = std::move(failing);
    }
  }

  if (combined_diff) {
    combined_diff->clear();
    if (!accepted.empty()) {
      fs::path tree = work_dir / "final";
      detail::materialize_stretched_tree(project_root, tree, accepted);
      *combined_diff = detail::diff_against_original(project_root, tree, accepted);
    }
  }
  return outcomes;
}

}  // namespace resil
