#pragma once

// Source-to-source instrumentation. Rewrites every try-catch statement in
// application code so that, at run time, the controller can observe usages
// (pink/white/blue per clause-site) and synthesize a planned exception at the
// top of the try block on every traversal. All hook text is inserted on
// existing lines, so line numbers below the prepended include stay valid.

#include <algorithm>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "resil/errors.hpp"
#include "resil/site_model.hpp"
#include "resil/util/fs.hpp"
#include "resil/util/strings.hpp"

namespace resil {

inline constexpr const char* kInstrumentMarker = "/*sc:instrumented:v1*/";
inline constexpr const char* kRuntimeIncludeDir = ".scharness/include";

// Contents of the controller and test-framework headers, shipped into every
// tree the analyzer builds (SC_INCLUDE points at the materialized directory).
struct RuntimeSources {
  std::string sc_runtime;
  std::string sctest;
};

inline void write_runtime(const fs::path& tree_root, const RuntimeSources& rt) {
  write_file(tree_root / kRuntimeIncludeDir / "sc_runtime.hpp", rt.sc_runtime);
  write_file(tree_root / kRuntimeIncludeDir / "sctest.hpp", rt.sctest);
}

struct InstrumentResult {
  int files_rewritten = 0;
  int statements = 0;
  int sites = 0;
};

namespace detail {

struct Insertion {
  size_t at;  // byte index the text is inserted before
  std::string text;
};

inline std::string apply_insertions(std::string src, std::vector<Insertion> ins) {
  std::stable_sort(ins.begin(), ins.end(),
                   [](const Insertion& a, const Insertion& b) { return a.at > b.at; });
  for (const auto& i : ins) {
    src.insert(i.at, i.text);
  }
  return src;
}

inline std::string instrument_source(const std::string& src, const std::string& rel,
                                     const std::vector<TryCatchSite>& sites, int* statements) {
  // group clause-sites per try statement, in document order
  std::map<size_t, std::vector<const TryCatchSite*>> by_stmt;  // keyed by try_block_open
  for (const auto& s : sites) {
    by_stmt[s.try_block_open].push_back(&s);
  }
  std::vector<Insertion> ins;
  int stmt_idx = 0;
  for (auto& [try_open, clauses] : by_stmt) {
    std::sort(clauses.begin(), clauses.end(), [](const TryCatchSite* a, const TryCatchSite* b) {
      return a->catch_ordinal < b->catch_ordinal;
    });
    const std::string stmt_uid = clauses.front()->stmt_uid;
    std::string hook = " ::scrt::TryGuard sc_tg_" + std::to_string(stmt_idx) + "(\"" +
                       cpp_escape(stmt_uid) + "\"";
    for (const auto* c : clauses) hook += ",\"" + cpp_escape(c->site_id) + "\"";
    hook += ");";
    for (const auto* c : clauses) {
      const std::string& type = c->caught_types.front();
      if (c->catch_all) {
        hook += " ::scrt::cap_root(\"" + cpp_escape(c->site_id) + "\");";
        hook += " if(::scrt::wants(\"" + cpp_escape(c->site_id) +
                "\",\"<root>\")) ::scrt::throw_root();";
      } else {
        hook += " ::scrt::cap<" + type + ">(\"" + cpp_escape(c->site_id) + "\",\"" +
                cpp_escape(type) + "\");";
        hook += " if(::scrt::wants(\"" + cpp_escape(c->site_id) + "\",\"" + cpp_escape(type) +
                "\")) ::scrt::throw_injected<" + type + ">(\"" + cpp_escape(type) + "\");";
      }
      ins.push_back({c->catch_block_open + 1, " ::scrt::on_catch(\"" + cpp_escape(stmt_uid) +
                                                  "\",\"" + cpp_escape(c->site_id) + "\");"});
    }
    ins.push_back({try_open + 1, hook});
    ++stmt_idx;
  }
  (void)rel;
  *statements += stmt_idx;
  std::string out = apply_insertions(src, std::move(ins));
  return std::string(kInstrumentMarker) + "\n#include <sc_runtime.hpp>\n" + out;
}

}  // namespace detail

// Copies project_root to out_root and rewrites files containing sites.
// Refuses already-instrumented input and inventories that no longer match the
// tree content (stale fingerprint).
inline InstrumentResult instrument(const fs::path& project_root, const fs::path& out_root,
                                   const SiteInventory& inv, const AppFilter& filter,
                                   const RuntimeSources& runtime) {
  SiteInventory fresh = enumerate_sites(project_root, filter);
  for (const auto& rel : list_files(project_root)) {
    if (!is_cpp_source(rel) || !filter.is_app_file(rel)) continue;
    std::string head = read_file(project_root / rel).substr(0, std::strlen(kInstrumentMarker));
    if (head == kInstrumentMarker) {
      throw instrument_error("refusing to instrument " + rel + ": tree is already instrumented");
    }
  }
  if (fresh.project_fingerprint != inv.project_fingerprint) {
    throw instrument_error("stale inventory: project fingerprint " + inv.project_fingerprint +
                           " does not match tree content " + fresh.project_fingerprint);
  }

  copy_tree(project_root, out_root);
  write_runtime(out_root, runtime);

  std::map<std::string, std::vector<TryCatchSite>> by_file;
  for (const auto& s : fresh.sites) by_file[s.try_span.file].push_back(s);

  InstrumentResult res;
  for (const auto& [rel, sites] : by_file) {
    std::string src = read_file(project_root / rel);
    std::string rewritten = detail::instrument_source(src, rel, sites, &res.statements);
    write_file(out_root / rel, rewritten);
    ++res.files_rewritten;
    res.sites += static_cast<int>(sites.size());
  }
  return res;
}

}  // namespace resil
