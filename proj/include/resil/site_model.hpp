#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "resil/errors.hpp"
#include "resil/source_scan.hpp"
#include "resil/util/fs.hpp"
#include "resil/util/glob.hpp"
#include "resil/util/hash.hpp"

namespace resil {

struct SourceSpan {
  std::string file;  // path relative to project root, forward slashes
  int start_line = 0;
  int end_line = 0;  // 1-based, inclusive
  int start_col = 0;
  int end_col = 0;  // 0-based

  bool operator==(const SourceSpan& o) const {
    return file == o.file && start_line == o.start_line && end_line == o.end_line &&
           start_col == o.start_col && end_col == o.end_col;
  }
};

// One catch clause of one try statement. A try with k clauses yields k sites
// sharing try_span and distinguished by catch_ordinal.
struct TryCatchSite {
  std::string site_id;
  SourceSpan try_span;
  SourceSpan catch_span;
  std::vector<std::string> caught_types;  // "<root>" stands for catch(...)
  int catch_ordinal = 0;                  // 0-based among the statement's clauses
  std::string enclosing_function;

  // Byte offsets into the original file text, used by the instrumenter and
  // stretcher. Not serialized; re-derived by re-parsing when needed.
  std::string stmt_uid;  // shared by all clauses of the same try statement
  size_t try_block_open = 0;
  size_t catch_block_open = 0;
  size_t type_begin = 0;
  size_t type_end = 0;
  bool catch_all = false;
};

struct AppFilter {
  std::vector<std::string> app_patterns{"src/**"};
  std::vector<std::string> test_patterns{"tests/**", "test/**"};

  bool is_app_file(const std::string& rel) const {
    return glob_match_any(app_patterns, rel) && !glob_match_any(test_patterns, rel);
  }
};

struct SiteInventory {
  std::string project_fingerprint;
  std::vector<TryCatchSite> sites;

  const TryCatchSite* find(const std::string& site_id) const {
    for (const auto& s : sites) {
      if (s.site_id == site_id) return &s;
    }
    return nullptr;
  }
};

inline bool is_cpp_source(const std::string& rel) {
  for (const char* ext : {".cpp", ".cc", ".cxx", ".hpp", ".hh", ".hxx", ".h", ".ipp"}) {
    if (ends_with(rel, ext)) return true;
  }
  return false;
}

inline std::string make_site_id(const std::string& file, int line, int col, int ordinal) {
  std::string key =
      file + ":" + std::to_string(line) + ":" + std::to_string(col) + "#" + std::to_string(ordinal);
  return "sc" + hex64(fnv1a64(key));
}

inline std::string make_stmt_uid(const std::string& file, int line, int col) {
  return "st" + hex64(fnv1a64(file + ":" + std::to_string(line) + ":" + std::to_string(col)));
}

// Scans one file's text into sites. rel is the root-relative path recorded in spans.
inline std::vector<TryCatchSite> sites_in_source(std::string_view src, const std::string& rel) {
  std::vector<TryCatchSite> out;
  LineIndex idx(src);
  auto span_of = [&](size_t begin, size_t end_inclusive, SourceSpan& sp) {
    auto [sl, sc] = idx.locate(begin);
    auto [el, ec] = idx.locate(end_inclusive);
    sp.file = rel;
    sp.start_line = sl;
    sp.start_col = sc;
    sp.end_line = el;
    sp.end_col = ec;
  };
  for (const auto& st : scan_try_statements(src, rel)) {
    auto [tl, tc] = idx.locate(st.kw_offset);
    std::string stmt_uid = make_stmt_uid(rel, tl, tc);
    for (size_t k = 0; k < st.catches.size(); ++k) {
      const auto& cc = st.catches[k];
      TryCatchSite site;
      site.site_id = make_site_id(rel, tl, tc, static_cast<int>(k));
      span_of(st.kw_offset, st.block_close, site.try_span);
      span_of(cc.kw_offset, cc.block_close, site.catch_span);
      site.caught_types = {cc.declared_type};
      site.catch_ordinal = static_cast<int>(k);
      site.enclosing_function = st.enclosing_function;
      site.stmt_uid = stmt_uid;
      site.try_block_open = st.block_open;
      site.catch_block_open = cc.block_open;
      site.type_begin = cc.type_begin;
      site.type_end = cc.type_end;
      site.catch_all = cc.catch_all;
      out.push_back(std::move(site));
    }
  }
  return out;
}

// Walks the project tree, parses every application source file and returns the
// complete inventory. Deterministic: files sorted, statements in document order.
inline SiteInventory enumerate_sites(const fs::path& root, const AppFilter& filter) {
  SiteInventory inv;
  uint64_t fp = 0xcbf29ce484222325ull;
  for (const auto& rel : list_files(root)) {
    if (!is_cpp_source(rel) || !filter.is_app_file(rel)) continue;
    std::string src = read_file(root / rel);
    fp = fnv1a64(rel, fp);
    fp = fnv1a64(std::string_view("\0", 1), fp);
    fp = fnv1a64(src, fp);
    auto sites = sites_in_source(src, rel);
    inv.sites.insert(inv.sites.end(), sites.begin(), sites.end());
  }
  inv.project_fingerprint = hex64(fp);
  return inv;
}

inline nlohmann::json span_to_json(const SourceSpan& sp) {
  return {{"lines", {sp.start_line, sp.end_line}}, {"cols", {sp.start_col, sp.end_col}}};
}

inline void span_from_json(const nlohmann::json& j, const std::string& file, SourceSpan& sp) {
  sp.file = file;
  sp.start_line = j.at("lines").at(0).get<int>();
  sp.end_line = j.at("lines").at(1).get<int>();
  if (j.contains("cols")) {
    sp.start_col = j.at("cols").at(0).get<int>();
    sp.end_col = j.at("cols").at(1).get<int>();
  }
}

inline nlohmann::json inventory_to_json(const SiteInventory& inv) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& s : inv.sites) {
    sites.push_back({{"site_id", s.site_id},
                     {"file", s.try_span.file},
                     {"try", span_to_json(s.try_span)},
                     {"catch", span_to_json(s.catch_span)},
                     {"caught_types", s.caught_types},
                     {"catch_ordinal", s.catch_ordinal},
                     {"function", s.enclosing_function}});
  }
  return {{"project_fingerprint", inv.project_fingerprint}, {"sites", sites}};
}

inline SiteInventory inventory_from_json(const nlohmann::json& j) {
  SiteInventory inv;
  inv.project_fingerprint = j.at("project_fingerprint").get<std::string>();
  for (const auto& js : j.at("sites")) {
    TryCatchSite s;
    s.site_id = js.at("site_id").get<std::string>();
    std::string file = js.at("file").get<std::string>();
    span_from_json(js.at("try"), file, s.try_span);
    span_from_json(js.at("catch"), file, s.catch_span);
    s.caught_types = js.at("caught_types").get<std::vector<std::string>>();
    if (s.caught_types.empty()) throw error("inventory: site with empty caught_types");
    s.catch_ordinal = js.at("catch_ordinal").get<int>();
    s.enclosing_function = js.at("function").get<std::string>();
    s.stmt_uid = make_stmt_uid(file, s.try_span.start_line, s.try_span.start_col);
    inv.sites.push_back(std::move(s));
  }
  return inv;
}

}  // namespace resil
