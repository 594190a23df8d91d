#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "resil/errors.hpp"
#include "resil/util/strings.hpp"

namespace resil {

enum class UsageKind { kPink, kWhite, kBlue };

inline const char* to_string(UsageKind k) {
  switch (k) {
    case UsageKind::kPink: return "pink";
    case UsageKind::kWhite: return "white";
    case UsageKind::kBlue: return "blue";
  }
  return "?";
}

// One traversal of one site during one test execution.
struct UsageEvent {
  std::string site_id;
  std::string test_id;
  UsageKind kind = UsageKind::kPink;
  std::optional<std::string> exception_type;  // absent iff pink
  long seq = 0;
  bool injected = false;
};

// An exception that escaped application code into test code.
struct BubbleEvent {
  std::string test_id;
  std::string exception_type;
  long seq = 0;
  bool injected = false;
};

// Whether the runtime can synthesize a given exception type at a site.
struct CapabilityEvent {
  std::string site_id;
  std::string type;
  bool ok = false;
};

struct TraceLog {
  std::vector<UsageEvent> usages;
  std::vector<BubbleEvent> bubbles;
  std::vector<CapabilityEvent> caps;
  std::set<std::string> tests_seen;  // from test_begin records

  std::vector<const UsageEvent*> usages_of(const std::string& site_id,
                                           const std::string& test_id) const {
    std::vector<const UsageEvent*> out;
    for (const auto& u : usages) {
      if (u.site_id == site_id && u.test_id == test_id) out.push_back(&u);
    }
    return out;
  }

  int bubble_count(const std::string& test_id) const {
    int n = 0;
    for (const auto& b : bubbles) {
      if (b.test_id == test_id) ++n;
    }
    return n;
  }
};

// Parses a JSONL trace. Rejects streams violating the record invariants:
// pink usages carry no exception type, sequence numbers are strictly
// increasing per test, and usage/bubble records fall inside test boundaries.
inline TraceLog parse_trace(const std::string& text) {
  TraceLog log;
  std::map<std::string, long> last_seq;
  std::string open_test;
  bool in_test = false;
  size_t lineno = 0;
  for (const auto& line : split(text, '\n')) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const nlohmann::json::exception& e) {
      throw error("trace corrupted at line " + std::to_string(lineno) + ": " + e.what());
    }
    auto corrupt = [&](const std::string& why) -> void {
      throw error("trace corrupted at line " + std::to_string(lineno) + ": " + why);
    };
    std::string ev = j.value("ev", "");
    long seq = j.value("seq", 0L);
    std::string test = j.contains("test") && j["test"].is_string() ? j["test"].get<std::string>() : "";
    if (!test.empty()) {
      long& prev = last_seq[test];
      if (seq <= prev) corrupt("sequence not increasing for test " + test);
      prev = seq;
    }
    if (ev == "test_begin") {
      if (in_test) corrupt("nested test_begin");
      in_test = true;
      open_test = test;
      log.tests_seen.insert(test);
    } else if (ev == "test_end") {
      if (!in_test || test != open_test) corrupt("test_end without matching begin");
      in_test = false;
      open_test.clear();
    } else if (ev == "usage") {
      if (!in_test || test != open_test) corrupt("usage outside test boundaries");
      UsageEvent u;
      u.site_id = j.at("site").get<std::string>();
      u.test_id = test;
      std::string kind = j.at("kind").get<std::string>();
      if (kind == "pink") {
        u.kind = UsageKind::kPink;
      } else if (kind == "white") {
        u.kind = UsageKind::kWhite;
      } else if (kind == "blue") {
        u.kind = UsageKind::kBlue;
      } else {
        corrupt("unknown usage kind " + kind);
      }
      if (!j.at("ex").is_null()) u.exception_type = j["ex"].get<std::string>();
      if ((u.kind == UsageKind::kPink) == u.exception_type.has_value()) {
        corrupt("usage kind/exception mismatch");
      }
      u.seq = seq;
      u.injected = j.value("inj", false);
      log.usages.push_back(std::move(u));
    } else if (ev == "bubble") {
      if (!in_test || test != open_test) corrupt("bubble outside test boundaries");
      BubbleEvent b;
      b.test_id = test;
      b.exception_type = j.at("ex").get<std::string>();
      b.seq = seq;
      b.injected = j.value("inj", false);
      log.bubbles.push_back(std::move(b));
    } else if (ev == "cap") {
      CapabilityEvent c;
      c.site_id = j.at("site").get<std::string>();
      c.type = j.at("ex").get<std::string>();
      c.ok = j.at("ok").get<bool>();
      log.caps.push_back(std::move(c));
    }
    // other record kinds: tolerated for forward compatibility
  }
  if (in_test) throw error("trace corrupted: test " + open_test + " never ended");
  return log;
}

}  // namespace resil
