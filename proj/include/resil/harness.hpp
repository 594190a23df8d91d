#pragma once

// Runs subject test suites in fresh processes and turns their JUnit output and
// trace stream into colored test records, suite statistics and the coverage
// index the injection sweep is scoped by.

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "resil/errors.hpp"
#include "resil/site_model.hpp"
#include "resil/trace.hpp"
#include "resil/util/fs.hpp"
#include "resil/util/strings.hpp"

namespace resil {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool signaled = false;
  double seconds = 0;
  std::string output_tail;
};

// Launches shell commands with a cwd, extra environment and a hard timeout.
// Also the ledger of how many subject processes were started, by category —
// the analysis cost model is stated in terms of these counts.
class ProcessRunner {
 public:
  ProcessResult run(const std::string& command, const fs::path& cwd,
                    const std::vector<std::pair<std::string, std::string>>& env,
                    double timeout_seconds, const fs::path& capture_path,
                    const std::string& category) {
    {
      std::lock_guard<std::mutex> lk(mu_);
      ++launches_[category];
    }
    if (capture_path.has_parent_path()) fs::create_directories(capture_path.parent_path());

    pid_t pid = ::fork();
    if (pid < 0) throw pipeline_error("fork failed");
    if (pid == 0) {
      ::setpgid(0, 0);
      if (::chdir(cwd.c_str()) != 0) _exit(125);
      for (const auto& [k, v] : env) ::setenv(k.c_str(), v.c_str(), 1);
      int fd = ::open(capture_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
      if (fd >= 0) {
        ::dup2(fd, 1);
        ::dup2(fd, 2);
        ::close(fd);
      }
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }

    ProcessResult res;
    auto start = std::chrono::steady_clock::now();
    auto deadline = start + std::chrono::duration<double>(timeout_seconds);
    int status = 0;
    while (true) {
      pid_t r = ::waitpid(pid, &status, WNOHANG);
      if (r == pid) break;
      if (r < 0) throw pipeline_error("waitpid failed");
      if (std::chrono::steady_clock::now() >= deadline) {
        ::kill(-pid, SIGKILL);
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &status, 0);
        res.timed_out = true;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!res.timed_out) {
      if (WIFEXITED(status)) {
        res.exit_code = WEXITSTATUS(status);
      } else if (WIFSIGNALED(status)) {
        res.signaled = true;
        res.exit_code = 128 + WTERMSIG(status);
      }
    }
    res.output_tail = tail_of(capture_path);
    return res;
  }

  std::map<std::string, long> launch_counts() const {
    std::lock_guard<std::mutex> lk(mu_);
    return launches_;
  }

  long launches(const std::string& category) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = launches_.find(category);
    return it == launches_.end() ? 0 : it->second;
  }

 private:
  static std::string tail_of(const fs::path& p) {
    std::error_code ec;
    if (!fs::exists(p, ec)) return "";
    std::string all = read_file(p);
    constexpr size_t kTail = 4096;
    return all.size() <= kTail ? all : all.substr(all.size() - kTail);
  }

  mutable std::mutex mu_;
  std::map<std::string, long> launches_;
};

enum class TestVerdict { kPass, kFail, kError, kSkip };

inline const char* to_string(TestVerdict v) {
  switch (v) {
    case TestVerdict::kPass: return "pass";
    case TestVerdict::kFail: return "fail";
    case TestVerdict::kError: return "error";
    case TestVerdict::kSkip: return "skip";
  }
  return "?";
}

struct TestResult {
  std::string test_id;
  TestVerdict verdict = TestVerdict::kError;
  std::string detail;
};

namespace detail {

inline std::string xml_unescape(std::string s) {
  s = replace_all(std::move(s), "&lt;", "<");
  s = replace_all(std::move(s), "&gt;", ">");
  s = replace_all(std::move(s), "&quot;", "\"");
  s = replace_all(std::move(s), "&apos;", "'");
  s = replace_all(std::move(s), "&amp;", "&");
  return s;
}

inline std::optional<std::string> attr_value(std::string_view tag, std::string_view attr) {
  std::string needle = std::string(attr) + "=\"";
  size_t pos = tag.find(needle);
  if (pos == std::string_view::npos) return std::nullopt;
  size_t begin = pos + needle.size();
  size_t end = tag.find('"', begin);
  if (end == std::string_view::npos) return std::nullopt;
  return xml_unescape(std::string(tag.substr(begin, end - begin)));
}

}  // namespace detail

// Forgiving JUnit-style XML reader: enough for the <testcase> structure the
// bundled framework and common runners emit.
inline std::vector<TestResult> parse_junit(const std::string& xml) {
  std::vector<TestResult> out;
  size_t pos = 0;
  while (true) {
    size_t tc = xml.find("<testcase", pos);
    if (tc == std::string::npos) break;
    size_t tag_end = xml.find('>', tc);
    if (tag_end == std::string::npos) break;
    std::string_view tag(xml.data() + tc, tag_end - tc + 1);
    TestResult r;
    r.test_id = detail::attr_value(tag, "name").value_or("");
    bool self_closed = tag.size() >= 2 && tag[tag.size() - 2] == '/';
    if (self_closed) {
      r.verdict = TestVerdict::kPass;
      pos = tag_end + 1;
    } else {
      size_t close = xml.find("</testcase>", tag_end);
      if (close == std::string::npos) close = xml.size();
      std::string_view body(xml.data() + tag_end + 1, close - tag_end - 1);
      if (body.find("<failure") != std::string_view::npos) {
        r.verdict = TestVerdict::kFail;
        size_t f = body.find("<failure");
        size_t fe = body.find('>', f);
        if (fe != std::string_view::npos) {
          r.detail = detail::attr_value(body.substr(f, fe - f + 1), "message").value_or("");
        }
      } else if (body.find("<error") != std::string_view::npos) {
        r.verdict = TestVerdict::kError;
      } else if (body.find("<skipped") != std::string_view::npos) {
        r.verdict = TestVerdict::kSkip;
      } else {
        r.verdict = TestVerdict::kPass;
      }
      pos = close + 1;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suite execution

struct SuiteRunSpec {
  fs::path tree;            // project copy the commands run in
  std::string test_cmd;     // template with {results} and {test} placeholders
  double timeout_seconds = 30;
  std::string trace_path;   // empty: no tracing requested
  std::string mode = "standard";
  std::string plan_site;
  std::string plan_type;
  std::string test_filter;  // single test id, empty for the whole suite
  fs::path results_path;
  fs::path capture_path;
  std::string category = "suite_run";
};

struct SuiteRunOutcome {
  std::vector<TestResult> tests;
  ProcessResult proc;
  bool results_present = false;
};

inline std::vector<std::pair<std::string, std::string>> subject_env(const SuiteRunSpec& spec) {
  std::vector<std::pair<std::string, std::string>> env;
  env.emplace_back("TRACE_PATH", spec.trace_path);
  env.emplace_back("MODE", spec.mode);
  env.emplace_back("PLAN_SITE", spec.plan_site);
  env.emplace_back("PLAN_TYPE", spec.plan_type);
  env.emplace_back("SC_INCLUDE", (spec.tree / ".scharness/include").string());
  return env;
}

inline SuiteRunOutcome run_suite_once(ProcessRunner& runner, const SuiteRunSpec& spec) {
  std::string cmd = replace_all(spec.test_cmd, "{results}", spec.results_path.string());
  cmd = replace_all(cmd, "{test}", spec.test_filter);
  std::error_code ec;
  fs::remove(spec.results_path, ec);
  SuiteRunOutcome out;
  out.proc = runner.run(cmd, spec.tree, subject_env(spec), spec.timeout_seconds,
                        spec.capture_path, spec.category);
  if (fs::exists(spec.results_path)) {
    out.results_present = true;
    out.tests = parse_junit(read_file(spec.results_path));
  }
  return out;
}

// Builds a tree in place (nonzero exit aborts the pipeline with the captured
// compiler output).
inline void build_tree(ProcessRunner& runner, const fs::path& tree, const std::string& build_cmd,
                       double timeout_seconds, const fs::path& capture_path,
                       const std::string& category) {
  SuiteRunSpec spec;
  spec.tree = tree;
  auto env = subject_env(spec);
  ProcessResult r = runner.run(build_cmd, tree, env, timeout_seconds, capture_path, category);
  if (r.timed_out) throw pipeline_error("build timed out in " + tree.string());
  if (r.exit_code != 0) {
    throw pipeline_error("build failed in " + tree.string() + ":\n" + r.output_tail);
  }
}

// ---------------------------------------------------------------------------
// Coloring, stats, coverage

enum class TestColor { kNone, kPink, kWhite, kBlue };

inline const char* to_string(TestColor c) {
  switch (c) {
    case TestColor::kNone: return "none";
    case TestColor::kPink: return "pink";
    case TestColor::kWhite: return "white";
    case TestColor::kBlue: return "blue";
  }
  return "?";
}

struct TestRecord {
  std::string test_id;
  TestVerdict verdict = TestVerdict::kError;
  TestColor color = TestColor::kNone;
  int bubbled = 0;          // exceptions that reached test code
  int internal_caught = 0;  // exceptions caught entirely inside application code
};

// Assigns the taxonomy color to each passing test from the trace: blue when at
// least one exception bubbled into test code, white when none bubbled but some
// exception was caught inside the application, pink otherwise.
inline std::vector<TestRecord> color_tests(const std::vector<TestResult>& results,
                                           const TraceLog& trace) {
  std::map<std::string, int> whites;
  for (const auto& u : trace.usages) {
    if (u.kind == UsageKind::kWhite) ++whites[u.test_id];
  }
  std::vector<TestRecord> out;
  for (const auto& r : results) {
    TestRecord rec;
    rec.test_id = r.test_id;
    rec.verdict = r.verdict;
    rec.bubbled = trace.bubble_count(r.test_id);
    rec.internal_caught = whites.count(r.test_id) ? whites[r.test_id] : 0;
    if (r.verdict == TestVerdict::kPass) {
      if (rec.bubbled > 0) {
        rec.color = TestColor::kBlue;
      } else if (rec.internal_caught > 0) {
        rec.color = TestColor::kWhite;
      } else {
        rec.color = TestColor::kPink;
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

struct SuiteStats {
  int total = 0;  // passing tests; the colors partition exactly these
  int blue = 0;
  int white = 0;
  int pink = 0;
  int failed = 0;
  int skipped = 0;
  int errored = 0;
};

inline SuiteStats compute_stats(const std::vector<TestRecord>& records) {
  SuiteStats s;
  for (const auto& r : records) {
    switch (r.verdict) {
      case TestVerdict::kPass:
        ++s.total;
        if (r.color == TestColor::kBlue) ++s.blue;
        if (r.color == TestColor::kWhite) ++s.white;
        if (r.color == TestColor::kPink) ++s.pink;
        break;
      case TestVerdict::kFail: ++s.failed; break;
      case TestVerdict::kSkip: ++s.skipped; break;
      case TestVerdict::kError: ++s.errored; break;
    }
  }
  if (s.total != s.blue + s.white + s.pink) {
    throw error("taxonomy partition violated: " + std::to_string(s.total) + " passing vs " +
                std::to_string(s.blue) + "+" + std::to_string(s.white) + "+" +
                std::to_string(s.pink));
  }
  return s;
}

// site → covering tests → usage kinds observed in the standard run. Sites with
// no executions are present with an empty inner map.
struct CoverageIndex {
  std::map<std::string, std::map<std::string, std::vector<UsageKind>>> by_site;

  std::vector<std::string> covering_tests(const std::string& site_id) const {
    std::vector<std::string> out;
    auto it = by_site.find(site_id);
    if (it == by_site.end()) return out;
    for (const auto& [test, kinds] : it->second) out.push_back(test);
    return out;
  }

  bool covers(const std::string& site_id, const std::string& test_id) const {
    auto it = by_site.find(site_id);
    return it != by_site.end() && it->second.count(test_id) > 0;
  }
};

inline CoverageIndex build_coverage_index(const TraceLog& trace, const SiteInventory& inv) {
  CoverageIndex idx;
  for (const auto& s : inv.sites) idx.by_site[s.site_id];
  for (const auto& u : trace.usages) {
    idx.by_site[u.site_id][u.test_id].push_back(u.kind);
  }
  return idx;
}

// Tests whose verdicts differ between two runs of the same suite (used both
// for the instrumentation transparency check and flaky-test detection).
inline std::vector<std::string> diff_verdicts(const std::vector<TestResult>& a,
                                              const std::vector<TestResult>& b) {
  std::map<std::string, TestVerdict> av, bv;
  for (const auto& r : a) av[r.test_id] = r.verdict;
  for (const auto& r : b) bv[r.test_id] = r.verdict;
  std::set<std::string> names;
  for (const auto& [k, v] : av) names.insert(k);
  for (const auto& [k, v] : bv) names.insert(k);
  std::vector<std::string> out;
  for (const auto& n : names) {
    auto ia = av.find(n);
    auto ib = bv.find(n);
    if (ia == av.end() || ib == bv.end() || ia->second != ib->second) out.push_back(n);
  }
  return out;
}

}  // namespace resil
