#pragma once

// Minimal test framework for analyzed projects. Tests register via SC_TEST and
// report through JUnit-style XML (--results=PATH); a single test is selected
// with --test=NAME. The runner doubles as the trace boundary: exceptions that
// escape test code are recorded as bubbles before the verdict is decided.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include <sc_runtime.hpp>

namespace sctest {

// Deliberately not derived from std::exception so application catch clauses
// cannot swallow a failed assertion.
struct assertion_error {
  std::string message;
};

struct skip_marker {};

struct TestCase {
  const char* name;
  void (*fn)();
};

inline std::vector<TestCase>& registry() {
  static std::vector<TestCase> tests;
  return tests;
}

inline bool register_test(const char* name, void (*fn)()) {
  registry().push_back({name, fn});
  return true;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Outcome {
  std::string name;
  std::string verdict;  // pass | fail | skip
  std::string message;
  double seconds = 0;
};

inline int run_all(const std::string& filter, const std::string& results_path) {
  scrt::init_or_die();
  std::vector<Outcome> outcomes;
  int failures = 0;
  for (const auto& tc : registry()) {
    if (!filter.empty() && filter != tc.name) continue;
    Outcome out;
    out.name = tc.name;
    scrt::begin_test(tc.name);
    auto t0 = std::chrono::steady_clock::now();
    try {
      tc.fn();
      out.verdict = "pass";
    } catch (const skip_marker&) {
      out.verdict = "skip";
    } catch (const assertion_error& a) {
      scrt::on_framework_catch(false);
      out.verdict = "fail";
      out.message = a.message;
    } catch (const std::exception& e) {
      scrt::on_framework_catch(true);
      out.verdict = "fail";
      out.message = std::string("unexpected exception: ") + e.what();
    } catch (...) {
      scrt::on_framework_catch(true);
      out.verdict = "fail";
      out.message = "unexpected exception of non-standard type";
    }
    auto t1 = std::chrono::steady_clock::now();
    out.seconds = std::chrono::duration<double>(t1 - t0).count();
    scrt::end_test(tc.name, out.verdict.c_str());
    if (out.verdict == "fail") ++failures;
    outcomes.push_back(std::move(out));
    std::printf("[%s] %s\n", outcomes.back().verdict.c_str(), tc.name);
  }

  if (!results_path.empty()) {
    std::FILE* f = std::fopen(results_path.c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "sctest: cannot write results file %s\n", results_path.c_str());
      return 86;
    }
    int skips = 0;
    for (const auto& o : outcomes) {
      if (o.verdict == "skip") ++skips;
    }
    std::ostringstream xml;
    xml << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    xml << "<testsuite name=\"sctest\" tests=\"" << outcomes.size() << "\" failures=\"" << failures
        << "\" errors=\"0\" skipped=\"" << skips << "\">\n";
    for (const auto& o : outcomes) {
      xml << "  <testcase name=\"" << xml_escape(o.name) << "\" time=\"" << o.seconds << "\"";
      if (o.verdict == "pass") {
        xml << "/>\n";
      } else if (o.verdict == "skip") {
        xml << "><skipped/></testcase>\n";
      } else {
        xml << "><failure message=\"" << xml_escape(o.message) << "\"/></testcase>\n";
      }
    }
    xml << "</testsuite>\n";
    std::fputs(xml.str().c_str(), f);
    std::fclose(f);
  }
  return failures == 0 ? 0 : 1;
}

inline int main_impl(int argc, char** argv) {
  std::string filter, results;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg.rfind("--test=", 0) == 0) {
      filter = arg.substr(7);
    } else if (arg.rfind("--results=", 0) == 0) {
      results = arg.substr(10);
    } else if (arg == "--list") {
      for (const auto& tc : registry()) std::printf("%s\n", tc.name);
      return 0;
    }
  }
  return run_all(filter, results);
}

template <class T>
std::string display(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace sctest

#define SC_TEST(name)                                                        \
  static void sc_test_##name();                                              \
  static const bool sc_reg_##name = ::sctest::register_test(#name, &sc_test_##name); \
  static void sc_test_##name()

#define SC_ASSERT(cond)                                                     \
  do {                                                                      \
    if (!(cond)) {                                                          \
      throw ::sctest::assertion_error{std::string(__FILE__) + ":" +         \
                                      std::to_string(__LINE__) +            \
                                      ": assertion failed: " #cond};        \
    }                                                                       \
  } while (0)

#define SC_ASSERT_EQ(a, b)                                                    \
  do {                                                                        \
    auto sc_lhs = (a);                                                        \
    auto sc_rhs = (b);                                                        \
    if (!(sc_lhs == sc_rhs)) {                                                \
      throw ::sctest::assertion_error{                                       \
          std::string(__FILE__) + ":" + std::to_string(__LINE__) +            \
          ": expected " #a " == " #b " (" + ::sctest::display(sc_lhs) +       \
          " vs " + ::sctest::display(sc_rhs) + ")"};                          \
    }                                                                         \
  } while (0)

// Passes when expr raises Ex; the escape is recorded as a bubble reaching the
// test, which is what makes the enclosing test blue.
#define SC_EXPECT_THROWS(Ex, expr)                                          \
  do {                                                                      \
    bool sc_caught = false;                                                 \
    try {                                                                   \
      (void)(expr);                                                         \
    } catch (const Ex&) {                                                   \
      ::scrt::on_framework_catch(true);                                     \
      sc_caught = true;                                                     \
    }                                                                       \
    if (!sc_caught) {                                                       \
      throw ::sctest::assertion_error{std::string(__FILE__) + ":" +         \
                                      std::to_string(__LINE__) +            \
                                      ": expected " #Ex " from: " #expr};   \
    }                                                                       \
  } while (0)

#define SC_SKIP() throw ::sctest::skip_marker {}

#define SCTEST_MAIN()                                         \
  int main(int argc, char** argv) { return ::sctest::main_impl(argc, argv); }
