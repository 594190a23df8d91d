#pragma once

// Subject-side controller for short-circuit exception analysis. Instrumented
// application code and the sctest framework include this header; it stays
// inert unless the analyzer configures it through the environment:
//
//   TRACE_PATH  where usage/bubble records are appended (JSONL, one per line)
//   MODE        "standard" or "inject"
//   PLAN_SITE   site id to inject at (inject mode)
//   PLAN_TYPE   declared exception type name to synthesize ("<root>" allowed)
//
// The header is self-contained on purpose: it is copied into analyzed trees.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <new>
#include <set>
#include <string>
#include <type_traits>
#include <typeinfo>
#include <utility>
#include <vector>

#if defined(__GNUG__)
#include <cxxabi.h>
#endif

namespace scrt {

inline const char* env_or(const char* key, const char* fallback) {
  const char* v = std::getenv(key);
  return v && *v ? v : fallback;
}

struct Config {
  std::string trace_path;
  std::string mode;
  std::string plan_site;
  std::string plan_type;
  bool inject = false;
};

inline const Config& config() {
  static const Config c = [] {
    Config cfg;
    cfg.trace_path = env_or("TRACE_PATH", "");
    cfg.mode = env_or("MODE", "standard");
    cfg.plan_site = env_or("PLAN_SITE", "");
    cfg.plan_type = env_or("PLAN_TYPE", "");
    cfg.inject = cfg.mode == "inject" && !cfg.plan_site.empty() && !cfg.plan_type.empty();
    return cfg;
  }();
  return c;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Serializes trace records. Sequence numbers are assigned under the same lock
// as the write so file order and seq order agree; every line is flushed so a
// killed process loses at most the line being written.
class Tracer {
 public:
  static Tracer& instance() {
    static Tracer t;
    return t;
  }

  // Returns false if the trace file cannot be opened (hard error for callers).
  bool open() {
    std::lock_guard<std::mutex> lk(mu_);
    if (f_ || config().trace_path.empty()) return true;
    f_ = std::fopen(config().trace_path.c_str(), "a");
    return f_ != nullptr;
  }

  bool active() {
    std::lock_guard<std::mutex> lk(mu_);
    return f_ != nullptr;
  }

  void set_test(const std::string& id) {
    std::lock_guard<std::mutex> lk(mu_);
    test_ = id;
  }

  void emit_usage(const char* site, const char* kind, const std::string* ex_type, bool injected) {
    std::lock_guard<std::mutex> lk(mu_);
    if (!f_) return;
    std::string line = "{\"ev\":\"usage\",\"site\":\"";
    line += site;
    line += "\",\"test\":\"" + json_escape(test_) + "\",\"kind\":\"";
    line += kind;
    line += "\",\"ex\":";
    line += ex_type ? "\"" + json_escape(*ex_type) + "\"" : std::string("null");
    line += ",\"seq\":" + std::to_string(++seq_);
    if (injected) line += ",\"inj\":true";
    line += "}";
    write_line(line);
  }

  void emit_bubble(const std::string& ex_type, bool injected) {
    std::lock_guard<std::mutex> lk(mu_);
    if (!f_) return;
    std::string line = "{\"ev\":\"bubble\",\"site\":null,\"test\":\"" + json_escape(test_) +
                       "\",\"kind\":null,\"ex\":\"" + json_escape(ex_type) + "\"";
    line += ",\"seq\":" + std::to_string(++seq_);
    if (injected) line += ",\"inj\":true";
    line += "}";
    write_line(line);
  }

  void emit_boundary(const char* ev, const std::string& test, const char* verdict) {
    std::lock_guard<std::mutex> lk(mu_);
    if (!f_) return;
    std::string line = "{\"ev\":\"";
    line += ev;
    line += "\",\"site\":null,\"test\":\"" + json_escape(test) + "\",\"kind\":null,\"ex\":null";
    line += ",\"seq\":" + std::to_string(++seq_);
    if (verdict) {
      line += ",\"verdict\":\"";
      line += verdict;
      line += "\"";
    }
    line += "}";
    write_line(line);
  }

  // Capability record: whether an exception type can be synthesized at a site.
  // Deduplicated per (site, type) so repeated traversals stay quiet.
  void emit_cap(const char* site, const char* type, bool ok) {
    std::lock_guard<std::mutex> lk(mu_);
    if (!f_) return;
    if (!caps_.insert(std::string(site) + "|" + type).second) return;
    std::string line = "{\"ev\":\"cap\",\"site\":\"";
    line += site;
    line += "\",\"test\":\"" + json_escape(test_) + "\",\"kind\":null,\"ex\":\"";
    line += json_escape(type);
    line += "\",\"seq\":" + std::to_string(++seq_);
    line += ",\"ok\":";
    line += ok ? "true" : "false";
    line += "}";
    write_line(line);
  }

 private:
  void write_line(const std::string& line) {
    std::fputs(line.c_str(), f_);
    std::fputc('\n', f_);
    std::fflush(f_);
  }

  std::FILE* f_ = nullptr;
  std::mutex mu_;
  long seq_ = 0;
  std::string test_;
  std::set<std::string> caps_;
};

// ---------------------------------------------------------------------------
// Injected exception synthesis

// Marker mixin carried by synthesized exceptions so handlers and the trace can
// tell injected traversals from organic ones.
struct injected_marker {
  virtual ~injected_marker() = default;
  virtual const char* planned_type() const noexcept = 0;
};

namespace detail {
struct msg_ctor_tag {};
struct def_ctor_tag {};
}  // namespace detail

template <class T>
class injected_exc final : public T, public injected_marker {
 public:
  injected_exc(const char* planned, detail::msg_ctor_tag)
      : T("short-circuit-injected"), planned_(planned) {}
  injected_exc(const char* planned, detail::def_ctor_tag) : T(), planned_(planned) {}

  const char* planned_type() const noexcept override { return planned_; }
  const char* what() const noexcept override { return "short-circuit-injected"; }

 private:
  const char* planned_;
};

// Synthesized root-type exception for catch(...) clauses and catch stretching.
class injected_root final : public std::exception, public injected_marker {
 public:
  const char* what() const noexcept override { return "short-circuit-injected"; }
  const char* planned_type() const noexcept override { return "<root>"; }
};

// Marks the in-flight exception as injected when the exact type must be thrown
// (final classes cannot take the marker mixin).
inline const char*& injected_flag() {
  thread_local const char* planned = nullptr;
  return planned;
}

template <class T>
inline constexpr bool has_usable_ctor_v = std::is_constructible_v<T, const char*> ||
                                          std::is_constructible_v<T, std::string> ||
                                          std::is_default_constructible_v<T>;

// A type is injectable if we can either derive a marked subtype from it or, for
// final types, construct the exact type directly.
template <class T>
inline constexpr bool injectable_v =
    std::is_final_v<T> ? has_usable_ctor_v<T> : (std::is_abstract_v<T> || has_usable_ctor_v<T>);

template <class T>
[[noreturn]] inline void throw_injected(const char* planned) {
  if constexpr (!std::is_final_v<T>) {
    if constexpr (std::is_constructible_v<T, const char*>) {
      throw injected_exc<T>(planned, detail::msg_ctor_tag{});
    } else {
      throw injected_exc<T>(planned, detail::def_ctor_tag{});
    }
  } else if constexpr (std::is_constructible_v<T, const char*>) {
    injected_flag() = planned;
    throw T("short-circuit-injected");
  } else if constexpr (std::is_constructible_v<T, std::string>) {
    injected_flag() = planned;
    throw T(std::string("short-circuit-injected"));
  } else if constexpr (std::is_default_constructible_v<T>) {
    injected_flag() = planned;
    throw T();
  } else {
    // Uninjectable rows are excluded by the analyzer before any plan targets
    // them; reaching this means the plan bypassed capability checks.
    std::fprintf(stderr, "scrt: plan targets uninjectable type %s\n", planned);
    std::terminate();
  }
}

[[noreturn]] inline void throw_root() { throw injected_root(); }

inline bool wants(const char* site, const char* type) {
  const Config& c = config();
  return c.inject && c.plan_site == site && c.plan_type == type;
}

template <class T>
inline void cap(const char* site, const char* type) {
  Tracer::instance().emit_cap(site, type, injectable_v<T>);
}

inline void cap_root(const char* site) { Tracer::instance().emit_cap(site, "<root>", true); }

// ---------------------------------------------------------------------------
// Traversal tracking

struct PendingTraversal {
  const char* stmt;
  std::vector<const char*> sites;
};

inline std::vector<PendingTraversal>& pendings() {
  thread_local std::vector<PendingTraversal> v;
  return v;
}

struct ExcInfo {
  std::string type;
  bool injected = false;
};

inline std::string demangled(const std::type_info& ti) {
#if defined(__GNUG__)
  int status = 0;
  char* raw = abi::__cxa_demangle(ti.name(), nullptr, nullptr, &status);
  if (raw && status == 0) {
    std::string out(raw);
    std::free(raw);
    return out;
  }
  std::free(raw);
#endif
  return ti.name();
}

// Must be called from inside a catch handler (there is a current exception).
inline ExcInfo inspect_current() {
  auto take_flag = []() -> const char* {
    const char* p = injected_flag();
    injected_flag() = nullptr;
    return p;
  };
  try {
    throw;
  } catch (const injected_marker& m) {
    take_flag();
    return {m.planned_type(), true};
  } catch (const std::exception& e) {
    if (const char* planned = take_flag()) return {planned, true};
    return {demangled(typeid(e)), false};
  } catch (...) {
    if (const char* planned = take_flag()) return {planned, true};
#if defined(__GNUG__)
    if (const std::type_info* ti = abi::__cxa_current_exception_type()) {
      return {demangled(*ti), false};
    }
#endif
    return {"<unknown>", false};
  }
}

// Placed as the first statement of every instrumented try block. A normal exit
// records a pink usage per clause-site; an exceptional exit queues the
// traversal until the next catch hook can identify the exception.
class TryGuard {
 public:
  template <class... S>
  explicit TryGuard(const char* stmt, S... sites) : stmt_(stmt), sites_{sites...} {
    base_ = std::uncaught_exceptions();
  }

  TryGuard(const TryGuard&) = delete;
  TryGuard& operator=(const TryGuard&) = delete;

  ~TryGuard() {
    if (std::uncaught_exceptions() > base_) {
      pendings().push_back({stmt_, sites_});
    } else {
      for (const char* s : sites_) {
        Tracer::instance().emit_usage(s, "pink", nullptr, false);
      }
    }
  }

 private:
  const char* stmt_;
  std::vector<const char*> sites_;
  int base_ = 0;
};

// Drains queued traversals against the clause that caught the exception: the
// catching statement's sites split white (this clause's site) / blue
// (sibling clauses), every other queued statement is blue for all its sites.
inline void resolve_pendings(const char* catching_stmt, const char* catching_site,
                             const ExcInfo& info) {
  auto& pd = pendings();
  for (const auto& rec : pd) {
    bool own = catching_stmt && std::strcmp(rec.stmt, catching_stmt) == 0;
    for (const char* s : rec.sites) {
      bool white = own && catching_site && std::strcmp(s, catching_site) == 0;
      Tracer::instance().emit_usage(s, white ? "white" : "blue", &info.type, info.injected);
    }
  }
  pd.clear();
}

// Hook placed as the first statement of every instrumented catch block.
inline void on_catch(const char* stmt, const char* site) {
  ExcInfo info = inspect_current();
  resolve_pendings(stmt, site, info);
}

// Called by the test framework when an exception reaches test code. Queued
// traversals become blue; the bubble itself is recorded when the escape is an
// application exception (assertion failures of the framework are not bubbles).
inline void on_framework_catch(bool record_bubble) {
  ExcInfo info = inspect_current();
  resolve_pendings(nullptr, nullptr, info);
  if (record_bubble) Tracer::instance().emit_bubble(info.type, info.injected);
}

inline void begin_test(const std::string& id) {
  pendings().clear();
  injected_flag() = nullptr;
  Tracer::instance().set_test(id);
  Tracer::instance().emit_boundary("test_begin", id, nullptr);
}

inline void end_test(const std::string& id, const char* verdict) {
  pendings().clear();
  Tracer::instance().emit_boundary("test_end", id, verdict);
  Tracer::instance().set_test("");
}

// Opens the trace before any test runs; exits hard when the file is unusable
// so a misconfigured run cannot silently produce an empty trace.
inline void init_or_die() {
  if (!Tracer::instance().open()) {
    std::fprintf(stderr, "scrt: cannot open trace file %s\n", config().trace_path.c_str());
    std::exit(86);
  }
}

}  // namespace scrt
