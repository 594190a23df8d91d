#pragma once

// Lightweight structural scan of C++ source: enough lexing to skip comments,
// strings and preprocessor lines, then a brace-tree walk that locates every
// try-catch statement, its block offsets, catch parameter types and the
// enclosing function name. Not a full parser; malformed structure is rejected
// with parse_error naming file/line/col.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "resil/errors.hpp"
#include "resil/util/strings.hpp"

namespace resil {

struct Token {
  enum Kind { kIdent, kPunct, kNumber, kLiteral };
  Kind kind;
  std::string text;
  size_t offset;

  bool is(std::string_view s) const { return text == s; }
  size_t end() const { return offset + text.size(); }
};

class LineIndex {
 public:
  explicit LineIndex(std::string_view src) {
    starts_.push_back(0);
    for (size_t i = 0; i < src.size(); ++i) {
      if (src[i] == '\n') starts_.push_back(i + 1);
    }
  }

  // 1-based line, 0-based column.
  std::pair<int, int> locate(size_t offset) const {
    size_t lo = 0, hi = starts_.size();
    while (lo + 1 < hi) {
      size_t mid = (lo + hi) / 2;
      if (starts_[mid] <= offset) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return {static_cast<int>(lo + 1), static_cast<int>(offset - starts_[lo])};
  }

 private:
  std::vector<size_t> starts_;
};

namespace detail {

inline bool ident_start(char c) {
  return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

inline bool at_line_start(std::string_view src, size_t i) {
  while (i > 0) {
    char c = src[i - 1];
    if (c == '\n') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
    --i;
  }
  return true;
}

}  // namespace detail

inline std::vector<Token> lex_cpp(std::string_view src, const std::string& file) {
  std::vector<Token> toks;
  LineIndex lines(src);
  auto fail = [&](size_t off, const std::string& msg) -> void {
    auto [l, c] = lines.locate(off);
    throw parse_error(file, l, c, msg);
  };

  size_t i = 0;
  const size_t n = src.size();
  auto consume_string = [&](size_t start) {
    size_t j = start + 1;
    while (j < n) {
      if (src[j] == '\\') {
        j += 2;
        continue;
      }
      if (src[j] == '"') return j + 1;
      if (src[j] == '\n') fail(start, "unterminated string literal");
      ++j;
    }
    fail(start, "unterminated string literal");
    return n;
  };
  auto consume_char = [&](size_t start) {
    size_t j = start + 1;
    while (j < n) {
      if (src[j] == '\\') {
        j += 2;
        continue;
      }
      if (src[j] == '\'') return j + 1;
      if (src[j] == '\n') fail(start, "unterminated character literal");
      ++j;
    }
    fail(start, "unterminated character literal");
    return n;
  };
  auto consume_raw_string = [&](size_t start) {
    // start points at the opening quote of R"delim( ... )delim"
    size_t j = start + 1;
    std::string delim;
    while (j < n && src[j] != '(') {
      delim += src[j];
      ++j;
    }
    if (j >= n) fail(start, "unterminated raw string literal");
    std::string closer = ")" + delim + "\"";
    size_t pos = src.find(closer, j + 1);
    if (pos == std::string_view::npos) fail(start, "unterminated raw string literal");
    return pos + closer.size();
  };

  while (i < n) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && src[i + 1] == '*') {
      size_t close = src.find("*/", i + 2);
      if (close == std::string_view::npos) fail(i, "unterminated block comment");
      i = close + 2;
      continue;
    }
    if (c == '#' && detail::at_line_start(src, i)) {
      // Preprocessor directive: swallow to end of line, honoring continuations.
      while (i < n) {
        if (src[i] == '\n') {
          ++i;
          break;
        }
        if (src[i] == '\\' && i + 1 < n && src[i + 1] == '\n') {
          i += 2;
          continue;
        }
        ++i;
      }
      continue;
    }
    if (c == '"') {
      size_t end = consume_string(i);
      toks.push_back({Token::kLiteral, std::string(src.substr(i, end - i)), i});
      i = end;
      continue;
    }
    if (c == '\'') {
      size_t end = consume_char(i);
      toks.push_back({Token::kLiteral, std::string(src.substr(i, end - i)), i});
      i = end;
      continue;
    }
    if (detail::ident_start(c)) {
      size_t j = i + 1;
      while (j < n && detail::ident_char(src[j])) ++j;
      std::string_view word = src.substr(i, j - i);
      if (j < n && src[j] == '"' &&
          (word == "R" || word == "uR" || word == "UR" || word == "LR" || word == "u8R")) {
        size_t end = consume_raw_string(j);
        toks.push_back({Token::kLiteral, std::string(src.substr(i, end - i)), i});
        i = end;
        continue;
      }
      if (j < n && src[j] == '"' && (word == "u8" || word == "u" || word == "U" || word == "L")) {
        size_t end = consume_string(j);
        toks.push_back({Token::kLiteral, std::string(src.substr(i, end - i)), i});
        i = end;
        continue;
      }
      if (j < n && src[j] == '\'' && (word == "u8" || word == "u" || word == "U" || word == "L")) {
        size_t end = consume_char(j);
        toks.push_back({Token::kLiteral, std::string(src.substr(i, end - i)), i});
        i = end;
        continue;
      }
      toks.push_back({Token::kIdent, std::string(word), i});
      i = j;
      continue;
    }
    if (c >= '0' && c <= '9') {
      size_t j = i + 1;
      while (j < n) {
        char d = src[j];
        if (detail::ident_char(d) || d == '.') {
          ++j;
        } else if (d == '\'' && j + 1 < n && detail::ident_char(src[j + 1])) {
          j += 2;  // digit separator
        } else if ((d == '+' || d == '-') && (src[j - 1] == 'e' || src[j - 1] == 'E' ||
                                              src[j - 1] == 'p' || src[j - 1] == 'P')) {
          ++j;
        } else {
          break;
        }
      }
      toks.push_back({Token::kNumber, std::string(src.substr(i, j - i)), i});
      i = j;
      continue;
    }
    // punctuation; merge '::', '...', '->'
    if (c == ':' && i + 1 < n && src[i + 1] == ':') {
      toks.push_back({Token::kPunct, "::", i});
      i += 2;
      continue;
    }
    if (c == '.' && i + 2 < n && src[i + 1] == '.' && src[i + 2] == '.') {
      toks.push_back({Token::kPunct, "...", i});
      i += 3;
      continue;
    }
    if (c == '-' && i + 1 < n && src[i + 1] == '>') {
      toks.push_back({Token::kPunct, "->", i});
      i += 2;
      continue;
    }
    toks.push_back({Token::kPunct, std::string(1, c), i});
    ++i;
  }
  return toks;
}

struct ScannedCatch {
  size_t kw_offset = 0;
  size_t block_open = 0;
  size_t block_close = 0;
  bool catch_all = false;
  std::string declared_type;     // lexical spelling; "<root>" for catch(...)
  size_t type_begin = 0;         // byte range of the type tokens, for rewriting
  size_t type_end = 0;
};

struct ScannedTry {
  size_t kw_offset = 0;
  size_t block_open = 0;
  size_t block_close = 0;
  std::string enclosing_function;
  std::vector<ScannedCatch> catches;
};

namespace detail {

inline const std::unordered_set<std::string>& name_reject_set() {
  static const std::unordered_set<std::string> s = {
      "if",      "while",  "for",       "switch",        "catch",  "return",
      "sizeof",  "alignof", "decltype", "static_assert", "throw",  "new",
      "delete",  "alignas", "typeid",   "noexcept",      "assert", "co_await",
      "co_return", "co_yield", "constexpr", "consteval", "constinit", "defined"};
  return s;
}

class TryScanner {
 public:
  TryScanner(std::string_view src, std::string file)
      : file_(std::move(file)), lines_(src), toks_(lex_cpp(src, file_)) {}

  std::vector<ScannedTry> run() {
    parse_region(/*expect_close=*/false, 0);
    if (i_ < toks_.size()) fail(toks_[i_].offset, "unmatched '}'");
    std::sort(tries_.begin(), tries_.end(),
              [](const ScannedTry& a, const ScannedTry& b) { return a.kw_offset < b.kw_offset; });
    return std::move(tries_);
  }

 private:
  struct Frame {
    enum Kind { kNamespace, kType, kFunction } kind;
    std::string name;
  };

  [[noreturn]] void fail(size_t off, const std::string& msg) {
    auto [l, c] = lines_.locate(off);
    throw parse_error(file_, l, c, msg);
  }

  const Token& cur() const { return toks_[i_]; }
  bool done() const { return i_ >= toks_.size(); }

  void expect_punct(const char* p, const char* what) {
    if (done()) {
      size_t off = toks_.empty() ? 0 : toks_.back().end();
      fail(off, std::string("unexpected end of file, expected ") + what);
    }
    if (!(cur().kind == Token::kPunct && cur().is(p))) fail(cur().offset, std::string("expected ") + what);
  }

  // Consumes a brace-enclosed region body. On entry i_ points just past the
  // opening '{' (or at file start). Returns with i_ at the matching '}' which
  // the caller consumes; at top level returns at EOF.
  void parse_region(bool expect_close, size_t open_off) {
    std::vector<Token> recent;
    while (true) {
      if (done()) {
        if (expect_close) fail(open_off, "unbalanced braces: '{' never closed");
        return;
      }
      const Token& t = cur();
      if (t.kind == Token::kPunct && t.is("}")) {
        if (!expect_close) fail(t.offset, "unmatched '}'");
        return;
      }
      if (t.kind == Token::kPunct && t.is("{")) {
        auto frame = classify_open_brace(recent);
        if (frame) ctx_.push_back(*frame);
        ++i_;
        parse_region(true, t.offset);
        ++i_;  // consume '}'
        if (frame) ctx_.pop_back();
        recent.clear();
        continue;
      }
      if (t.kind == Token::kIdent && t.is("try")) {
        parse_try_statement();
        recent.clear();
        continue;
      }
      if (t.kind == Token::kPunct && t.is(";")) {
        recent.clear();
        ++i_;
        continue;
      }
      recent.push_back(t);
      if (recent.size() > 64) recent.erase(recent.begin());
      ++i_;
    }
  }

  void parse_try_statement() {
    ScannedTry st;
    st.kw_offset = cur().offset;
    st.enclosing_function = current_function();
    ++i_;
    // Tolerate function-try-block ctor init lists: skip to the '{' at paren depth 0.
    int pdepth = 0;
    while (!done() && !(pdepth == 0 && cur().kind == Token::kPunct && cur().is("{"))) {
      if (cur().kind == Token::kPunct && cur().is("(")) ++pdepth;
      if (cur().kind == Token::kPunct && cur().is(")")) --pdepth;
      if (cur().kind == Token::kPunct && (cur().is(";") || cur().is("}"))) {
        fail(st.kw_offset, "'try' without block");
      }
      ++i_;
    }
    if (done()) fail(st.kw_offset, "'try' without block");
    st.block_open = cur().offset;
    ++i_;
    parse_region(true, st.block_open);
    st.block_close = cur().offset;
    ++i_;

    while (!done() && cur().kind == Token::kIdent && cur().is("catch")) {
      st.catches.push_back(parse_catch_clause());
    }
    if (st.catches.empty()) fail(st.kw_offset, "'try' without catch clause");
    tries_.push_back(std::move(st));
  }

  ScannedCatch parse_catch_clause() {
    ScannedCatch cc;
    cc.kw_offset = cur().offset;
    ++i_;
    expect_punct("(", "'(' after catch");
    ++i_;
    std::vector<Token> param;
    int depth = 1;
    while (!done()) {
      if (cur().kind == Token::kPunct && cur().is("(")) ++depth;
      if (cur().kind == Token::kPunct && cur().is(")")) {
        --depth;
        if (depth == 0) break;
      }
      param.push_back(cur());
      ++i_;
    }
    if (done()) fail(cc.kw_offset, "unterminated catch parameter");
    ++i_;  // consume ')'
    parse_catch_param(cc, param);
    expect_punct("{", "'{' after catch clause");
    cc.block_open = cur().offset;
    ++i_;
    parse_region(true, cc.block_open);
    cc.block_close = cur().offset;
    ++i_;
    return cc;
  }

  void parse_catch_param(ScannedCatch& cc, const std::vector<Token>& param) {
    if (param.empty()) fail(cc.kw_offset, "empty catch parameter");
    if (param.size() == 1 && param[0].is("...")) {
      cc.catch_all = true;
      cc.declared_type = "<root>";
      return;
    }
    size_t p = 0;
    auto skip_quals = [&] {
      while (p < param.size() &&
             (param[p].is("const") || param[p].is("volatile") || param[p].is("struct") ||
              param[p].is("class") || param[p].is("enum"))) {
        ++p;
      }
    };
    skip_quals();
    if (p >= param.size()) fail(cc.kw_offset, "unsupported catch parameter");
    // qualified-id: [::] ident (:: ident)*
    size_t type_first = p;
    if (param[p].is("::")) ++p;
    if (p >= param.size() || param[p].kind != Token::kIdent) {
      fail(param[type_first].offset, "unsupported catch parameter");
    }
    std::string type = param[type_first].is("::") ? "::" : "";
    type += param[p].text;
    size_t type_last = p;
    ++p;
    while (p + 1 < param.size() && param[p].is("::") && param[p + 1].kind == Token::kIdent) {
      type += "::" + param[p + 1].text;
      type_last = p + 1;
      p += 2;
    }
    cc.declared_type = type;
    cc.type_begin = param[type_first].offset;
    cc.type_end = param[type_last].end();
    // remainder: cv, &, &&, *s, optional binding name
    while (p < param.size() &&
           (param[p].is("const") || param[p].is("volatile") || param[p].is("&") ||
            param[p].is("&&") || param[p].is("*"))) {
      ++p;
    }
    if (p < param.size() && param[p].kind == Token::kIdent) ++p;
    if (p != param.size()) fail(param[p].offset, "unsupported catch parameter");
  }

  std::string current_function() const {
    std::vector<std::string> qual;
    std::string fn;
    for (const auto& f : ctx_) {
      if (f.kind == Frame::kFunction) {
        fn = f.name;
        std::string prefix = join(qual, "::");
        // out-of-line definitions are already qualified at the definition site
        if (!prefix.empty() && fn.find("::") == std::string::npos) fn = prefix + "::" + fn;
      } else if (!f.name.empty()) {
        qual.push_back(f.name);
      }
    }
    return fn;
  }

  std::optional<Frame> classify_open_brace(const std::vector<Token>& recent) const {
    if (recent.empty()) return std::nullopt;
    if (auto f = classify_function(recent)) return f;
    // namespace [a[::b]] {
    for (size_t k = 0; k < recent.size(); ++k) {
      if (recent[k].is("namespace") && recent[k].kind == Token::kIdent) {
        std::string name;
        for (size_t j = k + 1; j < recent.size(); ++j) {
          if (recent[j].kind == Token::kIdent) {
            if (!name.empty()) name += "::";
            name += recent[j].text;
          } else if (!recent[j].is("::")) {
            return std::nullopt;  // e.g. attribute; treat as plain block
          }
        }
        return Frame{Frame::kNamespace, name};
      }
      if (recent[k].kind != Token::kIdent || recent[k].is("inline")) continue;
      break;
    }
    // class/struct/union/enum [class] Name ... { — last keyword wins so that
    // "template <class T> struct Foo" names Foo, not the template parameter.
    for (size_t k = recent.size(); k > 0; --k) {
      const Token& t = recent[k - 1];
      if (t.kind == Token::kIdent &&
          (t.is("class") || t.is("struct") || t.is("union") || t.is("enum"))) {
        for (size_t j = k; j < recent.size(); ++j) {
          if (recent[j].is(":")) break;  // base clause; name (if any) comes before it
          if (recent[j].kind == Token::kIdent && !recent[j].is("final") &&
              !recent[j].is("alignas")) {
            return Frame{Frame::kType, recent[j].text};
          }
        }
        return Frame{Frame::kType, ""};
      }
    }
    return std::nullopt;
  }

  // Function header heuristic: "... name ( params ) [specifiers] [: init-list] {"
  std::optional<Frame> classify_function(const std::vector<Token>& recent) const {
    size_t end = recent.size();
    // skip trailing specifier tokens back to a ')'
    while (end > 0) {
      const Token& t = recent[end - 1];
      if (t.kind == Token::kPunct && t.is(")")) break;
      bool ok_post = (t.kind == Token::kIdent && !t.is("return") && !t.is("else") && !t.is("do")) ||
                     (t.kind == Token::kPunct &&
                      (t.is("&") || t.is("&&") || t.is("*") || t.is("::") || t.is("<") ||
                       t.is(">") || t.is("->")));
      if (!ok_post) return std::nullopt;
      --end;
    }
    if (end == 0) return std::nullopt;

    while (true) {
      // match ')' back to its '('
      int depth = 0;
      size_t pos = end;
      do {
        if (pos == 0) return std::nullopt;
        --pos;
        if (recent[pos].is(")")) ++depth;
        if (recent[pos].is("(")) --depth;
      } while (depth > 0);
      if (pos == 0) return std::nullopt;

      // name before '('
      size_t name_end = pos;  // exclusive
      size_t name_begin = name_end;
      if (recent[name_end - 1].kind == Token::kIdent) {
        name_begin = name_end - 1;
      } else if (recent[name_end - 1].kind == Token::kPunct && name_end >= 2 &&
                 recent[name_end - 2].is("operator")) {
        name_begin = name_end - 2;
      } else {
        return std::nullopt;
      }
      while (name_begin >= 2 && recent[name_begin - 1].is("::") &&
             recent[name_begin - 2].kind == Token::kIdent) {
        name_begin -= 2;
      }
      std::string name;
      for (size_t k = name_begin; k < name_end; ++k) name += recent[k].text;
      if (name_reject_set().count(recent[name_begin].text)) return std::nullopt;

      if (name_begin == 0) return Frame{Frame::kFunction, name};
      const Token& sep = recent[name_begin - 1];
      if (sep.is(":") || sep.is(",")) {
        // ctor init-list item; keep walking toward the parameter list
        end = name_begin - 1;
        if (end == 0 || !recent[end - 1].is(")")) return std::nullopt;
        continue;
      }
      if (sep.is(".") || sep.is("->") || sep.is("(") || sep.is("=")) return std::nullopt;
      return Frame{Frame::kFunction, name};
    }
  }

  std::string file_;
  LineIndex lines_;
  std::vector<Token> toks_;
  size_t i_ = 0;
  std::vector<Frame> ctx_;
  std::vector<ScannedTry> tries_;
};

}  // namespace detail

inline std::vector<ScannedTry> scan_try_statements(std::string_view src, const std::string& file) {
  return detail::TryScanner(src, file).run();
}

}  // namespace resil
