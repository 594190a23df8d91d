#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace resil {

namespace detail {

inline bool glob_match_impl(std::string_view pat, size_t pi, std::string_view str, size_t si) {
  while (pi < pat.size()) {
    char pc = pat[pi];
    if (pc == '*') {
      bool dbl = pi + 1 < pat.size() && pat[pi + 1] == '*';
      size_t after = pi + (dbl ? 2 : 1);
      // "**/" may also match zero path segments
      if (dbl && after < pat.size() && pat[after] == '/') {
        if (glob_match_impl(pat, after + 1, str, si)) return true;
      }
      for (size_t k = si; k <= str.size(); ++k) {
        if (glob_match_impl(pat, after, str, k)) return true;
        if (k < str.size() && !dbl && str[k] == '/') break;
      }
      return false;
    }
    if (si >= str.size()) return false;
    if (pc == '?') {
      if (str[si] == '/') return false;
    } else if (pc != str[si]) {
      return false;
    }
    ++pi;
    ++si;
  }
  return si == str.size();
}

}  // namespace detail

// Matches a relative path (forward slashes) against a glob pattern.
// '*' and '?' do not cross '/' boundaries; '**' does.
inline bool glob_match(std::string_view pattern, std::string_view path) {
  return detail::glob_match_impl(pattern, 0, path, 0);
}

inline bool glob_match_any(const std::vector<std::string>& patterns, std::string_view path) {
  for (const auto& p : patterns) {
    if (glob_match(p, path)) return true;
  }
  return false;
}

}  // namespace resil
