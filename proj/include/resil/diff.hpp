#pragma once

// Unified diff between two text buffers (LCS line diff, 3 lines of context).
// Output is consumable by patch(1)/git apply; inputs here are single files so
// labels carry the a/ b/ prefixes the caller wants.

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "resil/util/strings.hpp"

namespace resil {

namespace detail {

enum class DiffOp { kKeep, kDelete, kInsert };

struct DiffStep {
  DiffOp op;
  size_t a_idx;  // valid for keep/delete
  size_t b_idx;  // valid for keep/insert
};

inline std::vector<DiffStep> diff_steps(const std::vector<std::string>& a,
                                        const std::vector<std::string>& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = n; i-- > 0;) {
    for (size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1
                               : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  std::vector<DiffStep> steps;
  size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      steps.push_back({DiffOp::kKeep, i++, j++});
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      steps.push_back({DiffOp::kDelete, i++, 0});
    } else {
      steps.push_back({DiffOp::kInsert, 0, j++});
    }
  }
  while (i < n) steps.push_back({DiffOp::kDelete, i++, 0});
  while (j < m) steps.push_back({DiffOp::kInsert, 0, j++});
  return steps;
}

}  // namespace detail

inline std::string unified_diff(const std::string& a_text, const std::string& b_text,
                                const std::string& a_label, const std::string& b_label,
                                int context = 3) {
  if (a_text == b_text) return "";
  std::vector<std::string> a = split(a_text, '\n');
  std::vector<std::string> b = split(b_text, '\n');
  // split() yields a trailing empty element for newline-terminated text
  if (!a.empty() && a.back().empty()) a.pop_back();
  if (!b.empty() && b.back().empty()) b.pop_back();

  auto steps = detail::diff_steps(a, b);

  struct Hunk {
    size_t first_step, last_step;  // inclusive
  };
  std::vector<Hunk> hunks;
  for (size_t k = 0; k < steps.size(); ++k) {
    if (steps[k].op == detail::DiffOp::kKeep) continue;
    if (!hunks.empty()) {
      size_t gap = k - hunks.back().last_step - 1;
      if (gap <= static_cast<size_t>(2 * context)) {
        hunks.back().last_step = k;
        continue;
      }
    }
    hunks.push_back({k, k});
  }

  std::string out = "--- " + a_label + "\n+++ " + b_label + "\n";
  for (const auto& h : hunks) {
    size_t begin = h.first_step > static_cast<size_t>(context)
                       ? h.first_step - static_cast<size_t>(context)
                       : 0;
    size_t end = std::min(steps.size() - 1, h.last_step + static_cast<size_t>(context));
    size_t a_start = 0, b_start = 0;
    // line numbers (0-based) at the hunk's first step
    {
      size_t ai = 0, bi = 0;
      for (size_t k = 0; k < begin; ++k) {
        if (steps[k].op != detail::DiffOp::kInsert) ++ai;
        if (steps[k].op != detail::DiffOp::kDelete) ++bi;
      }
      a_start = ai;
      b_start = bi;
    }
    size_t a_len = 0, b_len = 0;
    std::string body;
    for (size_t k = begin; k <= end; ++k) {
      switch (steps[k].op) {
        case detail::DiffOp::kKeep:
          body += " " + a[steps[k].a_idx] + "\n";
          ++a_len;
          ++b_len;
          break;
        case detail::DiffOp::kDelete:
          body += "-" + a[steps[k].a_idx] + "\n";
          ++a_len;
          break;
        case detail::DiffOp::kInsert:
          body += "+" + b[steps[k].b_idx] + "\n";
          ++b_len;
          break;
      }
    }
    out += "@@ -" + std::to_string(a_len == 0 ? a_start : a_start + 1) + "," +
           std::to_string(a_len) + " +" + std::to_string(b_len == 0 ? b_start : b_start + 1) +
           "," + std::to_string(b_len) + " @@\n";
    out += body;
  }
  return out;
}

}  // namespace resil
