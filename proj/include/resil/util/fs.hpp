#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace resil {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const fs::path& p, std::string_view content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + p.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write: " + p.string());
}

// Relative paths (forward slashes) of all regular files under root, sorted.
inline std::vector<std::string> list_files(const fs::path& root) {
  std::vector<std::string> out;
  if (!fs::exists(root)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    out.push_back(fs::relative(entry.path(), root).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

inline bool path_starts_with(const fs::path& p, const fs::path& prefix) {
  auto pit = p.begin();
  for (auto sit = prefix.begin(); sit != prefix.end(); ++sit, ++pit) {
    if (pit == p.end() || *pit != *sit) return false;
  }
  return true;
}

}  // namespace detail

// Copies `from` into `to`, never descending into `to` itself (so a destination
// nested inside the source cannot recurse) nor into any of `exclude`.
inline void copy_tree(const fs::path& from, const fs::path& to,
                      const std::vector<fs::path>& exclude = {}) {
  std::error_code ec;
  std::vector<fs::path> skip{fs::weakly_canonical(to, ec)};
  for (const auto& e : exclude) {
    fs::path norm = fs::weakly_canonical(e, ec);
    if (!ec) skip.push_back(norm);
  }
  fs::create_directories(to);
  for (fs::recursive_directory_iterator it(from), end; it != end; ++it) {
    fs::path norm = fs::weakly_canonical(it->path(), ec);
    bool skipped = false;
    for (const auto& s : skip) {
      if (!ec && detail::path_starts_with(norm, s)) skipped = true;
    }
    if (skipped) {
      if (it->is_directory()) it.disable_recursion_pending();
      continue;
    }
    fs::path dest = to / fs::relative(it->path(), from);
    if (it->is_symlink()) {
      fs::remove(dest, ec);
      fs::copy_symlink(fs::read_symlink(it->path()), dest);
    } else if (it->is_directory()) {
      fs::create_directories(dest);
    } else {
      fs::copy_file(it->path(), dest, fs::copy_options::overwrite_existing);
    }
  }
}

inline void remove_tree(const fs::path& p) {
  std::error_code ec;
  fs::remove_all(p, ec);
}

}  // namespace resil
