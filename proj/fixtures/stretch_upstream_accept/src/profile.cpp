#include "src/profile.hpp"

std::string ProfileStore::raw_load(const std::string& key) {
  auto it = disk_.find(key);
  if (it == disk_.end()) throw ProfileMissing("no profile for " + key);
  if (!it->second.empty() && it->second[0] == '\x01') {
    throw ProfileCorrupt("profile blob garbled for " + key);
  }
  return it->second;
}

std::string ProfileStore::read_profile(const std::string& key) {
  try {
    return raw_load(key);
  } catch (const ProfileMissing&) {
    return "default";
  }
}

std::string ProfileStore::load_profile(const std::string& key) {
  try {
    return read_profile(key);
  } catch (const ProfileCorrupt&) {
    return "default";
  }
}
