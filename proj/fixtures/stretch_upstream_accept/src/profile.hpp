#pragma once

#include <map>
#include <stdexcept>
#include <string>

struct ProfileMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ProfileCorrupt : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ProfileStore {
 public:
  void save(const std::string& key, const std::string& value) { disk_[key] = value; }
  void poison(const std::string& key) { disk_[key] = "\x01garbled"; }
  std::string read_profile(const std::string& key);
  std::string load_profile(const std::string& key);

 private:
  std::string raw_load(const std::string& key);
  std::map<std::string, std::string> disk_;
};
