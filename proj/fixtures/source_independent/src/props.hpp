#pragma once

#include <map>
#include <stdexcept>
#include <string>

struct PropertyMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class PropertyStore {
 public:
  void put(const std::string& key, const std::string& value) { values_[key] = value; }
  std::string raw(const std::string& key) const;
  std::string lookup(const std::string& key, const std::string& fallback) const;

 private:
  std::map<std::string, std::string> values_;
};
