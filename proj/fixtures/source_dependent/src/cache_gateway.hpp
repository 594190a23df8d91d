#pragma once

#include <map>
#include <stdexcept>
#include <string>

struct CacheMiss : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CacheUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class CacheBackend {
 public:
  CacheBackend(bool enabled) : enabled_(enabled) {}
  void store(const std::string& key, const std::string& value) { entries_[key] = value; }
  std::string get(const std::string& key) const;

 private:
  bool enabled_;
  std::map<std::string, std::string> entries_;
};

class CacheGateway {
 public:
  explicit CacheGateway(CacheBackend backend) : backend_(std::move(backend)) {}
  std::string fetch(const std::string& key);

 private:
  CacheBackend backend_;
};
