#include "src/cache_gateway.hpp"

std::string CacheBackend::get(const std::string& key) const {
  if (!enabled_) throw CacheMiss("cache disabled");
  auto it = entries_.find(key);
  if (it == entries_.end()) throw CacheMiss("no entry: " + key);
  return it->second;
}

std::string CacheGateway::fetch(const std::string& key) {
  try {
    return backend_.get(key);
  } catch (const CacheMiss& e) {
    // A disabled cache is an expected state; anything else is a hard failure.
    if (std::string(e.what()) == "cache disabled") return "uncached";
    throw CacheUnavailable(e.what());
  }
}
