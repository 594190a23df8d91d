#include "src/props.hpp"

std::string PropertyStore::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw PropertyMissing("unset property: " + key);
  return it->second;
}

std::string PropertyStore::lookup(const std::string& key, const std::string& fallback) const {
  try {
    return raw(key);
  } catch (const PropertyMissing&) {
    return fallback;
  }
}
