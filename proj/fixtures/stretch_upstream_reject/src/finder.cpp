#include "src/finder.hpp"

std::string RecordStore::lookup_unique(const std::string& prefix) {
  if (!open_) throw StoreClosed("record store is closed");
  std::string found;
  int n = 0;
  for (const auto& item : items_) {
    if (item.rfind(prefix, 0) == 0) {
      found = item;
      ++n;
    }
  }
  if (n > 1) throw NotUnique("prefix matches " + std::to_string(n) + " records");
  return found;
}

std::string RecordStore::first_match(const std::string& prefix) {
  if (!open_) return "";
  for (const auto& item : items_) {
    if (item.rfind(prefix, 0) == 0) return item;
  }
  return "";
}

std::string RecordStore::find_one(const std::string& prefix) {
  try {
    return lookup_unique(prefix);
  } catch (const NotUnique&) {
    return first_match(prefix);
  }
}

std::string RecordStore::safe_find(const std::string& prefix) {
  try {
    return find_one(prefix);
  } catch (const StoreClosed&) {
    reopen();
    return find_one(prefix);
  }
}
