#pragma once

#include <stdexcept>
#include <string>
#include <vector>

struct NotUnique : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StoreClosed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class RecordStore {
 public:
  RecordStore(std::vector<std::string> items, bool open) : items_(std::move(items)), open_(open) {}
  std::string find_one(const std::string& prefix);
  std::string safe_find(const std::string& prefix);

 private:
  std::string lookup_unique(const std::string& prefix);
  std::string first_match(const std::string& prefix);
  void reopen() { open_ = true; }
  std::vector<std::string> items_;
  bool open_;
};
