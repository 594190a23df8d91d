#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

struct ParseFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexCorrupt : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LockBusy : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingField : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DocumentIndexer {
 public:
  DocumentIndexer();
  bool add(const std::string& doc);
  int load_all(const std::vector<std::string>& blobs);
  std::string field_of(const std::string& doc, const std::string& key);
  std::string field_or_empty(const std::string& doc, const std::string& key);
  void hold_lock() { lock_held_ = true; }
  int stored() const { return stored_; }
  int repairs() const { return repairs_; }

 private:
  void parse_checked(const std::string& doc);
  int store_blob(const std::string& blob);
  void repair() { ++repairs_; }
  std::string lookup_field(const std::string& doc, const std::string& key);
  std::string lookup_field_unlocked(const std::string& doc, const std::string& key);

  std::map<std::string, std::map<std::string, std::string>> fields_;
  bool lock_held_ = false;
  int stored_ = 0;
  int repairs_ = 0;
};
