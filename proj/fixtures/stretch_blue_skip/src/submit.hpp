#pragma once

#include <stdexcept>
#include <string>

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StorageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SubmitService {
 public:
  explicit SubmitService(bool primary_up) : primary_up_(primary_up) {}
  std::string submit(const std::string& field);

 private:
  void validate(const std::string& field);
  std::string store_primary(const std::string& field);
  std::string store_backup(const std::string& field);
  bool primary_up_;
};
