#pragma once

#include <exception>
#include <string>

struct StoreError : std::exception {
  StoreError(const std::string& message, int code) : message_(message), code_(code) {}
  explicit StoreError(const char* message) : message_(message), code_(0) {}
  const char* what() const noexcept override { return message_.c_str(); }
  int code() const { return code_; }

 private:
  std::string message_;
  int code_;
};

class MemoryStore {
 public:
  void start() { running_ = true; }
  void corrupt() { corrupted_ = true; }
  void stop();
  bool stopped() const { return stopped_; }

 private:
  void halt_engine();
  bool running_ = false;
  bool corrupted_ = false;
  bool stopped_ = false;
};
