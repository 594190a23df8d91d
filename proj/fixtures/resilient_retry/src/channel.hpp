#pragma once

#include <stdexcept>
#include <string>
#include <vector>

struct ChannelClosed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Channel {
 public:
  void send(const std::string& message);
  void close() { open_ = false; }
  bool is_open() const { return open_; }
  const std::vector<std::string>& sent() const { return log_; }

 private:
  void push(const std::string& message);
  void reopen() { open_ = true; }
  bool open_ = true;
  std::vector<std::string> log_;
};
