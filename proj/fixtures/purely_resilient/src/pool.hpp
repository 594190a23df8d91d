#pragma once

#include <stdexcept>

struct NoIdleConnection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConnectionPool {
 public:
  explicit ConnectionPool(int idle) : idle_(idle) {}
  int lease();
  bool valid(int conn) const { return conn > 0; }

 private:
  int reuse_idle();
  int open_fresh();
  int idle_;
  int fresh_ = 0;
};
