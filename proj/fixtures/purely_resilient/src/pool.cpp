#include "src/pool.hpp"

int ConnectionPool::reuse_idle() {
  if (idle_ == 0) throw NoIdleConnection("no idle connection");
  --idle_;
  return 100 + idle_;
}

int ConnectionPool::open_fresh() { return 500 + fresh_++; }

int ConnectionPool::lease() {
  try {
    return reuse_idle();
  } catch (const NoIdleConnection&) {
    return open_fresh();
  }
}
