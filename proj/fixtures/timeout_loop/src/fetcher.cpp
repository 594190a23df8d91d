#include "src/fetcher.hpp"

#include <chrono>
#include <thread>

namespace {
bool transient_outage_hit = false;

void backoff() { std::this_thread::sleep_for(std::chrono::milliseconds(10)); }
}  // namespace

std::string fetch_once(const std::string& url) {
  if (url == "flaky" && !transient_outage_hit) {
    transient_outage_hit = true;
    throw FetchFailed("transient outage: " + url);
  }
  return "payload:" + url;
}

std::string fetch_with_retry(const std::string& url) {
  for (;;) {
    try {
      return fetch_once(url);
    } catch (const FetchFailed&) {
      backoff();
    }
  }
}
