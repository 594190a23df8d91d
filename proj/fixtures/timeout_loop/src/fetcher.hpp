#pragma once

#include <stdexcept>
#include <string>

struct FetchFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fetch_once(const std::string& url);
std::string fetch_with_retry(const std::string& url);
