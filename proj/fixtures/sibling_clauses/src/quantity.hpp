#pragma once

#include <stdexcept>
#include <string>

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int checked_parse(const std::string& text);
int parse_quantity(const std::string& text);
