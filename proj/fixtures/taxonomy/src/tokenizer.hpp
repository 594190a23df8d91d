#pragma once

#include <stdexcept>
#include <string>

struct TokenError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Tokenizer {
 public:
  int count_strict(const std::string& text) const;
  int count_or_zero(const std::string& text) const;
};
