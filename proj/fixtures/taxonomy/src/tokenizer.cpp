#include "src/tokenizer.hpp"

int Tokenizer::count_strict(const std::string& text) const {
  if (text.find('!') != std::string::npos) throw TokenError("illegal character in: " + text);
  if (text.empty()) return 0;
  int n = 1;
  for (char c : text) n += (c == ' ');
  return n;
}

int Tokenizer::count_or_zero(const std::string& text) const {
  try {
    return count_strict(text);
  } catch (const TokenError&) {
    return 0;
  }
}
