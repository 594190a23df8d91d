#include "src/quantity.hpp"

int checked_parse(const std::string& text) {
  if (text.empty()) throw FormatError("empty quantity");
  long value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw FormatError("bad digit in quantity: " + text);
    value = value * 10 + (c - '0');
    if (value > 99999) throw BoundsError("quantity too large: " + text);
  }
  return static_cast<int>(value);
}

int parse_quantity(const std::string& text) {
  try {
    return checked_parse(text);
  } catch (const FormatError&) {
    return -1;
  } catch (const BoundsError&) {
    return 9999;
  }
}
