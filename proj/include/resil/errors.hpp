#pragma once

#include <stdexcept>
#include <string>

namespace resil {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Source could not be scanned into a brace/try structure.
struct parse_error : error {
  parse_error(const std::string& file, int line, int col, const std::string& what)
      : error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        file(file),
        line(line),
        col(col) {}
  std::string file;
  int line;
  int col;
};

// Instrumentation refused (already-instrumented tree, stale inventory, ...).
struct instrument_error : error {
  using error::error;
};

// Subject process / suite level failure that aborts the pipeline.
struct pipeline_error : error {
  using error::error;
};

}  // namespace resil
