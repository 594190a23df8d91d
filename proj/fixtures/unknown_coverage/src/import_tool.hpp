#pragma once

#include <stdexcept>
#include <string>

struct LegacyFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RowCountError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HeaderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ImportTool {
 public:
  std::string parse_legacy(const std::string& blob);
  int count_rows(const std::string& csv);
  std::string header_or(const std::string& csv, const std::string& fallback);

 private:
  std::string decode_legacy(const std::string& blob);
  int scan_rows(const std::string& csv);
  std::string first_line_checked(const std::string& csv);
  int last_good_ = 0;
};
