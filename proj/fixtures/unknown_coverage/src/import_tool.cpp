#include "src/import_tool.hpp"

std::string ImportTool::decode_legacy(const std::string& blob) {
  if (blob.rfind("v1:", 0) != 0) throw LegacyFormatError("not a legacy blob");
  return blob.substr(3);
}

int ImportTool::scan_rows(const std::string& csv) {
  if (csv.find('\0') != std::string::npos) throw RowCountError("binary junk in csv");
  if (csv.empty()) return 0;
  int rows = 1;
  for (char c : csv) rows += (c == '\n');
  return rows;
}

std::string ImportTool::first_line_checked(const std::string& csv) {
  if (csv.empty()) throw HeaderError("no header line");
  return csv.substr(0, csv.find('\n'));
}

std::string ImportTool::parse_legacy(const std::string& blob) {
  try {
    return decode_legacy(blob);
  } catch (const LegacyFormatError&) {
    return "<legacy-error>";
  }
}

int ImportTool::count_rows(const std::string& csv) {
  try {
    last_good_ = scan_rows(csv);
  } catch (const RowCountError&) {
    // keep the previous good count
  }
  return last_good_;
}

std::string ImportTool::header_or(const std::string& csv, const std::string& fallback) {
  try {
    return first_line_checked(csv);
  } catch (const HeaderError&) {
    return fallback;
  }
}
