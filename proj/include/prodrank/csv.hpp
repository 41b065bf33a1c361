#pragma once

#include <string>
#include <vector>

namespace prodrank::csv {

struct Row {
  long line = 0;  // 1-based line number in the source file
  std::vector<std::string> fields;
};

std::vector<std::string> split(const std::string& line, char sep);
std::string join(const std::vector<std::string>& fields, char sep);

// Strict reader for the corpus formats: verbatim comma-separated fields,
// mandatory header row, no quoting. Blank lines are skipped. Throws
// ErrorKind::Io when the file cannot be opened and ErrorKind::Parse on a
// wrong header or field count; parse messages carry file:line.
std::vector<Row> read_file(const std::string& path,
                           const std::vector<std::string>& expected_header);

}  // namespace prodrank::csv
