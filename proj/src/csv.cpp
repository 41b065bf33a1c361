#include "prodrank/csv.hpp"

#include <fstream>

#include "prodrank/errors.hpp"

namespace prodrank::csv {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& fields, char sep) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += fields[i];
  }
  return out;
}

std::vector<Row> read_file(const std::string& path,
                           const std::vector<std::string>& expected_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path);

  std::vector<Row> rows;
  std::string line;
  long lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line, ',');
    if (!saw_header) {
      if (fields != expected_header) {
        fail(ErrorKind::Parse, path + ":" + std::to_string(lineno) +
                                   ": expected header '" +
                                   join(expected_header, ',') + "'");
      }
      saw_header = true;
      continue;
    }
    if (fields.size() != expected_header.size()) {
      fail(ErrorKind::Parse,
           path + ":" + std::to_string(lineno) + ": expected " +
               std::to_string(expected_header.size()) + " fields, got " +
               std::to_string(fields.size()));
    }
    rows.push_back(Row{lineno, std::move(fields)});
  }
  if (!saw_header) {
    fail(ErrorKind::Parse, path + ": missing header row");
  }
  return rows;
}

}  // namespace prodrank::csv
