// Copyright 2026 The DAME Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DAME_CSV_HPP
#define DAME_CSV_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dame {

// 17 significant digits: enough for exact double round-trip.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal CSV document: one header, homogeneous string rows, optional
// leading '#' comment lines. Values never contain commas or quotes.
class CsvDocument {
 public:
  std::vector<std::string> comments;  // written verbatim, one per line
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
      throw std::invalid_argument("CsvDocument: row width != header width");
    rows.push_back(std::move(row));
  }

  std::string to_string() const {
    std::ostringstream out;
    for (const auto& c : comments) out << c << '\n';
    out << join(header) << '\n';
    for (const auto& r : rows) out << join(r) << '\n';
    return out.str();
  }

  // Writes via a temp file in the same directory followed by rename, so a
  // crash never leaves a truncated file at `path`.
  void write_atomic(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open '" + tmp + "'");
      out << to_string();
      if (!out.flush())
        throw std::runtime_error("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
      std::remove(tmp.c_str());
      throw std::runtime_error("rename to '" + path + "' failed");
    }
  }

  static CsvDocument parse(const std::string& text) {
    CsvDocument doc;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == '#') {
        doc.comments.push_back(line);
        continue;
      }
      std::vector<std::string> fields = split(line);
      if (!have_header) {
        doc.header = std::move(fields);
        have_header = true;
      } else {
        doc.add_row(std::move(fields));
      }
    }
    if (!have_header) throw std::invalid_argument("CSV has no header line");
    return doc;
  }

  static CsvDocument read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

 private:
  static std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    return out;
  }

  static std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    fields.push_back(cur);
    return fields;
  }
};

}  // namespace dame

#endif  // DAME_CSV_HPP
