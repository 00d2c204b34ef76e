// Copyright 2026 The Cobit Authors
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

#include "output.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>

#include "commands.hpp"

namespace cobitctl {

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::kCsv;
  if (text == "txt") return Format::kTxt;
  throw UsageError("format must be csv or txt, got '" + text + "'");
}

std::string fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

void Table::write(std::ostream& os, Format format) const {
  if (format == Format::kCsv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return;
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], r[i].size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += "  ";
      out += cells[i];
      if (i + 1 < cells.size()) out.append(width[i] - cells[i].size(), ' ');
    }
    os << out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

Sink::Sink(const std::string& path, Format format) : format_(format) {
  if (path.empty() || path == "-") return;
  file_.open(path, std::ios::binary | std::ios::trunc);
  if (!file_) throw UsageError("cannot open output file '" + path + "'");
  to_file_ = true;
}

std::ostream& Sink::stream() { return to_file_ ? static_cast<std::ostream&>(file_) : std::cout; }

void Sink::table(const Table& t) { t.write(stream(), format_); }

void Sink::note(const std::string& key, const std::string& value) {
  if (format_ == Format::kTxt) {
    stream() << key << ": " << value << '\n';
  } else {
    std::cerr << key << ": " << value << '\n';
  }
}

}  // namespace cobitctl
