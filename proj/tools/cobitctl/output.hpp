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

// Table and file output shared by the subcommands. Everything here is
// deterministic: fixed precision, no timestamps, no locale.

#pragma once

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace cobitctl {

enum class Format { kCsv, kTxt };

Format parse_format(const std::string& text);

std::string fixed(double value, int precision = 6);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  void write(std::ostream& os, Format format) const;
};

// Destination chosen by --out: a file, or stdout when the path is empty.
// Notes are key/value summaries: part of the body in txt, on stderr in csv so
// the data file stays a single clean table.
class Sink {
 public:
  Sink(const std::string& path, Format format);

  std::ostream& stream();
  Format format() const { return format_; }
  void table(const Table& t);
  void note(const std::string& key, const std::string& value);

 private:
  std::ofstream file_;
  bool to_file_ = false;
  Format format_;
};

}  // namespace cobitctl
