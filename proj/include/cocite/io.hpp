// Copyright 2026 The Cocite Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small text-format helpers shared by every reader and writer.

#ifndef COCITE_IO_HPP_
#define COCITE_IO_HPP_

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace cocite {

std::vector<std::string_view> split_tabs(std::string_view line);

template <typename Int>
std::optional<Int> parse_integer(std::string_view text) {
  Int value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
  return value;
}

std::optional<double> parse_double(std::string_view text);

// Shortest representation that parses back to the same double.
std::string format_double(double value);
std::string format_fixed(double value, int decimals);

// Line-at-a-time reader that tracks 1-based line numbers and strips a trailing '\r'.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::string_view& line);
  std::size_t line_number() const { return line_number_; }
  const std::string& source() const { return source_; }
  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::istream& in_;
  std::string source_;
  std::string buffer_;
  std::size_t line_number_ = 0;
};

// Throws MissingArtifactError when the file does not exist.
std::ifstream open_input(const std::filesystem::path& file);
std::string read_text_file(const std::filesystem::path& file);
// Throws IoError when the path cannot be written.
void write_text_file(const std::filesystem::path& file, std::string_view contents);

}  // namespace cocite

#endif  // COCITE_IO_HPP_
