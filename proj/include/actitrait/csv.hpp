#pragma once

// Small CSV helpers shared by the parsers and report writers. Fields never
// contain quoted commas in any of the formats used here.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace actitrait::csv {

// Splits on ',' after stripping a trailing '\r'. Fields are trimmed of
// surrounding spaces.
std::vector<std::string_view> split(std::string_view line);

// Iterates over the lines of a text buffer; LF or CRLF.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}
  // Returns false at end of input. `line_no` is 1-based.
  bool next(std::string_view& line);
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

// Shortest representation that parses back to the same double.
std::string format_double(double v);
// Empty string for an absent value.
std::string format_optional(const std::optional<double>& v);

std::string to_lower(std::string_view s);

std::string read_file(const std::string& path);

}  // namespace actitrait::csv
