#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace analogy::csv {

struct Record {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader. Accepts LF or CRLF line ends and skips blank lines.
/// Throws Error(MalformedRow) on an unterminated quoted field.
std::vector<Record> read(std::istream& in);

std::string quote(std::string_view field);

/// Writes one row, quoting fields that contain a comma, quote, CR or LF.
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Column positions resolved from a header record.
class Header {
 public:
  explicit Header(const Record& header);
  /// Index of a required column; throws Error(MalformedRow) when absent.
  std::size_t require(std::string_view name) const;
  /// Index of an optional column, or npos.
  std::size_t find(std::string_view name) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::string> names_;
  std::size_t line_;
};

}  // namespace analogy::csv
