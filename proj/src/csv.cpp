#include "analogy/csv.hpp"

#include <istream>
#include <iterator>
#include <ostream>

#include "analogy/error.hpp"

namespace analogy::csv {

std::vector<Record> read(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) {
      records.push_back(std::move(current));
    }
    current = Record{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') {
          ++line;
        }
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started || !field.empty()) {
          throw Error(ErrorKind::MalformedRow, "quote inside unquoted field",
                      "line " + std::to_string(line));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') {
          break;
        }
        field.push_back(c);
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) {
    throw Error(ErrorKind::MalformedRow, "unterminated quoted field",
                "line " + std::to_string(current.line));
  }
  if (!field.empty() || field_started || !current.fields.empty()) {
    end_record();
  }
  return records;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out.push_back('"');
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      out.put(',');
    }
    out << quote(fields[i]);
  }
  out.put('\n');
}

Header::Header(const Record& header) : names_(header.fields), line_(header.line) {
  for (auto& n : names_) {
    // Tolerate a UTF-8 byte order mark and surrounding spaces.
    if (n.rfind("\xEF\xBB\xBF", 0) == 0) {
      n.erase(0, 3);
    }
    while (!n.empty() && n.back() == ' ') n.pop_back();
    while (!n.empty() && n.front() == ' ') n.erase(0, 1);
  }
}

std::size_t Header::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) {
      return i;
    }
  }
  return npos;
}

std::size_t Header::require(std::string_view name) const {
  const std::size_t i = find(name);
  if (i == npos) {
    throw Error(ErrorKind::MalformedRow, "missing column \"" + std::string(name) + "\"",
                "line " + std::to_string(line_));
  }
  return i;
}

}  // namespace analogy::csv
