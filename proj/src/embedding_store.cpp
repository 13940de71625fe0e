#include "analogy/embedding_store.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "analogy/error.hpp"

namespace analogy {

namespace {

bool is_field_separator(char c) { return c == ' ' || c == '\t'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_field_separator(line[i])) {
      ++i;
    }
    const std::size_t start = i;
    while (i < line.size() && !is_field_separator(line[i])) {
      ++i;
    }
    if (i > start) {
      fields.push_back(line.substr(start, i - start));
    }
  }
  return fields;
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) {
      return false;
    }
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) {
        return false;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    const std::array<std::uint32_t, 4> min_cp{0, 0x80, 0x800, 0x10000};
    if (cp < min_cp[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

bool parse_float(std::string_view field, float& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') {
    ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

template <typename Int>
bool parse_uint(std::string_view field, Int& out) {
  if (field.empty()) {
    return false;
  }
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

bool token_is_writable(std::string_view token) {
  return !token.empty() && token.find_first_of(" \t\n\r") == std::string_view::npos;
}

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
  return v;
}

// Accumulates rows in first-seen order, dropping repeated tokens.
class SpaceBuilder {
 public:
  void set_dim(std::size_t dim) { dim_ = dim; }
  std::size_t dim() const { return dim_; }

  void add(std::string token, std::span<const float> values) {
    if (!seen_.emplace(token, tokens_.size()).second) {
      duplicates_.push_back(std::move(token));
      return;
    }
    tokens_.push_back(std::move(token));
    data_.insert(data_.end(), values.begin(), values.end());
  }

  bool empty() const { return tokens_.empty(); }

  LoadedSpace finish(std::size_t skipped, bool header) && {
    LoadReport report;
    report.vocab_size = tokens_.size();
    report.dim = dim_;
    report.skipped_lines = skipped;
    report.duplicate_tokens = std::move(duplicates_);
    report.header_line = header;
    return LoadedSpace{EmbeddingSpace(std::move(tokens_), dim_, std::move(data_)), std::move(report)};
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<float> data_;
  std::unordered_map<std::string, std::size_t> seen_;
  std::vector<std::string> duplicates_;
};

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  });
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// EmbeddingSpace

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> tokens, std::size_t dim,
                               std::vector<float> data)
    : dim_(dim), tokens_(std::move(tokens)), data_(std::move(data)) {
  if (dim_ == 0) {
    throw Error(ErrorKind::InvalidSpace, "dimension must be at least 1");
  }
  if (tokens_.empty()) {
    throw Error(ErrorKind::InvalidSpace, "vocabulary is empty");
  }
  if (data_.size() != tokens_.size() * dim_) {
    throw Error(ErrorKind::InvalidSpace, "matrix size does not match vocabulary x dim");
  }
  index_.reserve(tokens_.size());
  norms_.resize(tokens_.size());
  for (std::size_t r = 0; r < tokens_.size(); ++r) {
    if (tokens_[r].empty()) {
      throw Error(ErrorKind::InvalidToken, "empty token", "row " + std::to_string(r));
    }
    if (!index_.emplace(tokens_[r], r).second) {
      throw Error(ErrorKind::InvalidSpace, "duplicate token", tokens_[r]);
    }
    double sq = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const float v = data_[r * dim_ + j];
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::NonFiniteValue, "non-finite component", tokens_[r]);
      }
      sq += static_cast<double>(v) * static_cast<double>(v);
    }
    norms_[r] = std::sqrt(sq);
  }
}

std::span<const float> EmbeddingSpace::row(std::size_t index) const {
  if (index >= tokens_.size()) {
    throw Error(ErrorKind::InvalidArgument, "row index out of range", std::to_string(index));
  }
  return std::span<const float>(data_).subspan(index * dim_, dim_);
}

std::optional<std::size_t> EmbeddingSpace::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::size_t EmbeddingSpace::index_of(std::string_view token, bool fold_case) const {
  if (auto hit = find(token)) {
    return *hit;
  }
  if (fold_case) {
    if (auto hit = find(ascii_lower(token))) {
      return *hit;
    }
  }
  throw Error(ErrorKind::MissingToken, "token not in vocabulary", std::string(token));
}

Vector EmbeddingSpace::lookup(std::string_view token, bool fold_case) const {
  return vector_at(index_of(token, fold_case));
}

Vector EmbeddingSpace::vector_at(std::size_t index) const {
  auto r = row(index);
  return Vector(r.begin(), r.end());
}

bool EmbeddingSpace::bit_identical(const EmbeddingSpace& other) const noexcept {
  return dim_ == other.dim_ && tokens_ == other.tokens_ && data_.size() == other.data_.size() &&
         std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(float)) == 0;
}

// ---------------------------------------------------------------------------
// Text format

LoadedSpace load_text(std::istream& in, ParseMode mode) {
  SpaceBuilder builder;
  std::size_t skipped = 0;
  bool header = false;
  bool first_content_line = true;
  std::size_t line_no = 0;
  std::string line;
  std::vector<float> values;

  auto reject = [&](ErrorKind kind, const std::string& why) {
    if (mode == ParseMode::Strict) {
      throw Error(kind, why, "line " + std::to_string(line_no));
    }
    ++skipped;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    const auto fields = split_fields(line);
    if (fields.empty()) {
      continue;
    }
    if (first_content_line) {
      first_content_line = false;
      std::size_t count = 0;
      std::size_t dim = 0;
      if (fields.size() == 2 && parse_uint(fields[0], count) && parse_uint(fields[1], dim) &&
          dim >= 1) {
        header = true;
        builder.set_dim(dim);
        continue;
      }
    }
    if (builder.dim() == 0) {
      if (fields.size() < 2) {
        reject(ErrorKind::MalformedLine, "line has no vector components");
        continue;
      }
      builder.set_dim(fields.size() - 1);
    }
    if (fields.size() != builder.dim() + 1) {
      reject(ErrorKind::DimensionMismatch, "expected " + std::to_string(builder.dim() + 1) +
                                               " fields, found " + std::to_string(fields.size()));
      continue;
    }
    if (!valid_utf8(fields[0])) {
      reject(ErrorKind::MalformedLine, "token is not valid UTF-8");
      continue;
    }
    values.resize(builder.dim());
    bool ok = true;
    for (std::size_t j = 0; j < builder.dim(); ++j) {
      if (!parse_float(fields[j + 1], values[j])) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      reject(ErrorKind::MalformedLine, "unparseable or non-finite component");
      continue;
    }
    builder.add(std::string(fields[0]), values);
  }
  if (in.bad()) {
    throw Error(ErrorKind::IoError, "read failure");
  }
  if (builder.empty()) {
    throw Error(ErrorKind::EmptyInput, "no valid embedding line");
  }
  return std::move(builder).finish(skipped, header);
}

void write_text(const EmbeddingSpace& space, std::ostream& out) {
  std::array<char, 64> buf{};
  std::string line;
  for (std::size_t r = 0; r < space.size(); ++r) {
    const auto& token = space.token(r);
    if (!token_is_writable(token) || !valid_utf8(token)) {
      throw Error(ErrorKind::InvalidToken, "token cannot be written in text format", token);
    }
    line = token;
    for (float v : space.row(r)) {
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      line.push_back(' ');
      line.append(buf.data(), ptr);
    }
    line.push_back('\n');
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
  }
  if (!out) {
    throw Error(ErrorKind::IoError, "write failure");
  }
}

// ---------------------------------------------------------------------------
// Binary format

LoadedSpace load_binary(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw Error(ErrorKind::HeaderParseError, "missing header line");
  }
  if (!header.empty() && header.back() == '\r') {
    header.pop_back();
  }
  const auto fields = split_fields(header);
  std::size_t vocab = 0;
  std::size_t dim = 0;
  if (fields.size() != 2 || !parse_uint(fields[0], vocab) || !parse_uint(fields[1], dim) ||
      dim == 0) {
    throw Error(ErrorKind::HeaderParseError, "expected \"vocab_size dim\"", header);
  }

  SpaceBuilder builder;
  builder.set_dim(dim);
  std::vector<float> values(dim);
  std::vector<std::uint32_t> raw(dim);
  std::string token;
  for (std::size_t entry = 0; entry < vocab; ++entry) {
    token.clear();
    for (;;) {
      const int c = in.get();
      if (c == std::char_traits<char>::eof()) {
        throw Error(ErrorKind::TruncatedFile, "stream ended inside a token",
                    "entry " + std::to_string(entry));
      }
      if (c == ' ') {
        break;
      }
      // A newline can only appear here as the optional vector terminator.
      if (c == '\n' && token.empty()) {
        continue;
      }
      token.push_back(static_cast<char>(c));
      if (token.size() > kMaxTokenBytes) {
        throw Error(ErrorKind::TokenTooLong, "token exceeds 1000 bytes; stream is desynchronised",
                    "entry " + std::to_string(entry));
      }
    }
    if (token.empty()) {
      throw Error(ErrorKind::InvalidToken, "empty token", "entry " + std::to_string(entry));
    }
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(dim * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != dim * sizeof(float)) {
      throw Error(ErrorKind::TruncatedFile, "stream ended inside a vector", token);
    }
    for (std::size_t j = 0; j < dim; ++j) {
      values[j] = std::bit_cast<float>(to_little_endian(raw[j]));
      if (!std::isfinite(values[j])) {
        throw Error(ErrorKind::NonFiniteValue, "non-finite component", token);
      }
    }
    if (in.peek() == '\n') {
      in.get();
    }
    builder.add(token, values);
  }
  if (builder.empty()) {
    throw Error(ErrorKind::EmptyInput, "header declares no entries");
  }
  return std::move(builder).finish(0, true);
}

void write_binary(const EmbeddingSpace& space, std::ostream& out) {
  const std::string header = std::to_string(space.size()) + " " + std::to_string(space.dim()) + "\n";
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  std::vector<std::uint32_t> raw(space.dim());
  for (std::size_t r = 0; r < space.size(); ++r) {
    const auto& token = space.token(r);
    if (token.find_first_of(" \n") != std::string::npos) {
      throw Error(ErrorKind::InvalidToken, "token cannot be written in binary format", token);
    }
    out.write(token.data(), static_cast<std::streamsize>(token.size()));
    out.put(' ');
    auto row = space.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      raw[j] = to_little_endian(std::bit_cast<std::uint32_t>(row[j]));
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(float)));
    out.put('\n');
  }
  if (!out) {
    throw Error(ErrorKind::IoError, "write failure");
  }
}

// ---------------------------------------------------------------------------

EmbeddingSpace normalize(const EmbeddingSpace& space) {
  std::vector<float> data(space.data().begin(), space.data().end());
  const std::size_t dim = space.dim();
  for (std::size_t r = 0; r < space.size(); ++r) {
    const double norm = space.row_norm(r);
    if (norm == 0.0) {
      throw Error(ErrorKind::ZeroVector, "cannot normalize a zero row", space.token(r));
    }
    for (std::size_t j = 0; j < dim; ++j) {
      data[r * dim + j] = static_cast<float>(static_cast<double>(data[r * dim + j]) / norm);
    }
  }
  return EmbeddingSpace(space.tokens(), dim, std::move(data));
}

EmbeddingFormat sniff_format(std::istream& in) {
  const auto start = in.tellg();
  std::string first;
  std::getline(in, first);
  EmbeddingFormat result = EmbeddingFormat::Text;
  const auto fields = split_fields(first);
  std::size_t count = 0;
  std::size_t dim = 0;
  if (fields.size() == 2 && parse_uint(fields[0], count) && parse_uint(fields[1], dim) && dim > 0) {
    // Header present: decide by whether the next line parses as a text row.
    std::string next;
    std::getline(in, next);
    if (!next.empty() && next.back() == '\r') {
      next.pop_back();
    }
    const auto row = split_fields(next);
    bool text_row = row.size() == dim + 1;
    float scratch = 0.0f;
    for (std::size_t j = 1; text_row && j < row.size(); ++j) {
      text_row = parse_float(row[j], scratch);
    }
    result = text_row ? EmbeddingFormat::Text : EmbeddingFormat::Binary;
  }
  in.clear();
  in.seekg(start);
  return result;
}

LoadedSpace load_embeddings(const std::filesystem::path& path, EmbeddingFormat format,
                            ParseMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open embedding file", path.string());
  }
  const EmbeddingFormat sniffed = sniff_format(in);
  if (format == EmbeddingFormat::Auto) {
    format = sniffed;
  } else if (sniffed == EmbeddingFormat::Binary && format == EmbeddingFormat::Text) {
    throw Error(ErrorKind::HeaderParseError, "file looks binary but text format was requested",
                path.string());
  }
  return format == EmbeddingFormat::Binary ? load_binary(in) : load_text(in, mode);
}

}  // namespace analogy
