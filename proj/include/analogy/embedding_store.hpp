#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "analogy/types.hpp"

namespace analogy {

/// Immutable vocabulary-indexed matrix of 32-bit word vectors.
///
/// Rows are stored contiguously in token order. Every row is finite, tokens
/// are unique, and the space holds at least one token of dimension >= 1.
/// Row norms are computed once in 64-bit precision at construction. Safe for
/// any number of concurrent readers.
class EmbeddingSpace {
 public:
  /// Validates the invariants above; throws Error(InvalidSpace | NonFiniteValue | InvalidToken).
  EmbeddingSpace(std::vector<std::string> tokens, std::size_t dim, std::vector<float> data);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::string& token(std::size_t row) const { return tokens_.at(row); }

  std::span<const float> row(std::size_t index) const;
  /// Euclidean norm of a row, accumulated left to right in double.
  double row_norm(std::size_t index) const { return norms_.at(index); }
  std::span<const float> data() const noexcept { return data_; }

  std::optional<std::size_t> find(std::string_view token) const;
  /// Exact match first; with fold_case, retries with the ASCII-lowercased token.
  /// Throws Error(MissingToken) carrying the requested token.
  std::size_t index_of(std::string_view token, bool fold_case = false) const;
  /// Row promoted to 64-bit.
  Vector lookup(std::string_view token, bool fold_case = false) const;
  Vector vector_at(std::size_t index) const;

  /// Bitwise equality of tokens, dimension and float payload.
  bool bit_identical(const EmbeddingSpace& other) const noexcept;

 private:
  std::size_t dim_;
  std::vector<std::string> tokens_;
  std::vector<float> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LoadReport {
  std::size_t vocab_size = 0;
  std::size_t dim = 0;
  std::size_t skipped_lines = 0;
  /// One entry per discarded repeat; the first occurrence is the one kept.
  std::vector<std::string> duplicate_tokens;
  /// Text files only: a leading "count dim" line was recognised and consumed.
  bool header_line = false;
};

struct LoadedSpace {
  EmbeddingSpace space;
  LoadReport report;
};

enum class ParseMode { Lenient, Strict };
enum class EmbeddingFormat { Auto, Text, Binary };

/// Whitespace-separated "token v1 ... vd" lines. Dimension comes from the
/// first valid line; a leading "count dim" line is consumed as a header when
/// present. Lenient mode skips and counts bad lines; strict mode throws
/// DimensionMismatch on a wrong field count and MalformedLine otherwise.
LoadedSpace load_text(std::istream& in, ParseMode mode = ParseMode::Lenient);

/// "vocab dim\n" header, then per entry the token bytes, one space, and dim
/// little-endian IEEE-754 floats, optionally followed by a single '\n'.
/// Tokens are raw bytes and are not validated as UTF-8.
LoadedSpace load_binary(std::istream& in);

void write_text(const EmbeddingSpace& space, std::ostream& out);
void write_binary(const EmbeddingSpace& space, std::ostream& out);

/// Scales every row to unit length. Throws Error(ZeroVector) naming the token.
EmbeddingSpace normalize(const EmbeddingSpace& space);

/// Looks at the first line: "int int\n" followed by binary payload means binary.
EmbeddingFormat sniff_format(std::istream& in);

/// Opens a file and dispatches on the format. With Auto, the sniffed format is
/// used; with an explicit format the sniffed one must agree when the file has
/// a "count dim" header.
LoadedSpace load_embeddings(const std::filesystem::path& path, EmbeddingFormat format,
                            ParseMode mode = ParseMode::Lenient);

/// Maximum accepted byte length of a binary-format token.
inline constexpr std::size_t kMaxTokenBytes = 1000;

}  // namespace analogy
