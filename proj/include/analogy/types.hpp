#pragma once

#include <string>
#include <vector>

namespace analogy {

/// Dense vector in 64-bit precision; storage rows are promoted on read.
using Vector = std::vector<double>;

/// Ordered word pair; the relation reads first : second.
struct WordPair {
  std::string first;
  std::string second;

  WordPair() = default;
  /// Throws Error(InvalidPair) when both words are the same string.
  WordPair(std::string first_word, std::string second_word);

  /// "first:second"
  std::string label() const;

  friend bool operator==(const WordPair&, const WordPair&) = default;
  friend auto operator<=>(const WordPair&, const WordPair&) = default;
};

}  // namespace analogy
