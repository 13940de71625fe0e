#include "analogy/types.hpp"

#include "analogy/error.hpp"

namespace analogy {

WordPair::WordPair(std::string first_word, std::string second_word)
    : first(std::move(first_word)), second(std::move(second_word)) {
  if (first.empty() || second.empty()) {
    throw Error(ErrorKind::InvalidPair, "word pair has an empty word", first + ":" + second);
  }
  if (first == second) {
    throw Error(ErrorKind::InvalidPair, "word pair relates a word to itself", first + ":" + second);
  }
}

std::string WordPair::label() const { return first + ":" + second; }

}  // namespace analogy
