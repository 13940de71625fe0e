#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "analogy/embedding_store.hpp"
#include "analogy/types.hpp"
#include "analogy/vector_core.hpp"

namespace analogy {

/// a : b :: c : ?
struct AnalogyQuery {
  std::string a;
  std::string b;
  std::string c;
  std::size_t k = 1;
  bool exclude_inputs = true;
  bool fold_case = false;
};

struct AnalogyResult {
  /// v_b - v_a + v_c
  Vector target;
  std::vector<Neighbor> candidates;
  /// 1-based rank of each returned candidate.
  std::map<std::string, std::size_t> rank_of;
};

/// Ranks the vocabulary by cosine similarity to v_b - v_a + v_c.
/// Throws MissingToken, or ZeroVector when the target cancels to zero.
AnalogyResult complete_parallelogram(const EmbeddingSpace& space, const AnalogyQuery& query,
                                     unsigned threads = 1);

/// 1-based position of `candidate` in the full ranking for `query`.
/// Throws ExcludedCandidate when the candidate is one of the excluded inputs.
std::size_t rank_of_candidate(const EmbeddingSpace& space, const AnalogyQuery& query,
                              const std::string& candidate, unsigned threads = 1);

}  // namespace analogy
