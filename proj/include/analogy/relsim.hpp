#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "analogy/embedding_store.hpp"
#include "analogy/relation_dataset.hpp"
#include "analogy/types.hpp"

namespace analogy {

enum class Metric { CosineOfDifferences, EuclideanOfDifferences };

std::string to_string(Metric metric);
/// Accepts "cosine" or "euclidean".
Metric parse_metric(const std::string& text);

/// Model-predicted relational similarity of two word pairs.
struct RelSimScore {
  Metric metric = Metric::CosineOfDifferences;
  double value = 0.0;
  WordPair pair_left;
  WordPair pair_right;
};

/// v_second - v_first, promoted to 64-bit.
Vector relation_vector(const EmbeddingSpace& space, const WordPair& pair, bool fold_case = false);

/// cos(r1, r2) with r1 = v_p.second - v_p.first and r2 likewise for q.
/// Throws MissingToken, or ZeroDifference when either pair's words coincide in the space.
RelSimScore relsim_cosine(const EmbeddingSpace& space, const WordPair& p, const WordPair& q,
                          bool fold_case = false);

/// 1 - |r1 - r2|. Unbounded below; scale-sensitive by construction.
RelSimScore relsim_euclidean(const EmbeddingSpace& space, const WordPair& p, const WordPair& q,
                             bool fold_case = false);

RelSimScore relsim(const EmbeddingSpace& space, const WordPair& p, const WordPair& q, Metric metric,
                   bool fold_case = false);

enum class MissingPolicy { Error, Skip };

struct BatchItem {
  std::string comparison_id;
  WordPair left;
  WordPair right;
  std::optional<RelSimScore> score;
  /// "ok", or the error kind that caused the skip (e.g. "MissingToken").
  std::string status = "ok";
  /// Offending token for skipped items.
  std::string detail;
};

/// One output per comparison, in input order. Under MissingPolicy::Error the
/// first failure (in input order) is rethrown; under Skip it becomes a skip
/// record. Results do not depend on `threads`.
std::vector<BatchItem> batch_relsim(const EmbeddingSpace& space,
                                    const std::vector<Comparison>& comparisons, Metric metric,
                                    MissingPolicy policy, unsigned threads = 1,
                                    bool fold_case = false);

/// comparison_id,left_pair,right_pair,metric,value,status
void write_batch_csv(std::ostream& out, const std::vector<BatchItem>& items, Metric metric);

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

}  // namespace analogy
