#pragma once

#include <optional>
#include <string>
#include <vector>

#include "analogy/embedding_store.hpp"
#include "analogy/relation_dataset.hpp"
#include "analogy/relsim.hpp"

namespace analogy {

/// Which comparisons enter the per-type correlations.
enum class Pooling {
  WithinOnly,
  /// Within-subtype and between-subtype comparisons of each type (default).
  WithinAndBetweenSubtype,
  /// As above per type; between-type comparisons additionally enter the overall row.
  All,
};

std::string to_string(Pooling pooling);
Pooling parse_pooling(const std::string& text);

struct TypeCorrelation {
  int type_id = 0;
  std::size_t n = 0;
  std::optional<double> r;
  /// Error kind when r could not be computed (e.g. "ConstantInput").
  std::string error;
};

struct EvaluationResult {
  Metric metric = Metric::CosineOfDifferences;
  Pooling pooling = Pooling::WithinAndBetweenSubtype;
  std::vector<TypeCorrelation> per_type;  // ascending type id
  TypeCorrelation overall;                // type_id 0
  std::vector<std::string> skipped_ids;
};

/// Correlates each comparison's mean human rating with its model score,
/// separately for every relation type. Unrated or unresolvable comparisons
/// are skipped under MissingPolicy::Skip and raise under MissingPolicy::Error.
EvaluationResult evaluate_by_type(const EmbeddingSpace& space,
                                  const std::vector<Comparison>& comparisons, Metric metric,
                                  Pooling pooling = Pooling::WithinAndBetweenSubtype,
                                  MissingPolicy policy = MissingPolicy::Skip, unsigned threads = 1,
                                  bool fold_case = false);

}  // namespace analogy
