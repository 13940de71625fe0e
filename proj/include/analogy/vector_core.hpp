#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "analogy/embedding_store.hpp"
#include "analogy/types.hpp"

namespace analogy {

// All reductions run left to right in double precision so results are
// reproducible bit for bit across runs and thread counts.

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> v);

/// b - a, componentwise. Throws Error(DimensionMismatch).
Vector difference(std::span<const double> b, std::span<const double> a);
Vector add(std::span<const double> u, std::span<const double> v);

/// u.v / (|u| |v|), clamped to [-1, 1]. Throws Error(ZeroVector) if either
/// input has zero norm. cosine(u, v) == cosine(v, u) exactly.
double cosine(std::span<const double> u, std::span<const double> v);

double euclidean_distance(std::span<const double> u, std::span<const double> v);

struct Neighbor {
  std::string token;
  std::size_t index = 0;
  double score = 0.0;
};

/// Cosine of `query` against every row. Zero rows score NaN and are never
/// returned as neighbours.
std::vector<double> cosine_scores(const EmbeddingSpace& space, std::span<const double> query,
                                  unsigned threads = 1);

/// The k rows most cosine-similar to `query`, excluding the given tokens,
/// sorted by score descending with ties broken by vocabulary order.
std::vector<Neighbor> top_k_by_cosine(const EmbeddingSpace& space, std::span<const double> query,
                                      std::size_t k, const std::set<std::string>& exclude = {},
                                      unsigned threads = 1);

}  // namespace analogy
