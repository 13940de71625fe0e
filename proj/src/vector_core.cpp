#include "analogy/vector_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "analogy/error.hpp"
#include "analogy/parallel.hpp"

namespace analogy {

namespace {

void require_same_dim(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
}

double row_dot(std::span<const double> query, std::span<const float> row) {
  double acc = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    acc += query[i] * static_cast<double>(row[i]);
  }
  return acc;
}

}  // namespace

double dot(std::span<const double> u, std::span<const double> v) {
  require_same_dim(u, v);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += u[i] * v[i];
  }
  return acc;
}

double norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) {
    acc += x * x;
  }
  return std::sqrt(acc);
}

Vector difference(std::span<const double> b, std::span<const double> a) {
  require_same_dim(b, a);
  Vector out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    out[i] = b[i] - a[i];
  }
  return out;
}

Vector add(std::span<const double> u, std::span<const double> v) {
  require_same_dim(u, v);
  Vector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = u[i] + v[i];
  }
  return out;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  require_same_dim(u, v);
  const double nu = norm(u);
  const double nv = norm(v);
  if (nu == 0.0 || nv == 0.0) {
    throw Error(ErrorKind::ZeroVector, "cosine of a zero vector is undefined");
  }
  // Product of norms is commutative, and so is each term of the dot product.
  return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

double euclidean_distance(std::span<const double> u, std::span<const double> v) {
  require_same_dim(u, v);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

std::vector<double> cosine_scores(const EmbeddingSpace& space, std::span<const double> query,
                                  unsigned threads) {
  if (query.size() != space.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "query has " + std::to_string(query.size()) +
                                                  " components, space has " +
                                                  std::to_string(space.dim()));
  }
  const double qn = norm(query);
  if (qn == 0.0) {
    throw Error(ErrorKind::ZeroVector, "query vector is zero");
  }
  std::vector<double> scores(space.size());
  parallel_for(space.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const double rn = space.row_norm(r);
      scores[r] = rn == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                            : std::clamp(row_dot(query, space.row(r)) / (qn * rn), -1.0, 1.0);
    }
  });
  return scores;
}

std::vector<Neighbor> top_k_by_cosine(const EmbeddingSpace& space, std::span<const double> query,
                                      std::size_t k, const std::set<std::string>& exclude,
                                      unsigned threads) {
  if (k == 0) {
    throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  }
  const auto scores = cosine_scores(space, query, threads);

  std::vector<std::size_t> candidates;
  candidates.reserve(space.size());
  for (std::size_t r = 0; r < space.size(); ++r) {
    if (!std::isnan(scores[r]) && !exclude.contains(space.token(r))) {
      candidates.push_back(r);
    }
  }
  auto better = [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
  };
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), better);

  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t r = candidates[i];
    out.push_back(Neighbor{space.token(r), r, scores[r]});
  }
  return out;
}

}  // namespace analogy
