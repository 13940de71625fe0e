#include "analogy/analogy_engine.hpp"

#include <cmath>
#include <set>

#include "analogy/error.hpp"

namespace analogy {

namespace {

struct ResolvedQuery {
  std::size_t a, b, c;
  Vector target;
  std::set<std::string> exclude;
};

ResolvedQuery resolve(const EmbeddingSpace& space, const AnalogyQuery& query) {
  ResolvedQuery r;
  r.a = space.index_of(query.a, query.fold_case);
  r.b = space.index_of(query.b, query.fold_case);
  r.c = space.index_of(query.c, query.fold_case);
  const Vector va = space.vector_at(r.a);
  const Vector vb = space.vector_at(r.b);
  const Vector vc = space.vector_at(r.c);
  r.target = add(difference(vb, va), vc);
  if (norm(r.target) == 0.0) {
    throw Error(ErrorKind::ZeroVector, "analogy target b - a + c is the zero vector",
                query.a + ":" + query.b + "::" + query.c);
  }
  if (query.exclude_inputs) {
    r.exclude = {space.token(r.a), space.token(r.b), space.token(r.c)};
  }
  return r;
}

}  // namespace

AnalogyResult complete_parallelogram(const EmbeddingSpace& space, const AnalogyQuery& query,
                                     unsigned threads) {
  auto resolved = resolve(space, query);
  AnalogyResult result;
  result.candidates = top_k_by_cosine(space, resolved.target, query.k, resolved.exclude, threads);
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    result.rank_of.emplace(result.candidates[i].token, i + 1);
  }
  result.target = std::move(resolved.target);
  return result;
}

std::size_t rank_of_candidate(const EmbeddingSpace& space, const AnalogyQuery& query,
                              const std::string& candidate, unsigned threads) {
  const auto resolved = resolve(space, query);
  const std::size_t d = space.index_of(candidate, query.fold_case);
  if (resolved.exclude.contains(space.token(d))) {
    throw Error(ErrorKind::ExcludedCandidate, "candidate is an excluded query input", candidate);
  }
  const auto scores = cosine_scores(space, resolved.target, threads);
  if (std::isnan(scores[d])) {
    throw Error(ErrorKind::ZeroVector, "candidate has a zero vector and cannot be ranked", candidate);
  }
  std::size_t ahead = 0;
  for (std::size_t r = 0; r < space.size(); ++r) {
    if (r == d || std::isnan(scores[r]) || resolved.exclude.contains(space.token(r))) {
      continue;
    }
    if (scores[r] > scores[d] || (scores[r] == scores[d] && r < d)) {
      ++ahead;
    }
  }
  return ahead + 1;
}

}  // namespace analogy
