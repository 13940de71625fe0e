#include "analogy/evaluation.hpp"

#include <map>

#include "analogy/error.hpp"
#include "analogy/stats.hpp"

namespace analogy {

namespace {

bool in_pool(ComparisonKind kind, Pooling pooling) {
  switch (pooling) {
    case Pooling::WithinOnly: return kind == ComparisonKind::WithinSubtype;
    case Pooling::WithinAndBetweenSubtype: return kind != ComparisonKind::BetweenType;
    case Pooling::All: return true;
  }
  return false;
}

TypeCorrelation correlate(int type_id, const std::vector<double>& human,
                          const std::vector<double>& model) {
  TypeCorrelation tc;
  tc.type_id = type_id;
  tc.n = human.size();
  try {
    tc.r = stats::pearson(model, human).r;
  } catch (const Error& e) {
    tc.error = std::string(to_string(e.kind()));
  }
  return tc;
}

}  // namespace

std::string to_string(Pooling pooling) {
  switch (pooling) {
    case Pooling::WithinOnly: return "within";
    case Pooling::WithinAndBetweenSubtype: return "within+between_subtype";
    case Pooling::All: return "all";
  }
  return "?";
}

Pooling parse_pooling(const std::string& text) {
  if (text == "within") return Pooling::WithinOnly;
  if (text == "within+between_subtype" || text == "type") return Pooling::WithinAndBetweenSubtype;
  if (text == "all") return Pooling::All;
  throw Error(ErrorKind::InvalidArgument, "pooling must be within, within+between_subtype or all",
              text);
}

EvaluationResult evaluate_by_type(const EmbeddingSpace& space,
                                  const std::vector<Comparison>& comparisons, Metric metric,
                                  Pooling pooling, MissingPolicy policy, unsigned threads,
                                  bool fold_case) {
  EvaluationResult result;
  result.metric = metric;
  result.pooling = pooling;

  std::vector<Comparison> pool;
  for (const auto& c : comparisons) {
    if (!in_pool(c.kind, pooling)) {
      continue;
    }
    if (c.ratings.empty()) {
      if (policy == MissingPolicy::Error) {
        throw Error(ErrorKind::NoRatings, "comparison has no ratings", c.id);
      }
      result.skipped_ids.push_back(c.id);
      continue;
    }
    pool.push_back(c);
  }

  const auto scores = batch_relsim(space, pool, metric, policy, threads, fold_case);
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_type;
  std::vector<double> all_human;
  std::vector<double> all_model;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!scores[i].score) {
      result.skipped_ids.push_back(pool[i].id);
      continue;
    }
    const double human = mean_rating(pool[i]);
    const double model = scores[i].score->value;
    all_human.push_back(human);
    all_model.push_back(model);
    if (pool[i].kind != ComparisonKind::BetweenType) {
      auto& [h, m] = by_type[pool[i].left_subtype.type_id];
      h.push_back(human);
      m.push_back(model);
    }
  }
  for (const auto& [type_id, hm] : by_type) {
    result.per_type.push_back(correlate(type_id, hm.first, hm.second));
  }
  result.overall = correlate(0, all_human, all_model);
  return result;
}

}  // namespace analogy
