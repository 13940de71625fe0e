#include "analogy/relsim.hpp"

#include <array>
#include <charconv>
#include <exception>
#include <ostream>

#include "analogy/csv.hpp"
#include "analogy/error.hpp"
#include "analogy/parallel.hpp"
#include "analogy/vector_core.hpp"

namespace analogy {

std::string to_string(Metric metric) {
  return metric == Metric::CosineOfDifferences ? "cosine" : "euclidean";
}

Metric parse_metric(const std::string& text) {
  if (text == "cosine") return Metric::CosineOfDifferences;
  if (text == "euclidean") return Metric::EuclideanOfDifferences;
  throw Error(ErrorKind::InvalidArgument, "metric must be cosine or euclidean", text);
}

Vector relation_vector(const EmbeddingSpace& space, const WordPair& pair, bool fold_case) {
  const Vector a = space.lookup(pair.first, fold_case);
  const Vector b = space.lookup(pair.second, fold_case);
  return difference(b, a);
}

RelSimScore relsim_cosine(const EmbeddingSpace& space, const WordPair& p, const WordPair& q,
                          bool fold_case) {
  const Vector r1 = relation_vector(space, p, fold_case);
  const Vector r2 = relation_vector(space, q, fold_case);
  if (norm(r1) == 0.0) {
    throw Error(ErrorKind::ZeroDifference, "pair has identical word vectors", p.label());
  }
  if (norm(r2) == 0.0) {
    throw Error(ErrorKind::ZeroDifference, "pair has identical word vectors", q.label());
  }
  return RelSimScore{Metric::CosineOfDifferences, cosine(r1, r2), p, q};
}

RelSimScore relsim_euclidean(const EmbeddingSpace& space, const WordPair& p, const WordPair& q,
                             bool fold_case) {
  const Vector r1 = relation_vector(space, p, fold_case);
  const Vector r2 = relation_vector(space, q, fold_case);
  return RelSimScore{Metric::EuclideanOfDifferences, 1.0 - euclidean_distance(r1, r2), p, q};
}

RelSimScore relsim(const EmbeddingSpace& space, const WordPair& p, const WordPair& q, Metric metric,
                   bool fold_case) {
  return metric == Metric::CosineOfDifferences ? relsim_cosine(space, p, q, fold_case)
                                               : relsim_euclidean(space, p, q, fold_case);
}

std::vector<BatchItem> batch_relsim(const EmbeddingSpace& space,
                                    const std::vector<Comparison>& comparisons, Metric metric,
                                    MissingPolicy policy, unsigned threads, bool fold_case) {
  std::vector<BatchItem> out(comparisons.size());
  std::vector<std::exception_ptr> failures(comparisons.size());
  parallel_for(comparisons.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& c = comparisons[i];
      auto& item = out[i];
      item.comparison_id = c.id;
      item.left = c.left;
      item.right = c.right;
      try {
        item.score = relsim(space, c.left, c.right, metric, fold_case);
      } catch (const Error& e) {
        const bool skippable =
            e.kind() == ErrorKind::MissingToken || e.kind() == ErrorKind::ZeroDifference;
        if (!skippable || policy == MissingPolicy::Error) {
          failures[i] = std::current_exception();
          continue;
        }
        item.status = std::string(to_string(e.kind()));
        item.detail = e.subject();
      }
    }
  });
  for (const auto& f : failures) {
    if (f) {
      std::rethrow_exception(f);
    }
  }
  return out;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void write_batch_csv(std::ostream& out, const std::vector<BatchItem>& items, Metric metric) {
  csv::write_row(out, {"comparison_id", "left_pair", "right_pair", "metric", "value", "status"});
  for (const auto& item : items) {
    csv::write_row(out, {item.comparison_id, item.left.label(), item.right.label(),
                         to_string(metric), item.score ? format_double(item.score->value) : "",
                         item.status});
  }
}

}  // namespace analogy
