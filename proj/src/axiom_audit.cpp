#include "analogy/axiom_audit.hpp"

#include <algorithm>
#include <cmath>

#include "analogy/error.hpp"
#include "analogy/parallel.hpp"
#include "analogy/rng.hpp"
#include "analogy/vector_core.hpp"

namespace analogy {

namespace {

std::vector<double> as_doubles(const std::vector<int>& xs) { return {xs.begin(), xs.end()}; }

double mean_of(const std::vector<int>& xs) {
  double s = 0.0;
  for (int x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

constexpr std::array<AnalogyType, 3> kTypes = {AnalogyType::OneTwo, AnalogyType::TwoThree,
                                               AnalogyType::OneThree};

}  // namespace

std::string to_string(TriadPattern pattern) {
  return pattern == TriadPattern::ExpectedViolation ? "expected_violation" : "other";
}

// ---------------------------------------------------------------------------

SymmetryAuditResult symmetry_audit(const std::vector<Comparison>& comparisons, double alpha,
                                   stats::TTestVariant variant, unsigned threads) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  }
  for (const auto& c : comparisons) {
    if (c.ratings_left_first.size() < 2 || c.ratings_right_first.size() < 2) {
      throw Error(ErrorKind::InsufficientRatings,
                  "each presentation order needs at least two ratings", c.id);
    }
  }
  SymmetryAuditResult result;
  result.alpha = alpha;
  result.per_comparison.resize(comparisons.size());
  parallel_for(comparisons.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& c = comparisons[i];
      auto& item = result.per_comparison[i];
      item.comparison_id = c.id;
      item.n_left_first = c.ratings_left_first.size();
      item.n_right_first = c.ratings_right_first.size();
      item.mean_left_first = mean_of(c.ratings_left_first);
      item.mean_right_first = mean_of(c.ratings_right_first);
      try {
        item.test = stats::welch_t_test(as_doubles(c.ratings_left_first),
                                        as_doubles(c.ratings_right_first), variant);
        item.significant = item.test->p_two_sided < alpha;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateGroup) throw;
        item.significant = item.mean_left_first != item.mean_right_first;
      }
    }
  });
  for (const auto& item : result.per_comparison) {
    result.n_significant += item.significant ? 1 : 0;
  }
  const std::size_t n = comparisons.size();
  result.expected_under_null = alpha * static_cast<double>(n);
  result.binomial = stats::binomial_test(result.n_significant, n, alpha, stats::Tail::Greater);
  return result;
}

ModelSymmetryResult model_symmetry_check(const EmbeddingSpace& space, Metric metric,
                                         std::size_t n_samples, std::uint64_t seed) {
  if (space.size() < 4) {
    throw Error(ErrorKind::InvalidArgument, "symmetry check needs at least four tokens");
  }
  ModelSymmetryResult result;
  result.n_samples = n_samples;
  result.empty_sample = n_samples == 0;
  Rng rng(seed);
  const auto vocab = static_cast<std::uint64_t>(space.size());
  auto draw_pair = [&] {
    const auto a = static_cast<std::size_t>(rng.below(vocab));
    auto b = static_cast<std::size_t>(rng.below(vocab - 1));
    if (b >= a) ++b;
    return WordPair(space.token(a), space.token(b));
  };
  for (std::size_t s = 0; s < n_samples; ++s) {
    const WordPair p = draw_pair();
    const WordPair q = draw_pair();
    try {
      const double forward = relsim(space, p, q, metric).value;
      const double backward = relsim(space, q, p, metric).value;
      result.max_abs_asymmetry = std::max(result.max_abs_asymmetry, std::fabs(forward - backward));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroDifference) throw;
      ++result.n_skipped;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

TriadPattern classify_triad(const stats::AnovaResult& anova, const stats::TukeyResult& tukey) {
  const auto& m = anova.group_means;
  const auto& a = tukey.pair(0, 2);  // 1-2 vs 1-3
  const auto& b = tukey.pair(1, 2);  // 2-3 vs 1-3
  const auto& c = tukey.pair(0, 1);  // 1-2 vs 2-3
  const bool expected = a.significant && m[0] > m[2] && b.significant && m[1] > m[2] &&
                        !c.significant;
  return expected ? TriadPattern::ExpectedViolation : TriadPattern::Other;
}

TriadAuditResult triad_audit_human(const std::vector<Triad>& triads, double alpha) {
  TriadAuditResult result;
  result.alpha = alpha;
  std::vector<std::vector<double>> type_means(3);
  for (const auto& triad : triads) {
    std::vector<std::vector<double>> groups;
    for (auto type : kTypes) {
      groups.push_back(as_doubles(triad.ratings[static_cast<std::size_t>(type)]));
    }
    TriadItem item;
    item.triad_id = triad.id;
    try {
      item.anova = stats::anova_oneway(groups);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegenerateGroups) {
        throw Error(ErrorKind::DegenerateGroups, e.detail(), triad.id);
      }
      throw;
    }
    item.tukey = stats::tukey_hsd(item.anova, alpha);
    item.pattern = classify_triad(item.anova, item.tukey);
    result.n_expected_pattern += item.pattern == TriadPattern::ExpectedViolation ? 1 : 0;
    for (std::size_t t = 0; t < 3; ++t) {
      type_means[t].push_back(item.anova.group_means[t]);
    }
    result.per_triad.push_back(std::move(item));
  }
  if (triads.size() >= 2) {
    try {
      result.overall = stats::anova_oneway(type_means);
      result.overall_tukey = stats::tukey_hsd(*result.overall, alpha);
    } catch (const Error& e) {
      // Too few triads for the tabulated Tukey range, or no spread in the means.
      if (e.kind() != ErrorKind::UnsupportedDesign && e.kind() != ErrorKind::DegenerateGroups) {
        throw;
      }
    }
  }
  return result;
}

double relation_distance(std::span<const double> r1, std::span<const double> r2, Metric metric) {
  if (metric == Metric::EuclideanOfDifferences) {
    return euclidean_distance(r1, r2);
  }
  // Angle between r1 and r2 as 2 atan2(|u - v|, |u + v|) on the unit vectors;
  // stays accurate near 0 and pi where acos of the cosine does not.
  const double n1 = norm(r1);
  const double n2 = norm(r2);
  if (n1 == 0.0 || n2 == 0.0) {
    throw Error(ErrorKind::ZeroDifference, "angle with a zero difference vector is undefined");
  }
  double diff = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    const double u = r1[i] / n1;
    const double v = r2[i] / n2;
    diff += (u - v) * (u - v);
    sum += (u + v) * (u + v);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

TriadModelResult triad_audit_model(const EmbeddingSpace& space, const std::vector<Triad>& triads,
                                   Metric metric) {
  TriadModelResult result;
  result.metric = metric;
  std::vector<std::vector<double>> groups(3);
  for (const auto& triad : triads) {
    TriadModelItem item;
    item.triad_id = triad.id;
    std::array<Vector, 3> r;
    for (std::size_t i = 0; i < 3; ++i) {
      r[i] = relation_vector(space, triad.pairs[i]);
    }
    for (std::size_t t = 0; t < 3; ++t) {
      const auto [p, q] = triad.analogy(kTypes[t]);
      item.similarity[t] = relsim(space, p, q, metric).value;
      groups[t].push_back(item.similarity[t]);
    }
    item.distance[0] = relation_distance(r[0], r[1], metric);
    item.distance[1] = relation_distance(r[1], r[2], metric);
    item.distance[2] = relation_distance(r[0], r[2], metric);
    item.triangle_slack = item.distance[0] + item.distance[1] - item.distance[2];
    item.triangle_holds = item.triangle_slack >= -kTriangleTolerance;
    result.all_triangles_hold = result.all_triangles_hold && item.triangle_holds;
    result.per_triad.push_back(item);
  }
  if (triads.size() >= 2) {
    double lo = groups[0][0];
    double hi = lo;
    for (const auto& g : groups) {
      for (double v : g) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (lo == hi) {
      stats::AnovaResult flat;
      flat.df_between = 2;
      flat.df_within = static_cast<int>(3 * triads.size() - 3);
      flat.F = 0.0;
      flat.p = 1.0;
      flat.group_means = {lo, lo, lo};
      flat.group_sizes = {triads.size(), triads.size(), triads.size()};
      result.anova = flat;
    } else {
      result.anova = stats::anova_oneway(groups);
    }
  }
  return result;
}

}  // namespace analogy
