#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "analogy/embedding_store.hpp"
#include "analogy/relation_dataset.hpp"
#include "analogy/relsim.hpp"
#include "analogy/stats.hpp"

namespace analogy {

struct SymmetryItem {
  std::string comparison_id;
  double mean_left_first = 0.0;
  double mean_right_first = 0.0;
  std::size_t n_left_first = 0;
  std::size_t n_right_first = 0;
  /// Empty when both order groups are constant. Such a comparison counts as
  /// significant exactly when the two constants differ.
  std::optional<stats::TTestResult> test;
  bool significant = false;
};

struct SymmetryAuditResult {
  double alpha = 0.05;
  std::vector<SymmetryItem> per_comparison;
  std::size_t n_significant = 0;
  double expected_under_null = 0.0;  // alpha * number of comparisons
  stats::BinomialResult binomial;
};

/// Per comparison, a two-sample t-test between the ratings collected in the two
/// presentation orders; then a binomial test of the number of significant
/// comparisons against alpha. Throws InsufficientRatings(comparison_id) when an
/// order has fewer than two ratings.
SymmetryAuditResult symmetry_audit(const std::vector<Comparison>& comparisons, double alpha = 0.05,
                                   stats::TTestVariant variant = stats::TTestVariant::Welch,
                                   unsigned threads = 1);

struct ModelSymmetryResult {
  double max_abs_asymmetry = 0.0;
  std::size_t n_samples = 0;
  /// Samples where the metric was undefined (zero difference vector).
  std::size_t n_skipped = 0;
  bool empty_sample = false;
};

/// Samples random pairs of word pairs and returns max |sim(p, q) - sim(q, p)|.
/// Vocabulary must hold at least four tokens.
ModelSymmetryResult model_symmetry_check(const EmbeddingSpace& space, Metric metric,
                                         std::size_t n_samples, std::uint64_t seed);

enum class TriadPattern { ExpectedViolation, Other };
std::string to_string(TriadPattern pattern);

struct TriadItem {
  std::string triad_id;
  stats::AnovaResult anova;
  stats::TukeyResult tukey;
  TriadPattern pattern = TriadPattern::Other;
};

struct TriadAuditResult {
  double alpha = 0.05;
  std::vector<TriadItem> per_triad;
  std::size_t n_expected_pattern = 0;
  /// ANOVA over the per-analogy mean ratings grouped by analogy type; present
  /// when there are at least two triads.
  std::optional<stats::AnovaResult> overall;
  std::optional<stats::TukeyResult> overall_tukey;
};

/// ExpectedViolation when 1-2 and 2-3 are both rated significantly higher than
/// 1-3 and do not differ significantly from each other.
TriadPattern classify_triad(const stats::AnovaResult& anova, const stats::TukeyResult& tukey);

/// Per-triad one-way ANOVA and Tukey HSD over the three analogy types.
/// Throws DegenerateGroups(triad_id).
TriadAuditResult triad_audit_human(const std::vector<Triad>& triads, double alpha = 0.05);

struct TriadModelItem {
  std::string triad_id;
  /// Predicted similarity per analogy type (1-2, 2-3, 1-3).
  std::array<double, 3> similarity{};
  /// Distance between difference vectors per analogy type: angular distance for
  /// cosine, |r_i - r_j| for Euclidean.
  std::array<double, 3> distance{};
  /// d(1,2) + d(2,3) - d(1,3); non-negative up to rounding.
  double triangle_slack = 0.0;
  bool triangle_holds = true;
};

struct TriadModelResult {
  Metric metric = Metric::CosineOfDifferences;
  /// Empty when fewer than two triads. When every predicted similarity is
  /// identical the ANOVA is reported as F = 0, p = 1.
  std::optional<stats::AnovaResult> anova;
  std::vector<TriadModelItem> per_triad;
  bool all_triangles_hold = true;
};

inline constexpr double kTriangleTolerance = 1e-9;

/// Model-side counterpart of the triad audit. Throws MissingToken or ZeroDifference.
TriadModelResult triad_audit_model(const EmbeddingSpace& space, const std::vector<Triad>& triads,
                                   Metric metric);

/// Distance between two difference vectors under the metric's geometry.
double relation_distance(std::span<const double> r1, std::span<const double> r2, Metric metric);

}  // namespace analogy
