#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace analogy::stats {

struct GroupSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, n - 1 denominator

  /// Throws Error(TooFewObservations) for fewer than two values.
  static GroupSummary of(std::span<const double> values);
};

struct PearsonResult {
  double r = 0.0;
  std::size_t n = 0;
};

enum class TTestVariant { Welch, Pooled };

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
  double mean1 = 0.0;
  double mean2 = 0.0;
};

enum class Tail { Greater, TwoSided };

struct BinomialResult {
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  double p0 = 0.0;
  double expected = 0.0;  // n * p0
  double p_one_sided_ge = 1.0;  // P(X >= k)
  double p_two_sided = 1.0;  // sum of outcome probabilities no larger than P(X = k)
  Tail tail = Tail::Greater;
  /// The p-value selected by `tail`.
  double p = 1.0;
};

struct AnovaResult {
  double F = 0.0;
  int df_between = 0;
  int df_within = 0;
  double p = 1.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  double ms_between = 0.0;
  double ms_within = 0.0;
  std::vector<double> group_means;
  std::vector<std::size_t> group_sizes;
};

struct TukeyPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double mean_diff = 0.0;  // mean_i - mean_j
  double q = 0.0;
  bool significant = false;
};

struct TukeyResult {
  double alpha = 0.05;
  double q_critical = 0.0;
  /// All i < j, ordered (0,1), (0,2), ..., (1,2), ...
  std::vector<TukeyPair> pairwise;

  /// Throws Error(InvalidArgument) when (i, j) is not a compared pair.
  const TukeyPair& pair(std::size_t i, std::size_t j) const;
};

// --- distribution functions -------------------------------------------------

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Student-t CDF P(T <= x) with df > 0 degrees of freedom.
double t_cdf(double x, double df);
/// Two-sided tail P(|T| >= |x|), computed without cancellation.
double t_two_sided_p(double x, double df);

/// F CDF P(F <= x).
double f_cdf(double x, double d1, double d2);
/// Upper tail P(F >= x), computed without cancellation.
double f_sf(double x, double d1, double d2);

/// Upper-alpha critical value of the studentized range for k means and df
/// error degrees of freedom, read from an embedded table covering
/// alpha in {0.05, 0.01}, 2 <= k <= 10 and df in 5..30, 40, 60, 120, inf.
/// Between rows the value is interpolated linearly in log(df); above 120 it is
/// interpolated linearly in 1/df toward the infinite-df row.
/// Throws UnsupportedAlpha or UnsupportedDesign outside that range.
double studentized_range_critical(std::size_t k, double df, double alpha);

// --- tests -------------------------------------------------------------------

/// Product-moment correlation. Needs n >= 3 and two non-constant inputs.
PearsonResult pearson(std::span<const double> xs, std::span<const double> ys);

/// Two-sample t-test. Welch uses the Welch-Satterthwaite df. Throws
/// DegenerateGroup when a group has fewer than two values or when both groups
/// are constant (zero standard error).
TTestResult welch_t_test(std::span<const double> g1, std::span<const double> g2,
                         TTestVariant variant = TTestVariant::Welch);

/// Exact binomial test of k successes in n trials against rate p0.
BinomialResult binomial_test(std::uint64_t k, std::uint64_t n, double p0, Tail tail = Tail::Greater);

/// One-way between-subjects ANOVA. Throws DegenerateGroups for fewer than two
/// groups, a group with fewer than two values, or zero within-group variance.
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);
AnovaResult anova_from_summaries(std::span<const GroupSummary> summaries);

/// Tukey HSD on the groups of a fitted ANOVA; alpha must be 0.05 or 0.01.
TukeyResult tukey_hsd(const AnovaResult& anova, double alpha = 0.05);
TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups, double alpha = 0.05);

}  // namespace analogy::stats
