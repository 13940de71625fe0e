#include "analogy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "analogy/error.hpp"

namespace analogy::stats {

namespace {

// Stirling series for ln Gamma(x) without the leading terms; x > 10.
double stirling_tail(double x) {
  const double x2 = x * x;
  return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2) / x;
}

// ln B(a, b), avoiding the cancellation of ln Gamma(big) - ln Gamma(big + small).
double log_beta(double a, double b) {
  const double big = std::max(a, b);
  const double small = std::min(a, b);
  if (big < 100.0) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  }
  // ln G(big) - ln G(big + small) via Stirling:
  //   -(big - 1/2) log1p(small/big) - small ln(big + small) + small + tails.
  const double ratio = -(big - 0.5) * std::log1p(small / big) - small * std::log(big + small) +
                       small + stirling_tail(big) - stirling_tail(big + small);
  return std::lgamma(small) + ratio;
}

// Continued fraction for I_x(a, b) by the modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 200000;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= kEps) {
      return h;
    }
  }
  return h;
}

// I_x(a, b) with y = 1 - x supplied separately so callers keep full precision
// on whichever side is small. log_x and log_y carry the prefactor logs; with a
// or b large they must be accurate well beyond what log(x) of a rounded x gives.
double ibeta(double a, double b, double x, double y, double log_x, double log_y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = a * log_x + b * log_y - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, y) / b;
}

double ibeta(double a, double b, double x, double y) {
  return ibeta(a, b, x, y, std::log(x), std::log(y));
}

// I_x(a, b) for x = 1 / (1 + r), y = r / (1 + r).
double ibeta_ratio(double a, double b, double r) {
  if (r <= 0.0) return 1.0;
  if (std::isinf(r)) return 0.0;
  const double l = std::log1p(r);
  return ibeta(a, b, 1.0 / (1.0 + r), r / (1.0 + r), -l, std::log(r) - l);
}

// 1 - I_x(a, b) = I_y(b, a) for the same parametrisation.
double ibetac_ratio(double a, double b, double r) {
  if (r <= 0.0) return 0.0;
  if (std::isinf(r)) return 1.0;
  const double l = std::log1p(r);
  return ibeta(b, a, r / (1.0 + r), 1.0 / (1.0 + r), std::log(r) - l, -l);
}

double sum_range(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

double mean_of(std::span<const double> xs) { return sum_range(xs) / static_cast<double>(xs.size()); }

double sum_sq_dev(std::span<const double> xs, double mean) {
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return s;
}

double log_binomial_pmf(std::uint64_t i, std::uint64_t n, double p) {
  const double di = static_cast<double>(i);
  const double dn = static_cast<double>(n);
  return std::lgamma(dn + 1.0) - std::lgamma(di + 1.0) - std::lgamma(dn - di + 1.0) +
         di * std::log(p) + (dn - di) * std::log1p(-p);
}

AnovaResult finish_anova(std::vector<double> means, std::vector<std::size_t> sizes,
                         double ss_between, double ss_within) {
  AnovaResult r;
  std::size_t total = 0;
  for (auto n : sizes) total += n;
  r.df_between = static_cast<int>(means.size()) - 1;
  r.df_within = static_cast<int>(total - means.size());
  r.ss_between = ss_between;
  r.ss_within = ss_within;
  if (!(ss_within > 0.0)) {
    throw Error(ErrorKind::DegenerateGroups, "no within-group variance");
  }
  r.ms_between = ss_between / r.df_between;
  r.ms_within = ss_within / r.df_within;
  r.F = r.ms_between / r.ms_within;
  r.p = f_sf(r.F, r.df_between, r.df_within);
  r.group_means = std::move(means);
  r.group_sizes = std::move(sizes);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

GroupSummary GroupSummary::of(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorKind::TooFewObservations, "a group summary needs at least two values");
  }
  GroupSummary s;
  s.n = values.size();
  s.mean = mean_of(values);
  s.sd = std::sqrt(sum_sq_dev(values, s.mean) / static_cast<double>(s.n - 1));
  return s;
}

const TukeyPair& TukeyResult::pair(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  for (const auto& p : pairwise) {
    if (p.i == i && p.j == j) {
      return p;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "no such group pair",
              std::to_string(i) + "," + std::to_string(j));
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "incomplete beta needs a, b > 0");
  }
  x = std::clamp(x, 0.0, 1.0);
  return ibeta(a, b, x, 1.0 - x);
}

double t_two_sided_p(double x, double df) {
  if (!(df > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "t distribution needs df > 0");
  }
  if (std::isinf(x)) return 0.0;
  // P(|T| >= |x|) = I_{df/(df+x^2)}(df/2, 1/2)
  return std::clamp(ibeta_ratio(df / 2.0, 0.5, x * x / df), 0.0, 1.0);
}

double t_cdf(double x, double df) {
  const double tail = 0.5 * t_two_sided_p(x, df);
  return x < 0.0 ? tail : 1.0 - tail;
}

double f_cdf(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "F distribution needs d1, d2 > 0");
  }
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  // x' = d1 x / (d1 x + d2), so y'/x' = d2 / (d1 x)
  return std::clamp(ibeta_ratio(d1 / 2.0, d2 / 2.0, d2 / (d1 * x)), 0.0, 1.0);
}

double f_sf(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "F distribution needs d1, d2 > 0");
  }
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return std::clamp(ibetac_ratio(d1 / 2.0, d2 / 2.0, d2 / (d1 * x)), 0.0, 1.0);
}

// ---------------------------------------------------------------------------

PearsonResult pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(xs.size()) + " vs " + std::to_string(ys.size()));
  }
  if (xs.size() < 3) {
    throw Error(ErrorKind::TooFewObservations, "correlation needs at least three observations");
  }
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::ConstantInput, "correlation with a constant sequence is undefined");
  }
  return PearsonResult{std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), xs.size()};
}

TTestResult welch_t_test(std::span<const double> g1, std::span<const double> g2,
                         TTestVariant variant) {
  if (g1.size() < 2 || g2.size() < 2) {
    throw Error(ErrorKind::DegenerateGroup, "each group needs at least two values");
  }
  const double n1 = static_cast<double>(g1.size());
  const double n2 = static_cast<double>(g2.size());
  TTestResult r;
  r.mean1 = mean_of(g1);
  r.mean2 = mean_of(g2);
  const double v1 = sum_sq_dev(g1, r.mean1) / (n1 - 1.0);
  const double v2 = sum_sq_dev(g2, r.mean2) / (n2 - 1.0);
  double se = 0.0;
  if (variant == TTestVariant::Welch) {
    const double a = v1 / n1;
    const double b = v2 / n2;
    se = std::sqrt(a + b);
    r.df = (a + b) * (a + b) / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
  } else {
    const double pooled = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / (n1 + n2 - 2.0);
    se = std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
    r.df = n1 + n2 - 2.0;
  }
  if (!(se > 0.0)) {
    throw Error(ErrorKind::DegenerateGroup, "both groups are constant; standard error is zero");
  }
  r.t = (r.mean1 - r.mean2) / se;
  r.p_two_sided = t_two_sided_p(r.t, r.df);
  return r;
}

BinomialResult binomial_test(std::uint64_t k, std::uint64_t n, double p0, Tail tail) {
  if (k > n) {
    throw Error(ErrorKind::InvalidArgument, "k exceeds n");
  }
  if (!(p0 > 0.0) || !(p0 < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "p0 must lie strictly between 0 and 1");
  }
  BinomialResult r;
  r.k = k;
  r.n = n;
  r.p0 = p0;
  r.tail = tail;
  r.expected = static_cast<double>(n) * p0;

  // Upper tail accumulated from the top so it is monotone in k term by term.
  double upper = 0.0;
  for (std::uint64_t i = n + 1; i-- > k;) {
    upper += std::exp(log_binomial_pmf(i, n, p0));
  }
  r.p_one_sided_ge = k == 0 ? 1.0 : std::min(1.0, upper);

  // Relative slack so outcomes tied with P(X = k) up to rounding are included.
  const double threshold = log_binomial_pmf(k, n, p0) + std::log1p(1e-7);
  double two = 0.0;
  for (std::uint64_t i = 0; i <= n; ++i) {
    const double lp = log_binomial_pmf(i, n, p0);
    if (lp <= threshold) {
      two += std::exp(lp);
    }
  }
  r.p_two_sided = std::min(1.0, two);
  r.p = tail == Tail::Greater ? r.p_one_sided_ge : r.p_two_sided;
  return r;
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw Error(ErrorKind::DegenerateGroups, "ANOVA needs at least two groups");
  }
  std::vector<double> means;
  std::vector<std::size_t> sizes;
  double grand_sum = 0.0;
  std::size_t total = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) {
      throw Error(ErrorKind::DegenerateGroups, "each group needs at least two values");
    }
    means.push_back(mean_of(g));
    sizes.push_back(g.size());
    grand_sum += sum_range(g);
    total += g.size();
  }
  const double grand = grand_sum / static_cast<double>(total);
  double ssb = 0.0;
  double ssw = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    ssb += static_cast<double>(sizes[i]) * (means[i] - grand) * (means[i] - grand);
    ssw += sum_sq_dev(groups[i], means[i]);
  }
  return finish_anova(std::move(means), std::move(sizes), ssb, ssw);
}

AnovaResult anova_from_summaries(std::span<const GroupSummary> summaries) {
  if (summaries.size() < 2) {
    throw Error(ErrorKind::DegenerateGroups, "ANOVA needs at least two groups");
  }
  std::vector<double> means;
  std::vector<std::size_t> sizes;
  double weighted = 0.0;
  std::size_t total = 0;
  for (const auto& s : summaries) {
    if (s.n < 2 || !(s.sd >= 0.0) || !std::isfinite(s.sd)) {
      throw Error(ErrorKind::DegenerateGroups, "each summary needs n >= 2 and a finite sd");
    }
    means.push_back(s.mean);
    sizes.push_back(s.n);
    weighted += static_cast<double>(s.n) * s.mean;
    total += s.n;
  }
  const double grand = weighted / static_cast<double>(total);
  double ssb = 0.0;
  double ssw = 0.0;
  for (const auto& s : summaries) {
    ssb += static_cast<double>(s.n) * (s.mean - grand) * (s.mean - grand);
    ssw += static_cast<double>(s.n - 1) * s.sd * s.sd;
  }
  return finish_anova(std::move(means), std::move(sizes), ssb, ssw);
}

TukeyResult tukey_hsd(const AnovaResult& anova, double alpha) {
  const std::size_t k = anova.group_means.size();
  TukeyResult r;
  r.alpha = alpha;
  r.q_critical = studentized_range_critical(k, anova.df_within, alpha);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      TukeyPair p;
      p.i = i;
      p.j = j;
      p.mean_diff = anova.group_means[i] - anova.group_means[j];
      const double se = std::sqrt(anova.ms_within / 2.0 *
                                  (1.0 / static_cast<double>(anova.group_sizes[i]) +
                                   1.0 / static_cast<double>(anova.group_sizes[j])));
      p.q = std::fabs(p.mean_diff) / se;
      p.significant = p.q > r.q_critical;
      r.pairwise.push_back(p);
    }
  }
  return r;
}

TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups, double alpha) {
  return tukey_hsd(anova_oneway(groups), alpha);
}

}  // namespace analogy::stats
