// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "analogy/analogy_engine.hpp"
#include "analogy/axiom_audit.hpp"
#include "analogy/embedding_store.hpp"
#include "analogy/error.hpp"
#include "analogy/projection.hpp"
#include "analogy/relation_dataset.hpp"
#include "analogy/relsim.hpp"
#include "analogy/stats.hpp"
#include "cli_scenario.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace analogy;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int number, const std::string& name, double limit_seconds,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit_seconds <= 0.0 || secs < limit_seconds;
  const bool pass = outcome.ok && in_time;
  failures += pass ? 0 : 1;
  char timing[96];
  if (limit_seconds > 0.0) {
    std::snprintf(timing, sizeof timing, "%.3f s, limit %.0f s", secs, limit_seconds);
  } else {
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
  }
  std::printf("[%s] %2d %s: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              outcome.detail.c_str(), timing);
  std::fflush(stdout);
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

std::string le_floats(std::initializer_list<float> xs) {
  std::string out;
  for (float x : xs) {
    const auto bits = std::bit_cast<std::uint32_t>(x);
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
  }
  return out;
}

// Sine of the largest principal angle between span(a0, a1) and span(b0, b1);
// both bases orthonormal.
double principal_angle(const std::array<Vector, 2>& a, const std::array<Vector, 2>& b) {
  const std::size_t d = a[0].size();
  std::array<Vector, 2> r;
  for (int i = 0; i < 2; ++i) {
    r[i] = a[i];
    for (int j = 0; j < 2; ++j) {
      double p = 0;
      for (std::size_t k = 0; k < d; ++k) p += a[i][k] * b[j][k];
      for (std::size_t k = 0; k < d; ++k) r[i][k] -= p * b[j][k];
    }
  }
  double g00 = 0, g01 = 0, g11 = 0;
  for (std::size_t k = 0; k < d; ++k) {
    g00 += r[0][k] * r[0][k];
    g01 += r[0][k] * r[1][k];
    g11 += r[1][k] * r[1][k];
  }
  const double tr = g00 + g11;
  const double det = g00 * g11 - g01 * g01;
  const double top = 0.5 * tr + std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return std::asin(std::min(1.0, std::sqrt(std::max(0.0, top))));
}

}  // namespace

int main() {
  criterion(1, "design combinatorics", 1.0, [] {
    const auto taxonomy = testsupport::make_taxonomy(10, 2, 30);
    const auto comparisons = generate_comparisons(taxonomy, 20240601);
    std::map<ComparisonKind, std::size_t> n;
    for (const auto& c : comparisons) ++n[c.kind];
    const std::size_t w = n[ComparisonKind::WithinSubtype];
    const std::size_t bs = n[ComparisonKind::BetweenSubtype];
    const std::size_t bt = n[ComparisonKind::BetweenType];
    return Outcome{w == 4350 && bs == 925 && bt == 925,
                   fmt("within=%zu between_subtype=%zu between_type=%zu", w, bs, bt)};
  });

  criterion(2, "ANOVA and Tukey from summaries", 1.0, [] {
    const std::vector<stats::GroupSummary> groups{{12, 5.44, 0.99}, {12, 5.43, 0.63}, {12, 2.99, 0.46}};
    const auto a = stats::anova_from_summaries(groups);
    const auto t = stats::tukey_hsd(a, 0.05);
    const bool s01 = t.pair(0, 1).significant;
    const bool s02 = t.pair(0, 2).significant;
    const bool s12 = t.pair(1, 2).significant;
    const bool ok = a.df_between == 2 && a.df_within == 33 && std::fabs(a.F - 45.57) <= 1.5 &&
                    !s01 && s02 && s12;
    return Outcome{ok, fmt("F(%d, %d) = %.3f, |F - 45.57| = %.3f; Tukey q_crit=%.4f "
                           "sig(1-2,2-3)=%d sig(1-2,1-3)=%d sig(2-3,1-3)=%d",
                           a.df_between, a.df_within, a.F, std::fabs(a.F - 45.57), t.q_critical,
                           s01, s02, s12)};
  });

  criterion(3, "binomial test", 1.0, [] {
    const auto b = stats::binomial_test(77, 500, 0.05);
    return Outcome{b.expected == 25.0 && b.p_one_sided_ge < 0.001,
                   fmt("expected=%.6g p_one_sided=%.3e", b.expected, b.p_one_sided_ge)};
  });

  criterion(4, "parallelogram completion", 5.0, [] {
    const auto fx = testsupport::parallelogram_fixture(4, 100, 20, 500);
    int correct = 0;
    for (const auto& q : fx.quads) {
      const auto r = complete_parallelogram(fx.space, {q[0], q[1], q[2], 1, true});
      correct += r.candidates.front().token == q[3] ? 1 : 0;
    }
    return Outcome{correct == 100 && fx.space.size() >= 900,
                   fmt("top-1 %d/100, vocabulary %zu, dim %zu", correct, fx.space.size(),
                       fx.space.dim())};
  });

  criterion(5, "model metric axioms", 10.0, [] {
    const auto space = testsupport::random_space(5, 1000, 50);
    double asym = 0.0;
    std::size_t skipped = 0;
    for (auto m : {Metric::CosineOfDifferences, Metric::EuclideanOfDifferences}) {
      const auto r = model_symmetry_check(space, m, 1000, 55);
      asym = std::max(asym, r.max_abs_asymmetry);
      skipped += r.n_skipped;
    }
    std::mt19937_64 gen(555);
    double worst_angle = std::numeric_limits<double>::infinity();
    double worst_euclid = worst_angle;
    for (int t = 0; t < 1000; ++t) {
      std::array<Vector, 3> r;
      for (auto& v : r) {
        const auto i = gen() % space.size();
        const auto j = (i + 1 + gen() % (space.size() - 1)) % space.size();
        v = difference(space.vector_at(j), space.vector_at(i));
      }
      auto slack = [&](Metric m) {
        return relation_distance(r[0], r[1], m) + relation_distance(r[1], r[2], m) -
               relation_distance(r[0], r[2], m);
      };
      worst_angle = std::min(worst_angle, slack(Metric::CosineOfDifferences));
      worst_euclid = std::min(worst_euclid, slack(Metric::EuclideanOfDifferences));
    }
    const bool ok = asym == 0.0 && skipped == 0 && worst_angle >= -1e-9 && worst_euclid >= -1e-9;
    return Outcome{ok, fmt("max|sim(p,q)-sim(q,p)|=%g over 2x1000 samples; min triangle slack "
                           "angular=%.3g euclidean=%.3g over 1000 triads",
                           asym, worst_angle, worst_euclid)};
  });

  criterion(6, "format fidelity", 1.0, [] {
    const auto space = testsupport::random_space(6, 50, 20);
    std::stringstream bin, txt;
    write_binary(space, bin);
    write_text(space, txt);
    const bool bin_ok = load_binary(bin).space.bit_identical(space);
    const bool txt_ok = load_text(txt).space.bit_identical(space);
    const std::string tokyo = "\xe6\x9d\xb1\xe4\xba\xac";
    const std::string cafe = "caf\xc3\xa9";
    std::istringstream hand("3 2\n" + tokyo + " " + le_floats({1.5f, -2.25f}) + "\n" + cafe +
                            " " + le_floats({0.1f, 3e-8f}) + "\nx " + le_floats({-0.0f, 65504.0f}) +
                            "\n");
    const auto loaded = load_binary(hand).space;
    const bool hand_ok = loaded.size() == 3 && loaded.token(0) == tokyo &&
                         loaded.lookup(tokyo) == Vector{1.5, -2.25} &&
                         loaded.row(1)[0] == 0.1f && loaded.row(1)[1] == 3e-8f &&
                         std::signbit(loaded.row(2)[0]) && loaded.row(2)[1] == 65504.0f;
    return Outcome{bin_ok && txt_ok && hand_ok,
                   fmt("binary round trip %s, text round trip %s, hand-built 3-token file %s",
                       bin_ok ? "bit-exact" : "DIFFERS", txt_ok ? "bit-exact" : "DIFFERS",
                       hand_ok ? "correct" : "WRONG")};
  });

  criterion(7, "statistics oracle equivalence", 10.0, [] {
    std::mt19937_64 gen(77);
    std::normal_distribution<double> normal;
    double worst_r = 0, worst_t = 0, worst_df = 0, worst_f = 0;
    for (int f = 0; f < 100; ++f) {
      const std::size_t n = 3 + gen() % 100;
      std::vector<double> x(n), y(n);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = normal(gen) * (1 + f % 4) + f;
        y[i] = 0.3 * x[i] + normal(gen);
      }
      worst_r = std::max(worst_r, std::fabs(stats::pearson(x, y).r - oracle::pearson(x, y)));
      std::vector<double> g1(2 + gen() % 40), g2(2 + gen() % 40);
      for (auto& v : g1) v = 3 + normal(gen);
      for (auto& v : g2) v = 3.5 + 2 * normal(gen);
      const auto w = stats::welch_t_test(g1, g2);
      const auto ow = oracle::welch(g1, g2);
      worst_t = std::max(worst_t, std::fabs(w.t - ow.t));
      worst_df = std::max(worst_df, std::fabs(w.df - ow.df));
      std::vector<std::vector<double>> groups(2 + gen() % 6);
      for (std::size_t g = 0; g < groups.size(); ++g) {
        groups[g].resize(2 + gen() % 25);
        for (auto& v : groups[g]) v = 0.2 * g + normal(gen);
      }
      const auto a = stats::anova_oneway(groups);
      worst_f = std::max(worst_f, std::fabs(a.F - oracle::anova(groups).F) / std::max(1.0, a.F));
    }
    const double tc = stats::t_cdf(1.96, 1e6);
    const double table = stats::studentized_range_critical(3, 33, 0.05);
    const double quad = oracle::studentized_range_critical(3, 33, 0.05);
    const bool ok = worst_r <= 1e-9 && worst_t <= 1e-9 && worst_df <= 1e-9 && worst_f <= 1e-9 &&
                    std::fabs(tc - 0.975) <= 1e-3 && table >= 3.46 && table <= 3.50 &&
                    quad >= 3.46 && quad <= 3.50 && std::fabs(table - quad) <= 0.005;
    return Outcome{ok, fmt("max dev pearson=%.2e welch t=%.2e df=%.2e anova F=%.2e; "
                           "t_cdf(1.96, 1e6)=%.6f; q(3,33,.05) table=%.4f quadrature=%.4f",
                           worst_r, worst_t, worst_df, worst_f, tc, table, quad)};
  });

  criterion(8, "PCA correctness", 5.0, [] {
    std::mt19937_64 gen(88);
    std::normal_distribution<double> normal;
    const std::size_t n = 60, d = 300;
    std::vector<Vector> pts(n, Vector(d));
    for (auto& v : pts) {
      for (std::size_t j = 0; j < d; ++j) v[j] = normal(gen) * (1.0 + 3.0 / (1.0 + j));
    }
    const auto fit = fit_pca(pts);
    Vector mean(d, 0.0);
    for (const auto& v : pts) {
      for (std::size_t j = 0; j < d; ++j) mean[j] += v[j];
    }
    for (auto& m : mean) m /= static_cast<double>(n);
    std::vector<double> cov(d * d, 0.0);
    for (const auto& v : pts) {
      for (std::size_t a = 0; a < d; ++a) {
        const double da = v[a] - mean[a];
        for (std::size_t b = 0; b < d; ++b) cov[a * d + b] += da * (v[b] - mean[b]);
      }
    }
    for (auto& c : cov) c /= static_cast<double>(n - 1);
    const auto eig = oracle::jacobi(cov, d);
    const double angle = principal_angle(fit.axes, {eig.vectors[0], eig.vectors[1]});

    Vector u(d);
    for (auto& x : u) x = normal(gen);
    double un = 0;
    for (double x : u) un += x * x;
    un = std::sqrt(un);
    for (auto& x : u) x /= un;
    std::vector<Vector> line;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = normal(gen);
      Vector p(d);
      for (std::size_t j = 0; j < d; ++j) p[j] = 2.0 + t * u[j];
      line.push_back(p);
    }
    const auto rank1 = fit_pca(line);
    double align = 0;
    for (std::size_t j = 0; j < d; ++j) align += rank1.axes[0][j] * u[j];
    const double axis_err = 1.0 - std::fabs(align);
    const bool ok = angle <= 1e-6 && rank1.degenerate && axis_err <= 1e-12 &&
                    rank1.explained_variance[1] == 0.0;
    return Outcome{ok, fmt("60x300 principal angle vs Jacobi oracle %.2e rad; rank-1 degenerate=%d "
                           "1-|cos(axis1,u)|=%.2e",
                           angle, rank1.degenerate, axis_err)};
  });

  criterion(9, "pipeline recovery", 10.0, [] {
    testsupport::TempDir dir("acceptance9");
    const std::vector<double> planted{1.0, 0.8, 0.5, 0.2, 0.0, -0.2, -0.5, -0.8, 0.0, 0.0};
    const auto p = testsupport::write_planted_eval(dir, 909, planted);
    const auto r = testsupport::run_cli({"eval", "-e", p.embeddings, "--comparisons", p.comparisons,
                                         "--ratings", p.ratings, "--output-format", "json"});
    if (r.code != 0) return Outcome{false, "eval exited " + std::to_string(r.code) + ": " + r.err};
    const auto j = nlohmann::json::parse(r.out);
    bool ok = j["per_type"].size() == 10;
    double worst = 0;
    std::string rs;
    for (std::size_t t = 0; ok && t < 10; ++t) {
      const auto& row = j["per_type"][t];
      const double got = row["r"].get<double>();
      ok = ok && row["n"] == 435;
      worst = std::max(worst, std::fabs(got - planted[t]));
      rs += fmt("%s%.3f", t ? " " : "", got);
    }
    ok = ok && worst <= 0.05;
    return Outcome{ok, fmt("recovered r = [%s], max |r - planted| = %.4f at n=435", rs.c_str(), worst)};
  });

  criterion(10, "CLI determinism", 0.0, [] {
    testsupport::CliWorkspace ws("acceptance10");
    const auto one = testsupport::run_every_subcommand(ws, 1, ws.dir.file("t1"));
    const auto eight = testsupport::run_every_subcommand(ws, 8, ws.dir.file("t8"));
    const auto again = testsupport::run_every_subcommand(ws, 1, ws.dir.file("t1b"));
    std::size_t identical = 0;
    std::string bad;
    for (const auto& [name, res] : one) {
      const bool same = res.first == 0 && !res.second.empty() &&
                        res.second == eight.at(name).second && res.second == again.at(name).second;
      identical += same ? 1 : 0;
      if (!same) bad += " " + name;
    }
    return Outcome{identical == one.size(),
                   fmt("%zu/%zu subcommand runs byte-identical across repeats and --threads 1/8%s",
                       identical, one.size(), bad.empty() ? "" : (" (differs:" + bad + ")").c_str())};
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
