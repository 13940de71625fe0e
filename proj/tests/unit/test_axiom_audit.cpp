#include <doctest.h>

#include <random>

#include "analogy/axiom_audit.hpp"
#include "analogy/error.hpp"
#include "analogy/vector_core.hpp"
#include "expect_error.hpp"
#include "fixtures.hpp"

using namespace analogy;
using testsupport::kind_of;

namespace {

Comparison ordered(std::string id, std::vector<int> left, std::vector<int> right) {
  Comparison c;
  c.id = std::move(id);
  c.ratings_left_first = std::move(left);
  c.ratings_right_first = std::move(right);
  return c;
}

Triad triad_with(std::array<std::vector<int>, 3> ratings) {
  Triad t;
  t.id = "t";
  t.pairs = {WordPair("a", "b"), WordPair("c", "d"), WordPair("e", "f")};
  t.ratings = std::move(ratings);
  return t;
}

}  // namespace

TEST_CASE("identical orders give no significant comparisons") {
  std::vector<Comparison> cs;
  for (int i = 0; i < 40; ++i) cs.push_back(ordered("c" + std::to_string(i), {3, 4, 5}, {5, 4, 3}));
  const auto r = symmetry_audit(cs);
  CHECK(r.n_significant == 0);
  CHECK(r.binomial.p_one_sided_ge == 1.0);
}

TEST_CASE("77 strong violations among 500") {
  const auto r = symmetry_audit(testsupport::symmetry_fixture(500, 77));
  CHECK(r.n_significant == 77);
  CHECK(r.expected_under_null == doctest::Approx(25.0));
  CHECK(r.binomial.p_one_sided_ge < 0.001);
}

TEST_CASE("constant order groups") {
  const auto r = symmetry_audit({ordered("a", {4, 4}, {4, 4}), ordered("b", {4, 4}, {5, 5})});
  CHECK_FALSE(r.per_comparison[0].significant);
  CHECK(r.per_comparison[1].significant);
  CHECK_FALSE(r.per_comparison[1].test.has_value());
  CHECK(kind_of([] { symmetry_audit({ordered("c", {4}, {4, 5})}); }) ==
        ErrorKind::InsufficientRatings);
}

TEST_CASE("calibration: same distribution in both orders") {
  std::mt19937_64 gen(123);
  std::uniform_int_distribution<int> rating(1, 7);
  std::vector<Comparison> cs;
  for (int i = 0; i < 500; ++i) {
    std::vector<int> l(10), r(10);
    for (auto& x : l) x = rating(gen);
    for (auto& x : r) x = rating(gen);
    cs.push_back(ordered("c" + std::to_string(i), l, r));
  }
  for (unsigned threads : {1u, 4u}) {
    const auto audit = symmetry_audit(cs, 0.05, stats::TTestVariant::Welch, threads);
    CHECK(audit.binomial.p_one_sided_ge >= 0.05);
  }
}

TEST_CASE("model symmetry is exact") {
  const auto space = testsupport::random_space(14, 300, 25);
  for (auto m : {Metric::CosineOfDifferences, Metric::EuclideanOfDifferences}) {
    const auto r = model_symmetry_check(space, m, 1000, 7);
    CHECK(r.max_abs_asymmetry == 0.0);
    CHECK(r.n_samples == 1000);
    const auto empty = model_symmetry_check(space, m, 0, 7);
    CHECK(empty.empty_sample);
    CHECK(empty.max_abs_asymmetry == 0.0);
  }
  // Near-parallel difference vectors.
  std::vector<float> data;
  std::vector<std::string> tokens;
  for (int i = 0; i < 12; ++i) {
    tokens.push_back("n" + std::to_string(i));
    data.insert(data.end(), {1.0f + i * 1e-6f, 1.0f, 1e-7f * i});
  }
  const EmbeddingSpace tight(tokens, 3, data);
  for (auto m : {Metric::CosineOfDifferences, Metric::EuclideanOfDifferences}) {
    CHECK(model_symmetry_check(tight, m, 1000, 1).max_abs_asymmetry == 0.0);
  }
}

TEST_CASE("triad patterns") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::array<std::vector<int>, 3> r;
  const double centres[3] = {5.4, 5.4, 3.0};
  for (int g = 0; g < 3; ++g) {
    for (int i = 0; i < 20; ++i) {
      r[g].push_back(std::clamp(static_cast<int>(std::lround(centres[g] + noise(gen))), 1, 7));
    }
  }
  const auto violation = triad_audit_human({triad_with(r)});
  CHECK(violation.per_triad[0].pattern == TriadPattern::ExpectedViolation);
  CHECK(violation.n_expected_pattern == 1);

  std::vector<int> same{3, 4, 5, 4, 3, 5};
  const auto flat = triad_audit_human({triad_with({same, same, same})});
  CHECK(flat.per_triad[0].pattern == TriadPattern::Other);
  CHECK(flat.per_triad[0].anova.F == doctest::Approx(0.0).epsilon(1e-12));

  // Reversed direction: 1-3 rated highest is not the expected pattern.
  const auto reversed = triad_audit_human({triad_with({r[2], r[2], r[0]})});
  CHECK(reversed.per_triad[0].pattern == TriadPattern::Other);

  try {
    triad_audit_human({triad_with({std::vector<int>{4, 4}, std::vector<int>{4, 4}, std::vector<int>{4, 4}})});
    FAIL("expected DegenerateGroups");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateGroups);
    CHECK(e.subject() == "t");
  }
}

TEST_CASE("twelve-triad fixture") {
  const auto fx = testsupport::triad_fixture(21, 12);
  const auto human = triad_audit_human(fx.triads);
  CHECK(human.per_triad.size() == 12);
  CHECK(human.n_expected_pattern == 6);
  REQUIRE(human.overall.has_value());
  CHECK(human.overall->df_between == 2);
  CHECK(human.overall->df_within == 33);
  for (auto m : {Metric::CosineOfDifferences, Metric::EuclideanOfDifferences}) {
    const auto model = triad_audit_model(fx.space, fx.triads, m);
    CHECK(model.all_triangles_hold);
    REQUIRE(model.anova.has_value());
    CHECK(model.anova->group_sizes == std::vector<std::size_t>{12, 12, 12});
    CHECK(model.anova->df_between == 2);
    CHECK(model.anova->df_within == 33);
  }
}

TEST_CASE("exact parallelogram triads give F = 0") {
  std::vector<std::string> tokens;
  std::vector<float> data;
  std::vector<Triad> triads;
  for (int t = 0; t < 4; ++t) {
    Triad triad;
    triad.id = "p" + std::to_string(t);
    for (int p = 0; p < 3; ++p) {
      const std::string a = triad.id + "a" + std::to_string(p), b = triad.id + "b" + std::to_string(p);
      tokens.push_back(a);
      tokens.push_back(b);
      const float base = static_cast<float>(t * 3 + p);
      data.insert(data.end(), {base, 2.0f * base, 1.0f});
      data.insert(data.end(), {base + 2.0f, 2.0f * base, 1.0f});  // every difference is (2,0,0)
      triad.pairs[static_cast<std::size_t>(p)] = WordPair(a, b);
    }
    triads.push_back(triad);
  }
  const EmbeddingSpace space(tokens, 3, data);
  for (auto m : {Metric::CosineOfDifferences, Metric::EuclideanOfDifferences}) {
    const auto model = triad_audit_model(space, triads, m);
    REQUIRE(model.anova.has_value());
    CHECK(model.anova->F == 0.0);
    for (const auto& item : model.per_triad) CHECK(item.similarity[0] == 1.0);
  }
}

TEST_CASE("property: triangle inequality on 1,000 random triads") {
  const auto space = testsupport::random_space(15, 200, 20);
  std::mt19937_64 gen(16);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    std::array<Vector, 3> r;
    for (auto& v : r) {
      const auto i = gen() % 200;
      const auto j = (i + 1 + gen() % 199) % 200;
      v = difference(space.vector_at(j), space.vector_at(i));
    }
    for (auto m : {Metric::CosineOfDifferences, Metric::EuclideanOfDifferences}) {
      const double slack = relation_distance(r[0], r[1], m) + relation_distance(r[1], r[2], m) -
                           relation_distance(r[0], r[2], m);
      worst = std::min(worst, slack);
    }
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("angle helper") {
  CHECK(relation_distance(Vector{1, 0}, Vector{0, 2}, Metric::CosineOfDifferences) ==
        doctest::Approx(M_PI / 2).epsilon(1e-15));
  CHECK(relation_distance(Vector{1, 0}, Vector{-3, 0}, Metric::CosineOfDifferences) ==
        doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(relation_distance(Vector{1, 1}, Vector{2, 2}, Metric::CosineOfDifferences) == 0.0);
  CHECK(kind_of([] { relation_distance(Vector{0, 0}, Vector{1, 1}, Metric::CosineOfDifferences); }) ==
        ErrorKind::ZeroDifference);
}
