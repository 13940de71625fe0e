#include <doctest.h>

#include <random>

#include "analogy/analogy_engine.hpp"
#include "analogy/error.hpp"
#include "expect_error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace analogy;
using testsupport::kind_of;

namespace {

EmbeddingSpace royal() {
  return EmbeddingSpace({"king", "queen", "man", "woman"}, 2, {1, 1, 1, 2, 3, 1, 3, 2});
}

}  // namespace

TEST_CASE("exact parallelogram") {
  const auto result = complete_parallelogram(royal(), {"king", "queen", "man", 1});
  REQUIRE(result.candidates.size() == 1);
  CHECK(result.candidates[0].token == "woman");
  CHECK(result.candidates[0].score == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(result.target == Vector{3, 2});
  CHECK(result.rank_of.at("woman") == 1);
  CHECK(rank_of_candidate(royal(), {"king", "queen", "man"}, "woman") == 1);
}

TEST_CASE("a:a::c:? returns c when inputs are kept") {
  const auto result = complete_parallelogram(royal(), {"king", "king", "man", 1, false});
  CHECK(result.candidates[0].token == "man");
}

TEST_CASE("excluded candidates and missing tokens") {
  CHECK(kind_of([] { rank_of_candidate(royal(), {"king", "queen", "man"}, "king"); }) ==
        ErrorKind::ExcludedCandidate);
  CHECK(kind_of([] { complete_parallelogram(royal(), {"king", "prince", "man"}); }) ==
        ErrorKind::MissingToken);
  const EmbeddingSpace flat({"a", "b", "c"}, 2, {1, 0, 2, 0, -1, 0});
  CHECK(kind_of([&] { complete_parallelogram(flat, {"a", "b", "c"}); }) == ErrorKind::ZeroVector);
}

TEST_CASE("100 constructed parallelograms are all solved") {
  const auto fx = testsupport::parallelogram_fixture(2024, 100, 20, 500);
  int correct = 0;
  for (const auto& q : fx.quads) {
    const auto r = complete_parallelogram(fx.space, {q[0], q[1], q[2], 1});
    correct += r.candidates[0].token == q[3] ? 1 : 0;
  }
  CHECK(correct == 100);
}

TEST_CASE("property: inputs never returned when excluded; rank agrees with brute scan") {
  const auto space = testsupport::random_space(77, 400, 10);
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < space.size(); ++r) rows.push_back(space.vector_at(r));
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t ia = gen() % 400, ib = gen() % 400, ic = gen() % 400;
    if (ia == ib || ib == ic || ia == ic) continue;
    AnalogyQuery q{space.token(ia), space.token(ib), space.token(ic), 10};
    const auto result = complete_parallelogram(space, q, 1 + trial % 3);
    for (const auto& n : result.candidates) {
      CHECK(n.token != q.a);
      CHECK(n.token != q.b);
      CHECK(n.token != q.c);
    }
    std::vector<bool> excluded(space.size(), false);
    excluded[ia] = excluded[ib] = excluded[ic] = true;
    const auto order = oracle::brute_top_k(rows, result.target, space.size(), excluded);
    const std::size_t pick = gen() % order.size();
    CHECK(rank_of_candidate(space, q, space.token(order[pick])) == pick + 1);
  }
}

TEST_CASE("translation leaves b - a + c - d unchanged") {
  const auto space = testsupport::random_space(8, 30, 6);
  std::vector<float> shifted(space.data().begin(), space.data().end());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += (i % 6 == 0) ? 0.5f : -0.25f;
  const EmbeddingSpace moved(space.tokens(), 6, shifted);
  auto residual = [](const EmbeddingSpace& s, std::size_t d) {
    Vector out(6);
    for (std::size_t j = 0; j < 6; ++j) {
      out[j] = static_cast<double>(s.row(1)[j]) - s.row(0)[j] + s.row(2)[j] - s.row(d)[j];
    }
    return out;
  };
  for (std::size_t d = 3; d < 30; ++d) {
    const auto a = residual(space, d);
    const auto b = residual(moved, d);
    for (std::size_t j = 0; j < 6; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-6));
  }
}
