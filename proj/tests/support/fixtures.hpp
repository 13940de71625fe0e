#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "analogy/embedding_store.hpp"
#include "analogy/relation_dataset.hpp"

namespace testsupport {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

// Taxonomy CSV: n_types types, each with n_subtypes subtypes of n_pairs pairs.
// Words are "t{type}s{sub}p{i}a" / "...b".
std::string taxonomy_csv(int n_types, int n_subtypes, int n_pairs);
analogy::RelationTaxonomy make_taxonomy(int n_types, int n_subtypes, int n_pairs);

// Gaussian space with tokens prefix0..prefixN-1.
analogy::EmbeddingSpace random_space(std::uint64_t seed, std::size_t n_tokens, std::size_t dim,
                                     const std::string& prefix = "w");

// Gaussian rows for the given tokens.
analogy::EmbeddingSpace space_for(const std::vector<std::string>& tokens, std::size_t dim,
                                  std::uint64_t seed);

struct ParallelogramFixture {
  analogy::EmbeddingSpace space;
  std::vector<std::array<std::string, 4>> quads;  // a, b, c, d with d = b - a + c
};

// Small-integer vectors so that b - a + c reproduces d exactly in floating point.
ParallelogramFixture parallelogram_fixture(std::uint64_t seed, std::size_t n_quads,
                                           std::size_t dim, std::size_t n_distractors);

// Order-tagged ratings for n comparisons, exactly n_violating of which differ
// sharply between presentation orders. The rest have identical order groups.
std::vector<analogy::Comparison> symmetry_fixture(std::size_t n, std::size_t n_violating);
std::string symmetry_ratings_csv(const std::vector<analogy::Comparison>& comparisons);

struct PlantedEval {
  std::string embeddings;
  std::string comparisons;
  std::string ratings;
  std::vector<double> planted;  // per type, type ids 1..10
};

// Ten types with 30 pairs each and all 435 within-subtype comparisons per type.
// Mean ratings are planted so that their sample correlation with the model's
// cosine score equals the requested value before integer rounding.
PlantedEval write_planted_eval(const TempDir& dir, std::uint64_t seed,
                               const std::vector<double>& planted);

// Twelve triads over a random space with integer ratings, 12 per analogy type.
struct TriadFixture {
  analogy::EmbeddingSpace space;
  std::vector<analogy::Triad> triads;
};
TriadFixture triad_fixture(std::uint64_t seed, std::size_t n_triads);
std::string triads_csv(const std::vector<analogy::Triad>& triads);
std::string triad_ratings_csv(const std::vector<analogy::Triad>& triads);

std::string text_embeddings(const analogy::EmbeddingSpace& space);

}  // namespace testsupport
