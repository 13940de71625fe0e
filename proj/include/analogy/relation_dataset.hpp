#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "analogy/types.hpp"

namespace analogy {

struct MemberPair {
  WordPair pair;
  std::optional<double> prototypicality;
};

struct Subtype {
  std::string id;  // e.g. "1a"; unique within its type
  std::string name;
  bool representative = false;
  std::vector<MemberPair> pairs;
};

struct RelationType {
  int id = 0;  // 1..10
  std::string name;
  std::vector<Subtype> subtypes;

  /// The designated subtype, or the first one listed when none is flagged.
  const Subtype& representative() const;
};

/// Relation types, each with subtypes, each with member word pairs.
struct RelationTaxonomy {
  std::vector<RelationType> types;

  const RelationType* find_type(int id) const;
  std::size_t subtype_count() const;
  std::size_t pair_count() const;
};

struct TaxonomyLoad {
  RelationTaxonomy taxonomy;
  /// "type/subtype word1:word2" for each repeated row that was dropped.
  std::vector<std::string> duplicate_pairs;
};

/// CSV with header type_id,type_name,subtype_id,subtype_name,word1,word2 and
/// optional prototypicality and representative columns. Rows are grouped in
/// first-seen order. Throws Error(MalformedRow) naming the line.
TaxonomyLoad load_taxonomy(std::istream& in);

struct SubtypeRef {
  int type_id = 0;
  std::string subtype_id;

  /// "type_id/subtype_id"
  std::string label() const;
  static SubtypeRef parse(const std::string& label);

  friend bool operator==(const SubtypeRef&, const SubtypeRef&) = default;
  friend auto operator<=>(const SubtypeRef&, const SubtypeRef&) = default;
};

enum class ComparisonKind { WithinSubtype, BetweenSubtype, BetweenType };

std::string to_string(ComparisonKind kind);
ComparisonKind parse_comparison_kind(const std::string& text);

/// Two word pairs to be judged for relational similarity. left/right are in
/// taxonomy order; presentation order is carried by the ratings instead.
struct Comparison {
  std::string id;
  WordPair left;
  WordPair right;
  ComparisonKind kind = ComparisonKind::WithinSubtype;
  SubtypeRef left_subtype;
  SubtypeRef right_subtype;
  /// Every rating, whatever its presentation order.
  std::vector<int> ratings;
  /// Ratings given when the left pair was shown first / the right pair first.
  std::vector<int> ratings_left_first;
  std::vector<int> ratings_right_first;

  /// True when kind agrees with the two subtype references.
  bool consistent() const;
};

struct GenerationParams {
  std::size_t pairs_per_subtype = 30;
  std::size_t n_between_subtype = 925;
  std::size_t n_between_type = 925;
};

/// Builds the rating design from the representative subtype of every type.
///
/// Each representative contributes a seeded sample of pairs_per_subtype member
/// pairs and all unordered comparisons among them. Between-subtype comparisons
/// pair a sampled representative pair with any member of another subtype of
/// the same type; between-type comparisons pair sampled representative pairs
/// from two different types. Both are drawn uniformly without replacement.
/// Output is a pure function of (taxonomy, seed, params).
///
/// Throws InsufficientPairs or RequestExceedsPopulation.
std::vector<Comparison> generate_comparisons(const RelationTaxonomy& taxonomy, std::uint64_t seed,
                                             const GenerationParams& params = {});

/// id,kind,left1,left2,right1,right2,left_subtype,right_subtype
void write_comparisons(std::ostream& out, const std::vector<Comparison>& comparisons);
std::vector<Comparison> read_comparisons(std::istream& in);

struct RatingsLoad {
  std::vector<Comparison> comparisons;
  std::vector<std::string> unknown_ids;  // distinct, in first-seen order
  std::size_t rows = 0;
};

/// CSV with header comparison_id,rating and optional presentation_order
/// (left_first | right_first). Ratings must be integers in 1..7; throws
/// Error(RatingOutOfRange) otherwise.
RatingsLoad load_ratings(std::istream& in, std::vector<Comparison> comparisons);

/// Arithmetic mean of all ratings. Throws Error(NoRatings).
double mean_rating(const Comparison& comparison);

struct RatingSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample sd (n - 1); 0 when fewer than two ratings
  std::size_t count = 0;  // individual ratings pooled across comparisons
  std::size_t comparisons = 0;
};

/// Pools individual ratings per comparison kind. Kinds without any ratings
/// are omitted.
std::map<ComparisonKind, RatingSummary> summarize(const std::vector<Comparison>& comparisons);

enum class AnalogyType { OneTwo = 0, TwoThree = 1, OneThree = 2 };

std::string to_string(AnalogyType type);
AnalogyType parse_analogy_type(const std::string& text);

/// Three word pairs probing the triangle inequality through the analogies
/// 1-2, 2-3 and 1-3.
struct Triad {
  std::string id;
  std::array<WordPair, 3> pairs;
  /// Indexed by AnalogyType.
  std::array<std::vector<int>, 3> ratings;

  /// The two pairs forming an analogy of the given type.
  std::pair<const WordPair&, const WordPair&> analogy(AnalogyType type) const;
};

/// triad_id,pair1_word1,pair1_word2,pair2_word1,pair2_word2,pair3_word1,pair3_word2
std::vector<Triad> read_triads(std::istream& in);

/// triad_id,analogy_type,rating with analogy_type one of 1-2, 2-3, 1-3.
/// Unknown triad ids are an error.
std::vector<Triad> load_triad_ratings(std::istream& in, std::vector<Triad> triads);

}  // namespace analogy
