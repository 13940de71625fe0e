#include "analogy/relation_dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include "analogy/csv.hpp"
#include "analogy/error.hpp"
#include "analogy/rng.hpp"

namespace analogy {

namespace {

std::string line_ref(const csv::Record& rec) { return "line " + std::to_string(rec.line); }

[[noreturn]] void malformed(const csv::Record& rec, const std::string& why) {
  throw Error(ErrorKind::MalformedRow, why, line_ref(rec));
}

const std::string& field(const csv::Record& rec, std::size_t index, const char* name) {
  if (index >= rec.fields.size()) {
    malformed(rec, std::string("missing field ") + name);
  }
  return rec.fields[index];
}

const std::string& nonempty_field(const csv::Record& rec, std::size_t index, const char* name) {
  const auto& f = field(rec, index, name);
  if (f.empty()) {
    malformed(rec, std::string("empty field ") + name);
  }
  return f;
}

template <typename Int>
bool parse_int(const std::string& s, Int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

WordPair make_pair_or_malformed(const csv::Record& rec, const std::string& a, const std::string& b) {
  try {
    return WordPair(a, b);
  } catch (const Error& e) {
    malformed(rec, e.detail());
  }
}

bool parse_flag(const std::string& s, bool& out) {
  std::string v = s;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v.empty() || v == "0" || v == "false" || v == "no") {
    out = false;
    return true;
  }
  if (v == "1" || v == "true" || v == "yes") {
    out = true;
    return true;
  }
  return false;
}

// Reference to a member pair by position in the taxonomy.
struct PairSlot {
  std::size_t type_pos;
  std::size_t subtype_pos;
  std::size_t pair_pos;

  auto operator<=>(const PairSlot&) const = default;
};

std::size_t representative_pos(const RelationType& type) {
  for (std::size_t i = 0; i < type.subtypes.size(); ++i) {
    if (type.subtypes[i].representative) {
      return i;
    }
  }
  return 0;
}

std::string pad_id(std::size_t n, std::size_t width) {
  std::string digits = std::to_string(n);
  if (digits.size() < width) {
    digits.insert(0, width - digits.size(), '0');
  }
  return "c" + digits;
}

}  // namespace

// ---------------------------------------------------------------------------
// Taxonomy

const Subtype& RelationType::representative() const {
  if (subtypes.empty()) {
    throw Error(ErrorKind::InvalidArgument, "relation type has no subtypes", std::to_string(id));
  }
  return subtypes[representative_pos(*this)];
}

const RelationType* RelationTaxonomy::find_type(int id) const {
  for (const auto& t : types) {
    if (t.id == id) {
      return &t;
    }
  }
  return nullptr;
}

std::size_t RelationTaxonomy::subtype_count() const {
  std::size_t n = 0;
  for (const auto& t : types) {
    n += t.subtypes.size();
  }
  return n;
}

std::size_t RelationTaxonomy::pair_count() const {
  std::size_t n = 0;
  for (const auto& t : types) {
    for (const auto& s : t.subtypes) {
      n += s.pairs.size();
    }
  }
  return n;
}

TaxonomyLoad load_taxonomy(std::istream& in) {
  const auto records = csv::read(in);
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "taxonomy file has no header");
  }
  const csv::Header header(records.front());
  const auto c_type_id = header.require("type_id");
  const auto c_type_name = header.require("type_name");
  const auto c_sub_id = header.require("subtype_id");
  const auto c_sub_name = header.require("subtype_name");
  const auto c_w1 = header.require("word1");
  const auto c_w2 = header.require("word2");
  const auto c_proto = header.find("prototypicality");
  const auto c_rep = header.find("representative");

  TaxonomyLoad out;
  auto& types = out.taxonomy.types;
  std::set<std::tuple<int, std::string, WordPair>> seen_pairs;

  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    int type_id = 0;
    if (!parse_int(nonempty_field(rec, c_type_id, "type_id"), type_id) || type_id < 1 ||
        type_id > 10) {
      malformed(rec, "type_id must be an integer in 1..10");
    }
    const auto& type_name = nonempty_field(rec, c_type_name, "type_name");
    const auto& sub_id = nonempty_field(rec, c_sub_id, "subtype_id");
    const auto& sub_name = nonempty_field(rec, c_sub_name, "subtype_name");
    WordPair pair = make_pair_or_malformed(rec, nonempty_field(rec, c_w1, "word1"),
                                           nonempty_field(rec, c_w2, "word2"));
    std::optional<double> proto;
    if (c_proto != csv::Header::npos && c_proto < rec.fields.size() &&
        !rec.fields[c_proto].empty()) {
      double v = 0.0;
      if (!parse_double(rec.fields[c_proto], v)) {
        malformed(rec, "prototypicality is not a number");
      }
      proto = v;
    }
    bool rep = false;
    if (c_rep != csv::Header::npos && c_rep < rec.fields.size() &&
        !parse_flag(rec.fields[c_rep], rep)) {
      malformed(rec, "representative must be 0/1, true/false or yes/no");
    }

    auto type_it = std::find_if(types.begin(), types.end(),
                                [&](const RelationType& t) { return t.id == type_id; });
    if (type_it == types.end()) {
      types.push_back(RelationType{type_id, type_name, {}});
      type_it = std::prev(types.end());
    } else if (type_it->name != type_name) {
      malformed(rec, "type " + std::to_string(type_id) + " already named \"" + type_it->name + "\"");
    }
    auto& subtypes = type_it->subtypes;
    auto sub_it = std::find_if(subtypes.begin(), subtypes.end(),
                               [&](const Subtype& s) { return s.id == sub_id; });
    if (sub_it == subtypes.end()) {
      subtypes.push_back(Subtype{sub_id, sub_name, false, {}});
      sub_it = std::prev(subtypes.end());
    } else if (sub_it->name != sub_name) {
      malformed(rec, "subtype " + sub_id + " already named \"" + sub_it->name + "\"");
    }
    if (rep && !sub_it->representative) {
      for (const auto& s : subtypes) {
        if (s.representative) {
          malformed(rec, "type " + std::to_string(type_id) + " already has representative subtype " +
                             s.id);
        }
      }
      sub_it->representative = true;
    }
    if (!seen_pairs.emplace(type_id, sub_id, pair).second) {
      out.duplicate_pairs.push_back(std::to_string(type_id) + "/" + sub_id + " " + pair.label());
      continue;
    }
    sub_it->pairs.push_back(MemberPair{std::move(pair), proto});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparisons

std::string SubtypeRef::label() const { return std::to_string(type_id) + "/" + subtype_id; }

SubtypeRef SubtypeRef::parse(const std::string& label) {
  const auto slash = label.find('/');
  SubtypeRef ref;
  if (slash == std::string::npos || slash + 1 >= label.size() ||
      !parse_int(label.substr(0, slash), ref.type_id)) {
    throw Error(ErrorKind::MalformedRow, "subtype reference must look like type_id/subtype_id",
                label);
  }
  ref.subtype_id = label.substr(slash + 1);
  return ref;
}

std::string to_string(ComparisonKind kind) {
  switch (kind) {
    case ComparisonKind::WithinSubtype: return "within_subtype";
    case ComparisonKind::BetweenSubtype: return "between_subtype";
    case ComparisonKind::BetweenType: return "between_type";
  }
  return "unknown";
}

ComparisonKind parse_comparison_kind(const std::string& text) {
  if (text == "within_subtype") return ComparisonKind::WithinSubtype;
  if (text == "between_subtype") return ComparisonKind::BetweenSubtype;
  if (text == "between_type") return ComparisonKind::BetweenType;
  throw Error(ErrorKind::MalformedRow, "unknown comparison kind", text);
}

bool Comparison::consistent() const {
  switch (kind) {
    case ComparisonKind::WithinSubtype:
      return left_subtype == right_subtype;
    case ComparisonKind::BetweenSubtype:
      return left_subtype.type_id == right_subtype.type_id &&
             left_subtype.subtype_id != right_subtype.subtype_id;
    case ComparisonKind::BetweenType:
      return left_subtype.type_id != right_subtype.type_id;
  }
  return false;
}

std::vector<Comparison> generate_comparisons(const RelationTaxonomy& taxonomy, std::uint64_t seed,
                                             const GenerationParams& params) {
  if (params.pairs_per_subtype == 0) {
    throw Error(ErrorKind::InvalidArgument, "pairs_per_subtype must be at least 1");
  }
  Rng rng(seed);
  const auto& types = taxonomy.types;

  auto pair_at = [&](const PairSlot& s) -> const WordPair& {
    return types[s.type_pos].subtypes[s.subtype_pos].pairs[s.pair_pos].pair;
  };
  auto ref_at = [&](const PairSlot& s) {
    return SubtypeRef{types[s.type_pos].id, types[s.type_pos].subtypes[s.subtype_pos].id};
  };

  // Seeded sample of each representative subtype, in taxonomy order.
  std::vector<std::vector<PairSlot>> sampled(types.size());
  for (std::size_t t = 0; t < types.size(); ++t) {
    if (types[t].subtypes.empty()) {
      continue;
    }
    const std::size_t rep = representative_pos(types[t]);
    const auto& sub = types[t].subtypes[rep];
    if (sub.pairs.size() < params.pairs_per_subtype) {
      throw Error(ErrorKind::InsufficientPairs,
                  "representative subtype has " + std::to_string(sub.pairs.size()) +
                      " pairs, need " + std::to_string(params.pairs_per_subtype),
                  std::to_string(types[t].id) + "/" + sub.id);
    }
    for (std::size_t p : sample_without_replacement(rng, sub.pairs.size(), params.pairs_per_subtype)) {
      sampled[t].push_back(PairSlot{t, rep, p});
    }
  }

  struct Draft {
    PairSlot left;
    PairSlot right;
    ComparisonKind kind;
  };
  std::vector<Draft> drafts;

  auto ordered = [](const PairSlot& a, const PairSlot& b, ComparisonKind kind) {
    return a < b ? Draft{a, b, kind} : Draft{b, a, kind};
  };

  for (const auto& group : sampled) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        drafts.push_back(Draft{group[i], group[j], ComparisonKind::WithinSubtype});
      }
    }
  }

  std::vector<Draft> between_sub_pop;
  for (std::size_t t = 0; t < types.size(); ++t) {
    for (const auto& rep_slot : sampled[t]) {
      for (std::size_t s = 0; s < types[t].subtypes.size(); ++s) {
        if (s == rep_slot.subtype_pos) {
          continue;
        }
        for (std::size_t p = 0; p < types[t].subtypes[s].pairs.size(); ++p) {
          between_sub_pop.push_back(
              ordered(rep_slot, PairSlot{t, s, p}, ComparisonKind::BetweenSubtype));
        }
      }
    }
  }
  if (params.n_between_subtype > between_sub_pop.size()) {
    throw Error(ErrorKind::RequestExceedsPopulation,
                "requested " + std::to_string(params.n_between_subtype) +
                    " between-subtype comparisons from " + std::to_string(between_sub_pop.size()),
                "between_subtype");
  }
  for (std::size_t i :
       sample_without_replacement(rng, between_sub_pop.size(), params.n_between_subtype)) {
    drafts.push_back(between_sub_pop[i]);
  }

  std::vector<Draft> between_type_pop;
  for (std::size_t t1 = 0; t1 < types.size(); ++t1) {
    for (std::size_t t2 = t1 + 1; t2 < types.size(); ++t2) {
      for (const auto& a : sampled[t1]) {
        for (const auto& b : sampled[t2]) {
          between_type_pop.push_back(Draft{a, b, ComparisonKind::BetweenType});
        }
      }
    }
  }
  if (params.n_between_type > between_type_pop.size()) {
    throw Error(ErrorKind::RequestExceedsPopulation,
                "requested " + std::to_string(params.n_between_type) +
                    " between-type comparisons from " + std::to_string(between_type_pop.size()),
                "between_type");
  }
  for (std::size_t i :
       sample_without_replacement(rng, between_type_pop.size(), params.n_between_type)) {
    drafts.push_back(between_type_pop[i]);
  }

  const std::size_t width = std::max<std::size_t>(4, std::to_string(drafts.size()).size());
  std::vector<Comparison> out;
  out.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const auto& d = drafts[i];
    Comparison c;
    c.id = pad_id(i + 1, width);
    c.left = pair_at(d.left);
    c.right = pair_at(d.right);
    c.kind = d.kind;
    c.left_subtype = ref_at(d.left);
    c.right_subtype = ref_at(d.right);
    out.push_back(std::move(c));
  }
  return out;
}

void write_comparisons(std::ostream& out, const std::vector<Comparison>& comparisons) {
  csv::write_row(out, {"id", "kind", "left1", "left2", "right1", "right2", "left_subtype",
                       "right_subtype"});
  for (const auto& c : comparisons) {
    csv::write_row(out, {c.id, to_string(c.kind), c.left.first, c.left.second, c.right.first,
                         c.right.second, c.left_subtype.label(), c.right_subtype.label()});
  }
}

std::vector<Comparison> read_comparisons(std::istream& in) {
  const auto records = csv::read(in);
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "comparisons file has no header");
  }
  const csv::Header header(records.front());
  const auto c_id = header.require("id");
  const auto c_kind = header.require("kind");
  const auto c_l1 = header.require("left1");
  const auto c_l2 = header.require("left2");
  const auto c_r1 = header.require("right1");
  const auto c_r2 = header.require("right2");
  const auto c_ls = header.require("left_subtype");
  const auto c_rs = header.require("right_subtype");

  std::vector<Comparison> out;
  std::set<std::string> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    Comparison c;
    c.id = nonempty_field(rec, c_id, "id");
    if (!ids.insert(c.id).second) {
      malformed(rec, "duplicate comparison id " + c.id);
    }
    try {
      c.kind = parse_comparison_kind(field(rec, c_kind, "kind"));
      c.left_subtype = SubtypeRef::parse(field(rec, c_ls, "left_subtype"));
      c.right_subtype = SubtypeRef::parse(field(rec, c_rs, "right_subtype"));
    } catch (const Error& e) {
      malformed(rec, e.what());
    }
    c.left = make_pair_or_malformed(rec, nonempty_field(rec, c_l1, "left1"),
                                    nonempty_field(rec, c_l2, "left2"));
    c.right = make_pair_or_malformed(rec, nonempty_field(rec, c_r1, "right1"),
                                     nonempty_field(rec, c_r2, "right2"));
    if (c.left == c.right) {
      malformed(rec, "comparison pairs a word pair with itself");
    }
    if (!c.consistent()) {
      malformed(rec, "kind does not match subtype references");
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ratings

RatingsLoad load_ratings(std::istream& in, std::vector<Comparison> comparisons) {
  const auto records = csv::read(in);
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "ratings file has no header");
  }
  const csv::Header header(records.front());
  const auto c_id = header.require("comparison_id");
  const auto c_rating = header.require("rating");
  const auto c_order = header.find("presentation_order");

  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < comparisons.size(); ++i) {
    by_id.emplace(comparisons[i].id, i);
  }

  RatingsLoad out;
  std::set<std::string> unknown_seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const auto& id = nonempty_field(rec, c_id, "comparison_id");
    int rating = 0;
    if (!parse_int(nonempty_field(rec, c_rating, "rating"), rating)) {
      malformed(rec, "rating must be an integer");
    }
    if (rating < 1 || rating > 7) {
      throw Error(ErrorKind::RatingOutOfRange, "rating " + std::to_string(rating) + " outside 1..7",
                  line_ref(rec));
    }
    std::string order;
    if (c_order != csv::Header::npos && c_order < rec.fields.size()) {
      order = rec.fields[c_order];
      if (!order.empty() && order != "left_first" && order != "right_first") {
        malformed(rec, "presentation_order must be left_first or right_first");
      }
    }
    ++out.rows;
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      if (unknown_seen.insert(id).second) {
        out.unknown_ids.push_back(id);
      }
      continue;
    }
    auto& c = comparisons[it->second];
    c.ratings.push_back(rating);
    if (order == "left_first") {
      c.ratings_left_first.push_back(rating);
    } else if (order == "right_first") {
      c.ratings_right_first.push_back(rating);
    }
  }
  out.comparisons = std::move(comparisons);
  return out;
}

double mean_rating(const Comparison& comparison) {
  if (comparison.ratings.empty()) {
    throw Error(ErrorKind::NoRatings, "comparison has no ratings", comparison.id);
  }
  double sum = 0.0;
  for (int r : comparison.ratings) {
    sum += r;
  }
  return sum / static_cast<double>(comparison.ratings.size());
}

std::map<ComparisonKind, RatingSummary> summarize(const std::vector<Comparison>& comparisons) {
  std::map<ComparisonKind, std::vector<int>> pooled;
  std::map<ComparisonKind, std::size_t> rated;
  for (const auto& c : comparisons) {
    if (c.ratings.empty()) {
      continue;
    }
    auto& bucket = pooled[c.kind];
    bucket.insert(bucket.end(), c.ratings.begin(), c.ratings.end());
    ++rated[c.kind];
  }
  std::map<ComparisonKind, RatingSummary> out;
  for (const auto& [kind, values] : pooled) {
    RatingSummary s;
    s.count = values.size();
    s.comparisons = rated[kind];
    double sum = 0.0;
    for (int v : values) sum += v;
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
      double ss = 0.0;
      for (int v : values) ss += (v - s.mean) * (v - s.mean);
      s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
    out.emplace(kind, s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Triads

std::string to_string(AnalogyType type) {
  switch (type) {
    case AnalogyType::OneTwo: return "1-2";
    case AnalogyType::TwoThree: return "2-3";
    case AnalogyType::OneThree: return "1-3";
  }
  return "?";
}

AnalogyType parse_analogy_type(const std::string& text) {
  if (text == "1-2") return AnalogyType::OneTwo;
  if (text == "2-3") return AnalogyType::TwoThree;
  if (text == "1-3") return AnalogyType::OneThree;
  throw Error(ErrorKind::MalformedRow, "analogy type must be 1-2, 2-3 or 1-3", text);
}

std::pair<const WordPair&, const WordPair&> Triad::analogy(AnalogyType type) const {
  switch (type) {
    case AnalogyType::OneTwo: return {pairs[0], pairs[1]};
    case AnalogyType::TwoThree: return {pairs[1], pairs[2]};
    case AnalogyType::OneThree: break;
  }
  return {pairs[0], pairs[2]};
}

std::vector<Triad> read_triads(std::istream& in) {
  const auto records = csv::read(in);
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "triads file has no header");
  }
  const csv::Header header(records.front());
  const auto c_id = header.require("triad_id");
  std::array<std::array<std::size_t, 2>, 3> cols{};
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t w = 0; w < 2; ++w) {
      cols[p][w] = header.require("pair" + std::to_string(p + 1) + "_word" + std::to_string(w + 1));
    }
  }
  std::vector<Triad> out;
  std::set<std::string> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    Triad t;
    t.id = nonempty_field(rec, c_id, "triad_id");
    if (!ids.insert(t.id).second) {
      malformed(rec, "duplicate triad id " + t.id);
    }
    for (std::size_t p = 0; p < 3; ++p) {
      t.pairs[p] = make_pair_or_malformed(rec, nonempty_field(rec, cols[p][0], "word1"),
                                          nonempty_field(rec, cols[p][1], "word2"));
    }
    if (t.pairs[0] == t.pairs[1] || t.pairs[1] == t.pairs[2] || t.pairs[0] == t.pairs[2]) {
      malformed(rec, "triad pairs must be distinct");
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Triad> load_triad_ratings(std::istream& in, std::vector<Triad> triads) {
  const auto records = csv::read(in);
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "triad ratings file has no header");
  }
  const csv::Header header(records.front());
  const auto c_id = header.require("triad_id");
  const auto c_type = header.require("analogy_type");
  const auto c_rating = header.require("rating");
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < triads.size(); ++i) {
    by_id.emplace(triads[i].id, i);
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const auto& id = nonempty_field(rec, c_id, "triad_id");
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      malformed(rec, "unknown triad id " + id);
    }
    AnalogyType type{};
    try {
      type = parse_analogy_type(field(rec, c_type, "analogy_type"));
    } catch (const Error& e) {
      malformed(rec, e.what());
    }
    int rating = 0;
    if (!parse_int(nonempty_field(rec, c_rating, "rating"), rating)) {
      malformed(rec, "rating must be an integer");
    }
    if (rating < 1 || rating > 7) {
      throw Error(ErrorKind::RatingOutOfRange, "rating " + std::to_string(rating) + " outside 1..7",
                  line_ref(rec));
    }
    triads[it->second].ratings[static_cast<std::size_t>(type)].push_back(rating);
  }
  return triads;
}

}  // namespace analogy
