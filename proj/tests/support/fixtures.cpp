#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

#include "analogy/csv.hpp"

namespace testsupport {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static int counter = 0;
  path_ = fs::temp_directory_path() /
          ("analogy-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

static std::string pair_word(int t, int s, int i, char side) {
  return "t" + std::to_string(t) + "s" + std::to_string(s) + "p" + std::to_string(i) + side;
}

std::string taxonomy_csv(int n_types, int n_subtypes, int n_pairs) {
  std::ostringstream os;
  os << "type_id,type_name,subtype_id,subtype_name,word1,word2\n";
  for (int t = 1; t <= n_types; ++t) {
    for (int s = 0; s < n_subtypes; ++s) {
      for (int i = 0; i < n_pairs; ++i) {
        os << t << ",TYPE" << t << "," << t << static_cast<char>('a' + s) << ",SUB" << t << s
           << "," << pair_word(t, s, i, 'a') << "," << pair_word(t, s, i, 'b') << "\n";
      }
    }
  }
  return os.str();
}

analogy::RelationTaxonomy make_taxonomy(int n_types, int n_subtypes, int n_pairs) {
  std::istringstream in(taxonomy_csv(n_types, n_subtypes, n_pairs));
  return analogy::load_taxonomy(in).taxonomy;
}

analogy::EmbeddingSpace space_for(const std::vector<std::string>& tokens, std::size_t dim,
                                  std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<float> data(tokens.size() * dim);
  for (auto& x : data) x = static_cast<float>(normal(gen));
  return analogy::EmbeddingSpace(tokens, dim, std::move(data));
}

analogy::EmbeddingSpace random_space(std::uint64_t seed, std::size_t n_tokens, std::size_t dim,
                                     const std::string& prefix) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < n_tokens; ++i) tokens.push_back(prefix + std::to_string(i));
  return space_for(tokens, dim, seed);
}

ParallelogramFixture parallelogram_fixture(std::uint64_t seed, std::size_t n_quads,
                                           std::size_t dim, std::size_t n_distractors) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> small(-8, 8);
  auto draw = [&] {
    std::vector<float> v(dim);
    for (auto& x : v) x = static_cast<float>(small(gen));
    return v;
  };
  std::vector<std::string> tokens;
  std::vector<float> data;
  auto push = [&](const std::string& token, const std::vector<float>& v) {
    tokens.push_back(token);
    data.insert(data.end(), v.begin(), v.end());
  };
  std::vector<std::array<std::string, 4>> quads;
  for (std::size_t q = 0; q < n_quads; ++q) {
    auto a = draw();
    auto c = draw();
    auto offset = draw();
    std::vector<float> b(dim), d(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      b[i] = a[i] + offset[i];
      d[i] = c[i] + offset[i];
    }
    const std::string tag = "q" + std::to_string(q);
    std::array<std::string, 4> names{tag + "a", tag + "b", tag + "c", tag + "d"};
    push(names[0], a);
    push(names[1], b);
    push(names[2], c);
    push(names[3], d);
    quads.push_back(names);
  }
  for (std::size_t i = 0; i < n_distractors; ++i) {
    push("distractor" + std::to_string(i), draw());
  }
  return {analogy::EmbeddingSpace(tokens, dim, std::move(data)), quads};
}

std::vector<analogy::Comparison> symmetry_fixture(std::size_t n, std::size_t n_violating) {
  std::vector<analogy::Comparison> out;
  for (std::size_t i = 0; i < n; ++i) {
    analogy::Comparison c;
    c.id = "s" + std::to_string(i);
    c.left = analogy::WordPair("l" + std::to_string(i), "m" + std::to_string(i));
    c.right = analogy::WordPair("r" + std::to_string(i), "q" + std::to_string(i));
    c.left_subtype = {1, "a"};
    c.right_subtype = {1, "a"};
    if (i % 6 == 0 && i / 6 < n_violating) {
      c.ratings_left_first = {6, 7, 6, 7, 6, 7, 6, 7, 6, 7};
      c.ratings_right_first = {2, 3, 2, 3, 2, 3, 2, 3, 2, 3};
    } else {
      c.ratings_left_first = {3, 4, 5, 4, 3, 5, 4, 4, 5, 3};
      c.ratings_right_first = {5, 3, 4, 4, 5, 3, 4, 3, 5, 4};
    }
    c.ratings = c.ratings_left_first;
    c.ratings.insert(c.ratings.end(), c.ratings_right_first.begin(), c.ratings_right_first.end());
    out.push_back(std::move(c));
  }
  if (n_violating > (n + 5) / 6) throw std::invalid_argument("too many violations requested");
  return out;
}

std::string symmetry_ratings_csv(const std::vector<analogy::Comparison>& comparisons) {
  std::ostringstream os;
  os << "comparison_id,rating,presentation_order\n";
  for (const auto& c : comparisons) {
    for (int r : c.ratings_left_first) os << c.id << "," << r << ",left_first\n";
    for (int r : c.ratings_right_first) os << c.id << "," << r << ",right_first\n";
  }
  return os.str();
}

std::string text_embeddings(const analogy::EmbeddingSpace& space) {
  std::ostringstream os;
  analogy::write_text(space, os);
  return os.str();
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void standardize(std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (auto& x : v) {
    x -= m;
    ss += x * x;
  }
  const double sd = std::sqrt(ss / static_cast<double>(v.size()));
  for (auto& x : v) x /= sd;
}

double cosine_of_differences(const analogy::EmbeddingSpace& space, const analogy::WordPair& p,
                             const analogy::WordPair& q) {
  const auto a1 = space.row(space.index_of(p.first));
  const auto b1 = space.row(space.index_of(p.second));
  const auto a2 = space.row(space.index_of(q.first));
  const auto b2 = space.row(space.index_of(q.second));
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const double u = static_cast<double>(b1[i]) - a1[i];
    const double v = static_cast<double>(b2[i]) - a2[i];
    uv += u * v;
    uu += u * u;
    vv += v * v;
  }
  return uv / std::sqrt(uu * vv);
}

}  // namespace

PlantedEval write_planted_eval(const TempDir& dir, std::uint64_t seed,
                               const std::vector<double>& planted) {
  const int n_types = static_cast<int>(planted.size());
  constexpr int kPairs = 30;
  std::vector<std::string> tokens;
  for (int t = 1; t <= n_types; ++t) {
    for (int i = 0; i < kPairs; ++i) {
      tokens.push_back(pair_word(t, 0, i, 'a'));
      tokens.push_back(pair_word(t, 0, i, 'b'));
    }
  }
  const auto space = space_for(tokens, 20, seed);
  std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  std::ostringstream comps;
  std::ostringstream ratings;
  comps << "id,kind,left1,left2,right1,right2,left_subtype,right_subtype\n";
  ratings << "comparison_id,rating\n";
  int next_id = 0;
  for (int t = 1; t <= n_types; ++t) {
    std::vector<analogy::WordPair> pairs;
    for (int i = 0; i < kPairs; ++i) {
      pairs.emplace_back(pair_word(t, 0, i, 'a'), pair_word(t, 0, i, 'b'));
    }
    std::vector<std::pair<int, int>> index;
    std::vector<double> z;
    for (int i = 0; i < kPairs; ++i) {
      for (int j = i + 1; j < kPairs; ++j) {
        index.emplace_back(i, j);
        z.push_back(cosine_of_differences(space, pairs[i], pairs[j]));
      }
    }
    standardize(z);
    // The last two types get a noise shape other than Gaussian.
    const bool uniform_noise = t > n_types - 2;
    std::vector<double> e(z.size());
    for (auto& x : e) x = uniform_noise ? uniform(gen) : normal(gen);
    standardize(e);
    double ez = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) ez += e[k] * z[k];
    ez /= static_cast<double>(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) e[k] -= ez * z[k];
    standardize(e);
    const double rho = planted[static_cast<std::size_t>(t - 1)];
    const double sigma = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    for (std::size_t k = 0; k < z.size(); ++k) {
      const double y = rho * z[k] + sigma * e[k];
      const double target = std::clamp(4.0 + 0.6 * y, 1.0, 7.0);
      const std::string id = "c" + std::to_string(next_id++);
      const auto& p = pairs[static_cast<std::size_t>(index[k].first)];
      const auto& q = pairs[static_cast<std::size_t>(index[k].second)];
      const std::string sub = std::to_string(t) + "/" + std::to_string(t) + "a";
      comps << id << ",within_subtype," << p.first << "," << p.second << "," << q.first << ","
            << q.second << "," << sub << "," << sub << "\n";
      // Ten integer ratings whose mean is target rounded to 0.1.
      const int total = static_cast<int>(std::lround(target * 10.0));
      for (int r = 0; r < 10; ++r) {
        ratings << id << "," << (total / 10 + (r < total % 10 ? 1 : 0)) << "\n";
      }
    }
  }
  PlantedEval out;
  out.embeddings = dir.file("planted.vec");
  out.comparisons = dir.file("planted_comparisons.csv");
  out.ratings = dir.file("planted_ratings.csv");
  out.planted = planted;
  write_file(out.embeddings, text_embeddings(space));
  write_file(out.comparisons, comps.str());
  write_file(out.ratings, ratings.str());
  return out;
}

TriadFixture triad_fixture(std::uint64_t seed, std::size_t n_triads) {
  std::vector<std::string> tokens;
  std::vector<analogy::Triad> triads;
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> jitter(-1, 1);
  for (std::size_t t = 0; t < n_triads; ++t) {
    analogy::Triad triad;
    triad.id = "tr" + std::to_string(t);
    for (std::size_t p = 0; p < 3; ++p) {
      const std::string a = triad.id + "_" + std::to_string(p) + "a";
      const std::string b = triad.id + "_" + std::to_string(p) + "b";
      tokens.push_back(a);
      tokens.push_back(b);
      triad.pairs[p] = analogy::WordPair(a, b);
    }
    // Even triads: 1-2 and 2-3 high, 1-3 low. Odd triads: flat.
    const bool pattern = t % 2 == 0;
    const std::array<int, 3> centre = pattern ? std::array<int, 3>{5, 5, 2}
                                              : std::array<int, 3>{4, 4, 4};
    for (std::size_t type = 0; type < 3; ++type) {
      for (int i = 0; i < 12; ++i) {
        triad.ratings[type].push_back(std::clamp(centre[type] + jitter(gen), 1, 7));
      }
    }
    triads.push_back(std::move(triad));
  }
  return {space_for(tokens, 16, seed + 1), std::move(triads)};
}

std::string triads_csv(const std::vector<analogy::Triad>& triads) {
  std::ostringstream os;
  os << "triad_id,pair1_word1,pair1_word2,pair2_word1,pair2_word2,pair3_word1,pair3_word2\n";
  for (const auto& t : triads) {
    os << t.id;
    for (const auto& p : t.pairs) os << "," << p.first << "," << p.second;
    os << "\n";
  }
  return os.str();
}

std::string triad_ratings_csv(const std::vector<analogy::Triad>& triads) {
  static const char* names[3] = {"1-2", "2-3", "1-3"};
  std::ostringstream os;
  os << "triad_id,analogy_type,rating\n";
  for (const auto& t : triads) {
    for (std::size_t type = 0; type < 3; ++type) {
      for (int r : t.ratings[type]) os << t.id << "," << names[type] << "," << r << "\n";
    }
  }
  return os.str();
}

}  // namespace testsupport
