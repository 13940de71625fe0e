#include "cli_app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "analogy/analogy_engine.hpp"
#include "analogy/axiom_audit.hpp"
#include "analogy/csv.hpp"
#include "analogy/embedding_store.hpp"
#include "analogy/error.hpp"
#include "analogy/evaluation.hpp"
#include "analogy/projection.hpp"
#include "analogy/relation_dataset.hpp"
#include "analogy/relsim.hpp"
#include "analogy/stats.hpp"

namespace analogy::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

unsigned default_threads() {
  if (const char* env = std::getenv("ANALOGY_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1 && v <= 1024) {
        return static_cast<unsigned>(v);
      }
    } catch (const std::exception&) {
    }
  }
  return 1;
}

struct EmbeddingOptions {
  std::string path;
  std::string format = "auto";
  bool strict = false;
  bool normalize = false;
  bool fold_case = false;
};

struct CommonOptions {
  std::string output;
  std::string output_format;
  unsigned threads = default_threads();
  bool verbose = false;
};

void add_embedding_options(CLI::App* cmd, EmbeddingOptions& opt, bool required) {
  auto* e = cmd->add_option("-e,--embeddings", opt.path, "Embedding file (text or word2vec binary)");
  if (required) {
    e->required();
  }
  cmd->add_option("--format", opt.format, "Embedding format")
      ->check(CLI::IsMember({"auto", "text", "binary"}));
  cmd->add_flag("--strict", opt.strict, "Reject malformed text lines instead of skipping them");
  cmd->add_flag("--normalize", opt.normalize, "Scale every word vector to unit length first");
  cmd->add_flag("--fold-case", opt.fold_case, "Retry missing tokens in lowercase");
}

void add_common_options(CLI::App* cmd, CommonOptions& opt, std::vector<std::string> formats) {
  cmd->add_option("-o,--output", opt.output, "Write the primary output to this file");
  cmd->add_option("--output-format", opt.output_format, "Output format")
      ->check(CLI::IsMember(formats));
  cmd->add_option("--threads", opt.threads, "Worker threads (default: $ANALOGY_THREADS or 1)")
      ->check(CLI::Range(1u, 1024u));
  cmd->add_flag("-v,--verbose", opt.verbose, "Log one line per stage on stderr");
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  CommonOptions common;

  void log(const std::string& line) const {
    if (common.verbose) {
      err << "[analogy] " << line << "\n";
    }
  }
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::IoError, "cannot open input file", path);
  }
  return in;
}

void emit(const Context& ctx, const std::string& payload) {
  if (ctx.common.output.empty()) {
    ctx.out << payload;
    ctx.out.flush();
    return;
  }
  std::ofstream file(ctx.common.output, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw Error(ErrorKind::IoError, "cannot open output file", ctx.common.output);
  }
  file << payload;
  if (!file) {
    throw Error(ErrorKind::IoError, "write failure", ctx.common.output);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

EmbeddingSpace load_space(const Context& ctx, const EmbeddingOptions& opt, Json* info = nullptr) {
  EmbeddingFormat format = EmbeddingFormat::Auto;
  if (opt.format == "text") format = EmbeddingFormat::Text;
  if (opt.format == "binary") format = EmbeddingFormat::Binary;
  {
    std::ifstream probe = open_input(opt.path);
    const auto sniffed = sniff_format(probe);
    if (info) {
      (*info)["format"] = sniffed == EmbeddingFormat::Binary ? "binary" : "text";
    }
  }
  auto loaded = load_embeddings(opt.path, format,
                                opt.strict ? ParseMode::Strict : ParseMode::Lenient);
  ctx.log("loaded " + std::to_string(loaded.report.vocab_size) + " tokens of dim " +
          std::to_string(loaded.report.dim) + " (" + std::to_string(loaded.report.skipped_lines) +
          " lines skipped, " + std::to_string(loaded.report.duplicate_tokens.size()) +
          " duplicates)");
  if (info) {
    (*info)["vocab_size"] = loaded.report.vocab_size;
    (*info)["dim"] = loaded.report.dim;
    (*info)["skipped_lines"] = loaded.report.skipped_lines;
    (*info)["header_line"] = loaded.report.header_line;
    (*info)["duplicate_tokens"] = loaded.report.duplicate_tokens;
  }
  if (opt.normalize) {
    ctx.log("normalizing rows");
    return normalize(loaded.space);
  }
  return std::move(loaded.space);
}

std::string format_or(const Context& ctx, const std::string& fallback) {
  return ctx.common.output_format.empty() ? fallback : ctx.common.output_format;
}

std::string fmt_score(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  os << v;
  return os.str();
}

Json anova_json(const stats::AnovaResult& a) {
  Json j;
  j["F"] = number_or_null(a.F);
  j["df_between"] = a.df_between;
  j["df_within"] = a.df_within;
  j["p"] = number_or_null(a.p);
  j["ms_within"] = number_or_null(a.ms_within);
  j["group_means"] = a.group_means;
  j["group_sizes"] = a.group_sizes;
  return j;
}

Json tukey_json(const stats::TukeyResult& t, const std::vector<std::string>& names) {
  Json j;
  j["alpha"] = t.alpha;
  j["q_critical"] = t.q_critical;
  Json pairs = Json::array();
  for (const auto& p : t.pairwise) {
    Json pj;
    pj["groups"] = names[p.i] + " vs " + names[p.j];
    pj["mean_diff"] = p.mean_diff;
    pj["q"] = number_or_null(p.q);
    pj["significant"] = p.significant;
    pairs.push_back(pj);
  }
  j["pairwise"] = pairs;
  return j;
}

Json binomial_json(const stats::BinomialResult& b) {
  Json j;
  j["k"] = b.k;
  j["n"] = b.n;
  j["p0"] = b.p0;
  j["expected"] = b.expected;
  j["p_one_sided_ge"] = b.p_one_sided_ge;
  j["p_two_sided"] = b.p_two_sided;
  return j;
}

const std::vector<std::string> kAnalogyTypeNames = {"1-2", "2-3", "1-3"};

// ---------------------------------------------------------------------------

struct AnalogyArgs {
  EmbeddingOptions emb;
  std::string a, b, c;
  std::size_t k = 10;
  bool keep_inputs = false;
};

int cmd_analogy(const Context& ctx, const AnalogyArgs& args) {
  const auto space = load_space(ctx, args.emb);
  AnalogyQuery q{args.a, args.b, args.c, args.k, !args.keep_inputs, args.emb.fold_case};
  const auto result = complete_parallelogram(space, q, ctx.common.threads);
  const auto format = format_or(ctx, "table");
  std::ostringstream os;
  if (format == "json") {
    Json j;
    j["query"] = {{"a", args.a}, {"b", args.b}, {"c", args.c}, {"k", args.k},
                  {"exclude_inputs", !args.keep_inputs}};
    Json cands = Json::array();
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
      cands.push_back({{"rank", i + 1},
                       {"token", result.candidates[i].token},
                       {"score", result.candidates[i].score}});
    }
    j["candidates"] = cands;
    os << dump(j);
  } else if (format == "csv") {
    csv::write_row(os, {"rank", "token", "score"});
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
      csv::write_row(os, {std::to_string(i + 1), result.candidates[i].token,
                          format_double(result.candidates[i].score)});
    }
  } else {
    os << "rank\ttoken\tscore\n";
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
      os << i + 1 << "\t" << result.candidates[i].token << "\t"
         << fmt_score(result.candidates[i].score) << "\n";
    }
  }
  emit(ctx, os.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RelsimArgs {
  EmbeddingOptions emb;
  std::vector<std::string> tokens;
  std::string pairs_file;
  std::string metric = "cosine";
  std::string missing = "error";
};

std::vector<Comparison> read_pair_rows(const std::string& path) {
  auto in = open_input(path);
  const auto records = csv::read(in);
  if (records.empty()) {
    throw Error(ErrorKind::EmptyInput, "pairs file has no header", path);
  }
  const csv::Header header(records.front());
  const auto c_l1 = header.require("left1");
  const auto c_l2 = header.require("left2");
  const auto c_r1 = header.require("right1");
  const auto c_r2 = header.require("right2");
  const auto c_id = header.find("id");
  std::vector<Comparison> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    const std::size_t need = std::max({c_l1, c_l2, c_r1, c_r2});
    if (f.size() <= need) {
      throw Error(ErrorKind::MalformedRow, "too few fields",
                  "line " + std::to_string(records[r].line));
    }
    Comparison c;
    c.id = (c_id != csv::Header::npos && c_id < f.size() && !f[c_id].empty()) ? f[c_id]
                                                                               : std::to_string(r);
    try {
      c.left = WordPair(f[c_l1], f[c_l2]);
      c.right = WordPair(f[c_r1], f[c_r2]);
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedRow, e.what(), "line " + std::to_string(records[r].line));
    }
    rows.push_back(std::move(c));
  }
  return rows;
}

int cmd_relsim(const Context& ctx, const RelsimArgs& args) {
  if (args.tokens.empty() == args.pairs_file.empty()) {
    throw UsageError("relsim needs either four tokens A B C D or --pairs FILE");
  }
  if (!args.tokens.empty() && args.tokens.size() != 4) {
    throw UsageError("relsim takes exactly four tokens: A B C D for A:B vs C:D");
  }
  const Metric metric = parse_metric(args.metric);
  const auto space = load_space(ctx, args.emb);
  std::vector<Comparison> rows;
  if (!args.tokens.empty()) {
    Comparison c;
    c.id = "1";
    c.left = WordPair(args.tokens[0], args.tokens[1]);
    c.right = WordPair(args.tokens[2], args.tokens[3]);
    rows.push_back(std::move(c));
  } else {
    rows = read_pair_rows(args.pairs_file);
  }
  const auto policy = args.missing == "skip" ? MissingPolicy::Skip : MissingPolicy::Error;
  const auto items = batch_relsim(space, rows, metric, policy, ctx.common.threads,
                                  args.emb.fold_case);
  ctx.log("scored " + std::to_string(items.size()) + " comparisons");
  const auto format = format_or(ctx, "table");
  std::ostringstream os;
  if (format == "csv") {
    write_batch_csv(os, items, metric);
  } else if (format == "json") {
    Json j;
    j["metric"] = to_string(metric);
    Json arr = Json::array();
    for (const auto& item : items) {
      Json ij;
      ij["comparison_id"] = item.comparison_id;
      ij["left_pair"] = item.left.label();
      ij["right_pair"] = item.right.label();
      ij["value"] = item.score ? Json(item.score->value) : Json(nullptr);
      ij["status"] = item.status;
      if (!item.detail.empty()) ij["detail"] = item.detail;
      arr.push_back(ij);
    }
    j["scores"] = arr;
    os << dump(j);
  } else {
    os << "comparison_id\tleft_pair\tright_pair\t" << to_string(metric) << "\tstatus\n";
    for (const auto& item : items) {
      os << item.comparison_id << "\t" << item.left.label() << "\t" << item.right.label() << "\t"
         << (item.score ? fmt_score(item.score->value) : "-") << "\t" << item.status << "\n";
    }
  }
  emit(ctx, os.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  EmbeddingOptions emb;
  std::string comparisons;
  std::string ratings;
  std::string metric = "cosine";
  std::string pooling = "within+between_subtype";
  std::string missing = "skip";
};

int cmd_eval(const Context& ctx, const EvalArgs& args) {
  const Metric metric = parse_metric(args.metric);
  const Pooling pooling = parse_pooling(args.pooling);
  auto comp_in = open_input(args.comparisons);
  auto comparisons = read_comparisons(comp_in);
  auto rating_in = open_input(args.ratings);
  auto rated = load_ratings(rating_in, std::move(comparisons));
  ctx.log("read " + std::to_string(rated.comparisons.size()) + " comparisons and " +
          std::to_string(rated.rows) + " ratings (" + std::to_string(rated.unknown_ids.size()) +
          " unknown ids)");
  const auto space = load_space(ctx, args.emb);
  const auto policy = args.missing == "error" ? MissingPolicy::Error : MissingPolicy::Skip;
  const auto result = evaluate_by_type(space, rated.comparisons, metric, pooling, policy,
                                       ctx.common.threads, args.emb.fold_case);
  const auto format = format_or(ctx, "table");
  std::ostringstream os;
  auto row_label = [](const TypeCorrelation& t) {
    return t.type_id == 0 ? std::string("all") : std::to_string(t.type_id);
  };
  std::vector<TypeCorrelation> rows = result.per_type;
  rows.push_back(result.overall);
  if (format == "json") {
    Json j;
    j["metric"] = to_string(metric);
    j["pooling"] = to_string(pooling);
    Json arr = Json::array();
    for (const auto& t : result.per_type) {
      Json tj;
      tj["type_id"] = t.type_id;
      tj["n"] = t.n;
      tj["r"] = t.r ? Json(*t.r) : Json(nullptr);
      if (!t.error.empty()) tj["error"] = t.error;
      arr.push_back(tj);
    }
    j["per_type"] = arr;
    Json overall;
    overall["n"] = result.overall.n;
    overall["r"] = result.overall.r ? Json(*result.overall.r) : Json(nullptr);
    if (!result.overall.error.empty()) overall["error"] = result.overall.error;
    j["overall"] = overall;
    j["skipped"] = result.skipped_ids.size();
    j["unknown_rating_ids"] = rated.unknown_ids.size();
    os << dump(j);
  } else if (format == "csv") {
    csv::write_row(os, {"type_id", "n", "r", "error"});
    for (const auto& t : rows) {
      csv::write_row(os, {row_label(t), std::to_string(t.n), t.r ? format_double(*t.r) : "",
                          t.error});
    }
  } else {
    os << "type\tn\tpearson_r\n";
    for (const auto& t : rows) {
      os << row_label(t) << "\t" << t.n << "\t" << (t.r ? fmt_score(*t.r) : t.error) << "\n";
    }
  }
  for (const auto& t : result.per_type) {
    if (!t.error.empty()) {
      ctx.err << "warning: type " << t.type_id << ": " << t.error << "\n";
    }
  }
  emit(ctx, os.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string taxonomy;
  std::uint64_t seed = 0;
  GenerationParams params;
};

int cmd_gen_comparisons(const Context& ctx, const GenArgs& args) {
  auto in = open_input(args.taxonomy);
  const auto loaded = load_taxonomy(in);
  for (const auto& d : loaded.duplicate_pairs) {
    ctx.err << "warning: duplicate pair dropped: " << d << "\n";
  }
  const auto comparisons = generate_comparisons(loaded.taxonomy, args.seed, args.params);
  ctx.log("generated " + std::to_string(comparisons.size()) + " comparisons");
  std::ostringstream os;
  write_comparisons(os, comparisons);
  emit(ctx, os.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ProjectArgs {
  EmbeddingOptions emb;
  std::string taxonomy;
  std::vector<std::string> subtypes;
  std::string mode = "endpoints";
  std::size_t columns = 5;
  std::string missing = "error";
};

int cmd_project(const Context& ctx, const ProjectArgs& args) {
  auto in = open_input(args.taxonomy);
  const auto taxonomy = load_taxonomy(in).taxonomy;
  const auto space = load_space(ctx, args.emb);
  const auto mode = args.mode == "differences" ? ProjectionMode::Differences
                                               : ProjectionMode::Endpoints;
  std::set<std::string> wanted(args.subtypes.begin(), args.subtypes.end());
  std::set<std::string> found;
  std::vector<ArrowPlot> plots;
  for (const auto& type : taxonomy.types) {
    for (const auto& sub : type.subtypes) {
      const std::string ref = SubtypeRef{type.id, sub.id}.label();
      if (!wanted.empty() && !wanted.contains(ref)) {
        continue;
      }
      found.insert(ref);
      std::vector<WordPair> pairs;
      for (const auto& m : sub.pairs) {
        const bool resolvable = space.find(m.pair.first) && space.find(m.pair.second);
        if (!resolvable && args.missing == "skip") {
          continue;
        }
        pairs.push_back(m.pair);
      }
      const std::string title = ref + " " + sub.name;
      try {
        plots.push_back(plot_relation(space, pairs, title, mode));
      } catch (const Error& e) {
        if (args.missing != "skip") throw;
        ctx.err << "warning: skipped panel " << ref << ": " << e.what() << "\n";
      }
    }
  }
  for (const auto& w : wanted) {
    if (!found.contains(w)) {
      throw Error(ErrorKind::InvalidArgument, "subtype not in taxonomy", w);
    }
  }
  ctx.log("rendered " + std::to_string(plots.size()) + " panels");
  std::ostringstream os;
  if (format_or(ctx, "svg") == "csv") {
    write_plot_csv(os, plots);
  } else {
    os << render_svg(plots, args.columns);
  }
  emit(ctx, os.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct AuditSymmetryArgs {
  std::string ratings;
  std::string comparisons;
  double alpha = 0.05;
  std::string ttest = "welch";
  EmbeddingOptions emb;
  std::string metric = "cosine";
  std::size_t samples = 1000;
  std::optional<std::uint64_t> seed;
};

int cmd_audit_symmetry(const Context& ctx, const AuditSymmetryArgs& args) {
  if (!args.emb.path.empty() && !args.seed) {
    throw UsageError("the model symmetry check samples pairs and needs an explicit --seed");
  }
  std::vector<Comparison> comparisons;
  if (!args.comparisons.empty()) {
    auto in = open_input(args.comparisons);
    comparisons = read_comparisons(in);
  } else {
    auto in = open_input(args.ratings);
    const auto records = csv::read(in);
    if (records.empty()) {
      throw Error(ErrorKind::EmptyInput, "ratings file has no header", args.ratings);
    }
    const auto c_id = csv::Header(records.front()).require("comparison_id");
    std::set<std::string> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
      if (c_id < records[r].fields.size() && seen.insert(records[r].fields[c_id]).second) {
        Comparison c;
        c.id = records[r].fields[c_id];
        comparisons.push_back(std::move(c));
      }
    }
  }
  auto in = open_input(args.ratings);
  auto rated = load_ratings(in, std::move(comparisons));
  std::vector<Comparison> ordered;
  for (auto& c : rated.comparisons) {
    if (!c.ratings_left_first.empty() || !c.ratings_right_first.empty()) {
      ordered.push_back(std::move(c));
    }
  }
  const auto variant = args.ttest == "pooled" ? stats::TTestVariant::Pooled
                                              : stats::TTestVariant::Welch;
  const auto audit = symmetry_audit(ordered, args.alpha, variant, ctx.common.threads);
  ctx.log("tested " + std::to_string(audit.per_comparison.size()) + " comparisons, " +
          std::to_string(audit.n_significant) + " significant");

  std::optional<ModelSymmetryResult> model;
  if (!args.emb.path.empty()) {
    const auto space = load_space(ctx, args.emb);
    model = model_symmetry_check(space, parse_metric(args.metric), args.samples, *args.seed);
  }

  std::ostringstream os;
  if (format_or(ctx, "json") == "csv") {
    csv::write_row(os, {"comparison_id", "mean_left_first", "mean_right_first", "n_left_first",
                        "n_right_first", "t", "df", "p_two_sided", "significant"});
    for (const auto& item : audit.per_comparison) {
      csv::write_row(os, {item.comparison_id, format_double(item.mean_left_first),
                          format_double(item.mean_right_first), std::to_string(item.n_left_first),
                          std::to_string(item.n_right_first),
                          item.test ? format_double(item.test->t) : "",
                          item.test ? format_double(item.test->df) : "",
                          item.test ? format_double(item.test->p_two_sided) : "",
                          item.significant ? "1" : "0"});
    }
  } else {
    Json j;
    j["inputs"] = {{"ratings", args.ratings},
                   {"comparisons", args.comparisons},
                   {"alpha", args.alpha},
                   {"t_test", args.ttest}};
    j["n_comparisons"] = audit.per_comparison.size();
    j["n_significant"] = audit.n_significant;
    j["expected_under_null"] = audit.expected_under_null;
    j["binomial"] = binomial_json(audit.binomial);
    j["verdict"] = audit.binomial.p_one_sided_ge < args.alpha ? "asymmetry_detected"
                                                              : "consistent_with_symmetry";
    if (model) {
      j["model"] = {{"metric", args.metric},
                    {"seed", *args.seed},
                    {"n_samples", model->n_samples},
                    {"n_skipped", model->n_skipped},
                    {"empty_sample", model->empty_sample},
                    {"max_abs_asymmetry", model->max_abs_asymmetry}};
    }
    Json items = Json::array();
    for (const auto& item : audit.per_comparison) {
      Json ij;
      ij["comparison_id"] = item.comparison_id;
      ij["mean_left_first"] = item.mean_left_first;
      ij["mean_right_first"] = item.mean_right_first;
      ij["n_left_first"] = item.n_left_first;
      ij["n_right_first"] = item.n_right_first;
      if (item.test) {
        ij["t"] = item.test->t;
        ij["df"] = item.test->df;
        ij["p_two_sided"] = item.test->p_two_sided;
      } else {
        ij["t"] = nullptr;
        ij["df"] = nullptr;
        ij["p_two_sided"] = nullptr;
      }
      ij["significant"] = item.significant;
      items.push_back(ij);
    }
    j["per_comparison"] = items;
    os << dump(j);
  }
  emit(ctx, os.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct AuditTriangleArgs {
  std::string triads;
  std::string ratings;
  double alpha = 0.05;
  EmbeddingOptions emb;
  std::string metric = "cosine";
};

int cmd_audit_triangle(const Context& ctx, const AuditTriangleArgs& args) {
  auto tin = open_input(args.triads);
  auto triads = read_triads(tin);
  auto rin = open_input(args.ratings);
  triads = load_triad_ratings(rin, std::move(triads));
  const auto human = triad_audit_human(triads, args.alpha);
  ctx.log(std::to_string(human.n_expected_pattern) + " of " + std::to_string(triads.size()) +
          " triads show the expected pattern");
  std::optional<TriadModelResult> model;
  if (!args.emb.path.empty()) {
    const auto space = load_space(ctx, args.emb);
    model = triad_audit_model(space, triads, parse_metric(args.metric));
  }

  std::ostringstream os;
  if (format_or(ctx, "json") == "csv") {
    csv::write_row(os, {"triad_id", "F", "df_between", "df_within", "p", "mean_1_2", "mean_2_3",
                        "mean_1_3", "pattern"});
    for (const auto& t : human.per_triad) {
      csv::write_row(os, {t.triad_id, format_double(t.anova.F), std::to_string(t.anova.df_between),
                          std::to_string(t.anova.df_within), format_double(t.anova.p),
                          format_double(t.anova.group_means[0]),
                          format_double(t.anova.group_means[1]),
                          format_double(t.anova.group_means[2]), to_string(t.pattern)});
    }
  } else {
    Json j;
    j["inputs"] = {{"triads", args.triads}, {"ratings", args.ratings}, {"alpha", args.alpha}};
    j["n_triads"] = triads.size();
    j["n_expected_pattern"] = human.n_expected_pattern;
    if (human.overall) {
      j["overall"] = anova_json(*human.overall);
      if (human.overall_tukey) {
        j["overall_tukey"] = tukey_json(*human.overall_tukey, kAnalogyTypeNames);
      }
    }
    Json items = Json::array();
    for (const auto& t : human.per_triad) {
      Json tj;
      tj["triad_id"] = t.triad_id;
      tj["anova"] = anova_json(t.anova);
      tj["tukey"] = tukey_json(t.tukey, kAnalogyTypeNames);
      tj["pattern"] = to_string(t.pattern);
      items.push_back(tj);
    }
    j["per_triad"] = items;
    if (model) {
      Json mj;
      mj["metric"] = to_string(model->metric);
      if (model->anova) mj["anova"] = anova_json(*model->anova);
      mj["all_triangles_hold"] = model->all_triangles_hold;
      Json mitems = Json::array();
      for (const auto& m : model->per_triad) {
        mitems.push_back({{"triad_id", m.triad_id},
                          {"similarity", m.similarity},
                          {"distance", m.distance},
                          {"triangle_slack", m.triangle_slack},
                          {"triangle_holds", m.triangle_holds}});
      }
      mj["per_triad"] = mitems;
      j["model"] = mj;
    }
    os << dump(j);
  }
  emit(ctx, os.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_info(const Context& ctx, const EmbeddingOptions& emb) {
  Json j;
  j["path"] = emb.path;
  const auto space = load_space(ctx, emb, &j);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  double sum = 0.0;
  std::size_t zero_rows = 0;
  for (std::size_t r = 0; r < space.size(); ++r) {
    const double n = space.row_norm(r);
    lo = std::min(lo, n);
    hi = std::max(hi, n);
    sum += n;
    zero_rows += n == 0.0 ? 1 : 0;
  }
  j["normalized"] = emb.normalize;
  j["norm"] = {{"min", lo}, {"mean", sum / static_cast<double>(space.size())}, {"max", hi}};
  j["zero_rows"] = zero_rows;
  emit(ctx, dump(j));
  return kExitOk;
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const UsageError*>(&e) != nullptr) {
    return kExitUsage;
  }
  const auto* error = dynamic_cast<const Error*>(&e);
  if (error == nullptr) {
    return kExitInternal;
  }
  switch (error->kind()) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnsupportedAlpha:
      return kExitUsage;
    default:
      return kExitData;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallelogram-model analogy toolkit: analogy completion, relational similarity, "
               "evaluation, projection and metric-axiom audits over word embeddings."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "analogy 1.0.0");

  CommonOptions common;

  AnalogyArgs analogy_args;
  auto* analogy_cmd = app.add_subcommand("analogy", "Solve A : B :: C : ? by B - A + C");
  add_embedding_options(analogy_cmd, analogy_args.emb, true);
  add_common_options(analogy_cmd, common, {"table", "json", "csv"});
  analogy_cmd->add_option("a", analogy_args.a, "A")->required();
  analogy_cmd->add_option("b", analogy_args.b, "B")->required();
  analogy_cmd->add_option("c", analogy_args.c, "C")->required();
  analogy_cmd->add_option("-k", analogy_args.k, "Number of candidates")
      ->check(CLI::PositiveNumber);
  analogy_cmd->add_flag("--keep-inputs", analogy_args.keep_inputs,
                        "Allow A, B and C to appear among the candidates");

  RelsimArgs relsim_args;
  auto* relsim_cmd = app.add_subcommand("relsim", "Relational similarity of A:B and C:D");
  add_embedding_options(relsim_cmd, relsim_args.emb, true);
  add_common_options(relsim_cmd, common, {"table", "json", "csv"});
  relsim_cmd->add_option("tokens", relsim_args.tokens, "A B C D");
  relsim_cmd->add_option("--pairs", relsim_args.pairs_file,
                         "CSV with columns left1,left2,right1,right2[,id]");
  relsim_cmd->add_option("--metric", relsim_args.metric)
      ->check(CLI::IsMember({"cosine", "euclidean"}));
  relsim_cmd->add_option("--missing", relsim_args.missing, "error | skip")
      ->check(CLI::IsMember({"error", "skip"}));

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Per-relation-type Pearson r of model vs human");
  add_embedding_options(eval_cmd, eval_args.emb, true);
  add_common_options(eval_cmd, common, {"table", "json", "csv"});
  eval_cmd->add_option("--comparisons", eval_args.comparisons, "Comparisons CSV")->required();
  eval_cmd->add_option("--ratings", eval_args.ratings, "Ratings CSV")->required();
  eval_cmd->add_option("--metric", eval_args.metric)->check(CLI::IsMember({"cosine", "euclidean"}));
  eval_cmd->add_option("--pooling", eval_args.pooling)
      ->check(CLI::IsMember({"within", "within+between_subtype", "all"}));
  eval_cmd->add_option("--missing", eval_args.missing, "error | skip")
      ->check(CLI::IsMember({"error", "skip"}));

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen-comparisons", "Generate the comparison design");
  add_common_options(gen_cmd, common, {"csv"});
  gen_cmd->add_option("--taxonomy", gen_args.taxonomy, "Taxonomy CSV")->required();
  gen_cmd->add_option("--seed", gen_args.seed, "PRNG seed")->required();
  gen_cmd->add_option("--pairs-per-subtype", gen_args.params.pairs_per_subtype)
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--between-subtype", gen_args.params.n_between_subtype);
  gen_cmd->add_option("--between-type", gen_args.params.n_between_type);

  ProjectArgs project_args;
  auto* project_cmd = app.add_subcommand("project", "PCA arrow plots of relation subtypes");
  add_embedding_options(project_cmd, project_args.emb, true);
  add_common_options(project_cmd, common, {"svg", "csv"});
  project_cmd->add_option("--taxonomy", project_args.taxonomy, "Taxonomy CSV")->required();
  project_cmd->add_option("--subtype", project_args.subtypes,
                          "type_id/subtype_id to plot (repeatable; default all)");
  project_cmd->add_option("--mode", project_args.mode)
      ->check(CLI::IsMember({"endpoints", "differences"}));
  project_cmd->add_option("--columns", project_args.columns)->check(CLI::PositiveNumber);
  project_cmd->add_option("--missing", project_args.missing, "error | skip")
      ->check(CLI::IsMember({"error", "skip"}));

  AuditSymmetryArgs sym_args;
  auto* sym_cmd = app.add_subcommand("audit-symmetry", "Presentation-order symmetry audit");
  add_embedding_options(sym_cmd, sym_args.emb, false);
  add_common_options(sym_cmd, common, {"json", "csv"});
  sym_cmd->add_option("--ratings", sym_args.ratings, "Order-tagged ratings CSV")->required();
  sym_cmd->add_option("--comparisons", sym_args.comparisons, "Comparisons CSV");
  sym_cmd->add_option("--alpha", sym_args.alpha)->check(CLI::Range(0.0, 1.0));
  sym_cmd->add_option("--t-test", sym_args.ttest)->check(CLI::IsMember({"welch", "pooled"}));
  sym_cmd->add_option("--metric", sym_args.metric)->check(CLI::IsMember({"cosine", "euclidean"}));
  sym_cmd->add_option("--samples", sym_args.samples, "Model symmetry samples");
  sym_cmd->add_option("--seed", sym_args.seed, "PRNG seed for the model check");

  AuditTriangleArgs tri_args;
  auto* tri_cmd = app.add_subcommand("audit-triangle", "Triangle-inequality triad audit");
  add_embedding_options(tri_cmd, tri_args.emb, false);
  add_common_options(tri_cmd, common, {"json", "csv"});
  tri_cmd->add_option("--triads", tri_args.triads, "Triads CSV")->required();
  tri_cmd->add_option("--ratings", tri_args.ratings, "Triad ratings CSV")->required();
  tri_cmd->add_option("--alpha", tri_args.alpha)->check(CLI::IsMember({0.05, 0.01}));
  tri_cmd->add_option("--metric", tri_args.metric)->check(CLI::IsMember({"cosine", "euclidean"}));

  EmbeddingOptions info_args;
  auto* info_cmd = app.add_subcommand("info", "Summarize an embedding file");
  add_embedding_options(info_cmd, info_args, true);
  add_common_options(info_cmd, common, {"json"});

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  Context ctx{out, err, common};
  try {
    if (*analogy_cmd) return cmd_analogy(ctx, analogy_args);
    if (*relsim_cmd) return cmd_relsim(ctx, relsim_args);
    if (*eval_cmd) return cmd_eval(ctx, eval_args);
    if (*gen_cmd) return cmd_gen_comparisons(ctx, gen_args);
    if (*project_cmd) return cmd_project(ctx, project_args);
    if (*sym_cmd) return cmd_audit_symmetry(ctx, sym_args);
    if (*tri_cmd) return cmd_audit_triangle(ctx, tri_args);
    if (*info_cmd) return cmd_info(ctx, info_args);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << (code == kExitUsage ? "usage error: " : code == kExitData ? "error: " : "internal error: ")
        << e.what() << "\n";
    return code;
  }
  err << "internal error: no subcommand dispatched\n";
  return kExitInternal;
}

}  // namespace analogy::cli
