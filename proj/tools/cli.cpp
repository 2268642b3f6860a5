#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "hybrid/analysis.hpp"
#include "hybrid/bm25.hpp"
#include "hybrid/dense_index.hpp"
#include "hybrid/efficiency.hpp"
#include "hybrid/embeddings.hpp"
#include "hybrid/error.hpp"
#include "hybrid/fusion.hpp"
#include "hybrid/io.hpp"
#include "hybrid/lexical_index.hpp"
#include "hybrid/metrics.hpp"
#include "hybrid/multivector.hpp"
#include "hybrid/normalization.hpp"
#include "hybrid/sparse_index.hpp"
#include "hybrid/synthetic.hpp"
#include "hybrid/tokenizer.hpp"
#include "hybrid/tuning.hpp"

namespace hybrid::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_file(const fs::path& path)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text)
{
    auto out = open_file(path);
    out << text;
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

// Re-throws module errors with a prefix naming the file or query at fault,
// keeping the error category.
template <typename Fn>
auto with_context(const std::string& context, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const ParseError& e) {
        throw ParseError(context + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(context + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(context + ": " + e.what());
    }
}

CandidatePool parse_pool(const std::string& text)
{
    if (text == "matching") {
        return CandidatePool::matching;
    }
    if (text == "full") {
        return CandidatePool::full_corpus;
    }
    throw ValidationError("unknown candidate pool '" + text + "' (expected matching or full)");
}

std::string join_weights(const std::vector<double>& weights, int precision)
{
    std::string text;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        text += fmt::format("{}{:.{}f}", i ? "," : "", weights[i], precision);
    }
    return text;
}

std::vector<std::vector<RunList>> read_systems(const std::vector<std::string>& paths)
{
    std::vector<std::vector<RunList>> systems;
    for (const auto& path : paths) {
        systems.push_back(read_run(fs::path(path)));
    }
    return systems;
}

std::string system_name(const std::vector<RunList>& runs, std::size_t index)
{
    return runs.empty() ? "system" + std::to_string(index + 1) : runs.front().system_id();
}

std::vector<ScoreDistribution> raw_distributions(const std::vector<std::vector<RunList>>& systems)
{
    std::vector<ScoreDistribution> dists;
    for (std::size_t m = 0; m < systems.size(); ++m) {
        dists.push_back(build_score_distribution(system_name(systems[m], m), systems[m]));
    }
    return dists;
}

void emit_runs(const std::vector<RunList>& runs, const std::string& output, const std::string& tag,
               std::ostream& out)
{
    if (output.empty()) {
        write_run(runs, out, tag);
    } else {
        auto file = open_file(output);
        write_run(runs, file, tag);
    }
}

// ---------------------------------------------------------------- index

struct IndexArgs {
    std::string kind;
    std::string input;
    std::string output;
};

void cmd_index(const IndexArgs& args, const AppConfig& config, std::ostream& out)
{
    const fs::path input = args.input.empty() ? config.corpus : fs::path(args.input);
    if (input.empty()) {
        throw ValidationError("index needs --input (or [paths] corpus in the config)");
    }
    if (args.kind == "lexical") {
        const auto index = build_lexical_index(read_corpus(input));
        save_lexical_index(index, args.output);
        out << fmt::format("lexical index: {} documents, {} terms, avg length {:.2f}\n", index.corpus_size(),
                           index.vocabulary_size(), index.avg_len());
    } else if (args.kind == "dense") {
        const FlatDenseIndex index(read_dense_records(input), false);
        write_fbvx(index.records(), args.output);
        out << fmt::format("dense index: {} vectors of dimension {}\n", index.size(), index.dim());
    } else if (args.kind == "sparse") {
        const auto index = ingest_sparse(input);
        save_sparse_index(index, args.output);
        out << fmt::format("sparse index: {} documents, {} terms\n", index.size(), index.vocabulary_size());
    } else if (args.kind == "multivector") {
        const MultiVectorStore store(read_multivector_records(input), false);
        write_fbvx(store.records(), args.output);
        out << fmt::format("multi-vector index: {} documents, {:.2f} tokens on average, dimension {}\n",
                           store.size(), store.average_tokens(), store.dim());
    } else {
        throw ValidationError("unknown index kind '" + args.kind + "'");
    }
}

// ---------------------------------------------------------------- search

struct SearchArgs {
    std::string kind;
    std::string index;
    std::string queries;
    std::string output;
    std::string tag;
    std::string pool = "matching";
};

// A loaded index that can answer the queries of its own query file.
class Searcher {
  public:
    Searcher(const SearchArgs& args, const AppConfig& config) : kind_(args.kind), config_(config)
    {
        const fs::path queries = args.queries.empty() ? config.queries : fs::path(args.queries);
        if (queries.empty()) {
            throw ValidationError("search needs --queries (or [paths] queries in the config)");
        }
        pool_ = parse_pool(args.pool);
        if (kind_ == "lexical") {
            lexical_ = load_lexical_index(args.index);
            text_queries_ = read_queries(queries);
        } else if (kind_ == "dense") {
            dense_.emplace(ingest_dense(args.index, config.cosine));
            dense_queries_ = read_dense_records(queries);
        } else if (kind_ == "sparse") {
            sparse_ = load_sparse_index(args.index);
            sparse_queries_ = read_sparse_records(queries);
        } else if (kind_ == "multivector") {
            multivector_.emplace(ingest_multivector(args.index, config.cosine));
            multivector_queries_ = read_multivector_records(queries);
        } else {
            throw ValidationError("unknown index kind '" + kind_ + "'");
        }
    }

    [[nodiscard]] std::size_t num_queries() const
    {
        if (kind_ == "lexical") {
            return text_queries_.size();
        }
        if (kind_ == "dense") {
            return dense_queries_.ids.size();
        }
        if (kind_ == "sparse") {
            return sparse_queries_.ids.size();
        }
        return multivector_queries_.ids.size();
    }

    [[nodiscard]] RunList search(std::size_t i, std::size_t k) const
    {
        if (kind_ == "lexical") {
            const auto& query = text_queries_[i];
            return with_context("query '" + query.id.str() + "'",
                                [&] { return bm25_search(*lexical_, config_.bm25, query, k, pool_); });
        }
        if (kind_ == "dense") {
            const auto& id = dense_queries_.ids[i];
            return with_context("query '" + id + "'", [&] {
                return dense_search(*dense_, QueryId(id), dense_queries_.matrix.row(i), k);
            });
        }
        if (kind_ == "sparse") {
            const auto& id = sparse_queries_.ids[i];
            return with_context("query '" + id + "'", [&] {
                return sparse_search(*sparse_, QueryId(id), sparse_queries_.vectors[i], k, pool_);
            });
        }
        const auto& id = multivector_queries_.ids[i];
        return with_context("query '" + id + "'", [&] {
            return multivector_search(*multivector_, QueryId(id), multivector_queries_.matrices[i], k);
        });
    }

  private:
    std::string kind_;
    const AppConfig& config_;
    CandidatePool pool_ = CandidatePool::matching;
    std::optional<LexicalIndex> lexical_;
    std::vector<Query> text_queries_;
    std::optional<FlatDenseIndex> dense_;
    DenseRecords dense_queries_;
    std::optional<SparseIndex> sparse_;
    SparseRecords sparse_queries_;
    std::optional<MultiVectorStore> multivector_;
    MultiVectorRecords multivector_queries_;
};

void cmd_search(const SearchArgs& args, const AppConfig& config, std::ostream& out)
{
    const Searcher searcher(args, config);
    std::vector<RunList> runs;
    for (std::size_t i = 0; i < searcher.num_queries(); ++i) {
        runs.push_back(searcher.search(i, config.k));
    }
    emit_runs(runs, args.output, args.tag, out);
}

// ---------------------------------------------------------------- fuse

struct FuseArgs {
    std::vector<std::string> runs;
    std::string method;
    std::string norm;
    std::string weights;
    std::optional<double> rrf_k;
    std::optional<std::size_t> depth;
    std::string output;
    std::string tag = "fused";
};

FusionSpec resolve_spec(const FuseArgs& args, const AppConfig& config)
{
    auto spec = config.fusion;
    if (!args.method.empty()) {
        spec.method = parse_fusion_method(args.method);
    }
    if (!args.norm.empty()) {
        spec.normalization = parse_normalization(args.norm);
    }
    if (!args.weights.empty()) {
        spec.weights = parse_fusion_spec({{"weights", args.weights}}).weights;
    }
    if (args.rrf_k) {
        spec.rrf_k = *args.rrf_k;
    }
    if (args.depth) {
        spec.depth = *args.depth;
    }
    return spec;
}

void cmd_fuse(const FuseArgs& args, const AppConfig& config, std::ostream& out)
{
    const auto spec = resolve_spec(args, config);
    const auto systems = read_systems(args.runs);
    std::vector<ScoreDistribution> dists;
    if (spec.method == FusionMethod::nsf && spec.normalization == Normalization::percentile) {
        dists = raw_distributions(systems);
    }
    const auto fused = fuse_systems(systems, spec, dists);
    emit_runs(fused, args.output, args.tag, out);
}

// ---------------------------------------------------------------- tune

struct TuneArgs {
    std::vector<std::string> runs;
    std::string qrels;
    std::string norm;
    std::string output;
};

void cmd_tune(const TuneArgs& args, const AppConfig& config, std::ostream& out)
{
    const fs::path qrels_path = args.qrels.empty() ? config.qrels : fs::path(args.qrels);
    if (qrels_path.empty()) {
        throw ValidationError("tune needs --qrels (or [paths] qrels in the config)");
    }
    const auto normalization =
        args.norm.empty() ? config.fusion.normalization : parse_normalization(args.norm);
    const auto metric = Metric::parse(config.tune_metric);
    const auto systems = read_systems(args.runs);
    const auto qrels = read_qrels(qrels_path);
    std::vector<ScoreDistribution> dists;
    if (normalization == Normalization::percentile) {
        dists = raw_distributions(systems);
    }
    const auto result = tune_weights(systems, qrels, normalization, metric, config.tune_step, dists);

    out << "weights " << join_weights(result.weights, 2) << '\n';
    out << fmt::format("{} {:.6f} over {} queries, {} grid points\n", metric.name(), result.objective,
                       result.queries, result.grid_points);
    if (!args.output.empty()) {
        nlohmann::ordered_json report;
        report["normalization"] = std::string(to_string(normalization));
        report["metric"] = metric.name();
        report["step"] = config.tune_step;
        report["runs"] = args.runs;
        report["weights"] = result.weights;
        report["objective"] = result.objective;
        report["queries"] = result.queries;
        report["grid_points"] = result.grid_points;
        write_text(args.output, report.dump(2) + "\n");
    }
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string run;
    std::string qrels;
    std::string json;
};

void cmd_eval(const EvalArgs& args, const AppConfig& config, std::ostream& out)
{
    const fs::path qrels_path = args.qrels.empty() ? config.qrels : fs::path(args.qrels);
    if (qrels_path.empty()) {
        throw ValidationError("eval needs --qrels (or [paths] qrels in the config)");
    }
    const auto runs = read_run(fs::path(args.run));
    const auto qrels = read_qrels(qrels_path);
    const auto metrics = standard_metrics(config.cutoffs, config.rr_cutoff);
    const auto report = evaluate_run(runs, qrels, metrics);
    out << report.to_table();
    if (!args.json.empty()) {
        write_text(args.json, report.to_json() + "\n");
    }
}

// ---------------------------------------------------------------- profile

struct ProfileArgs {
    CostModelInputs inputs;
    double cross_forward_flops = kCrossEncoderForwardFlops;
    std::optional<std::uint64_t> plaintext_bytes;
    SearchArgs live;
    std::size_t warmup = 3;
    std::string json;
};

std::string fmt_flops(double flops)
{
    return fmt::format("{:.1e}", flops);
}

std::string fmt_disk(const IndexSizeReport& size)
{
    if (size.mib() < 0.1) {
        return fmt::format("{:.1f}KiB", static_cast<double>(size.bytes) / 1024.0);
    }
    return fmt::format("{:.1f}MiB", size.mib());
}

void cmd_profile(const ProfileArgs& args, const AppConfig& config, std::ostream& out)
{
    const auto& in = args.inputs;
    const auto flops = estimate_flops(in, args.cross_forward_flops);

    std::uint64_t plaintext = 0;
    if (args.plaintext_bytes) {
        plaintext = *args.plaintext_bytes;
    } else if (!config.corpus.empty()) {
        plaintext = fs::file_size(config.corpus);
    }

    const auto dim = static_cast<std::uint64_t>(in.dim);
    const auto bits = static_cast<std::uint64_t>(in.bits_per_value);
    const auto docs = static_cast<std::uint64_t>(in.corpus_size);
    IndexSizeReport dense_size{estimate_flat_index_size(dim, bits, docs), plaintext};

    std::optional<LatencyReport> latency;
    std::optional<IndexSizeReport> live_size;
    if (!args.live.kind.empty()) {
        const Searcher searcher(args.live, config);
        std::vector<std::size_t> order(searcher.num_queries());
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        latency = measure_latency<std::size_t>(
            order, [&](std::size_t i) { (void)searcher.search(i, config.k); }, args.warmup);
        live_size = IndexSizeReport{fs::file_size(args.live.index), plaintext};
    }

    const auto system_of = [](const std::string& kind) {
        if (kind == "lexical") {
            return std::string("bm25");
        }
        return kind;
    };
    const std::string live_system = args.live.kind.empty() ? "" : system_of(args.live.kind);

    out << fmt::format("{:<24} {:>12} {:>8} {:>14} {:>10}  {}\n", "system", "disk", "ratio", "latency_s/q", "flops",
                       "formula");
    for (const auto& line : flops.lines) {
        std::optional<IndexSizeReport> size;
        if (line.system == "dense") {
            size = dense_size;
        }
        if (line.system == live_system && live_size) {
            size = live_size;
        }
        const std::string disk = size ? fmt_disk(*size) : "--";
        const std::string ratio =
            size && size->plaintext_bytes > 0 ? fmt::format("x{:.1f}", size->ratio_to_plaintext()) : "--";
        const std::string lat = line.system == live_system && latency ? fmt::format("{:.6f}", latency->mean) : "--";
        out << fmt::format("{:<24} {:>12} {:>8} {:>14} {:>10}  {}\n", line.system, disk, ratio, lat,
                           fmt_flops(line.flops), line.formula);
    }

    if (!args.json.empty()) {
        nlohmann::ordered_json report;
        report["inputs"] = {
            {"avg_query_len", in.avg_query_len},
            {"avg_doc_len", in.avg_doc_len},
            {"corpus_size", in.corpus_size},
            {"dim", in.dim},
            {"bits_per_value", in.bits_per_value},
            {"forward_flops", in.forward_flops},
            {"cross_encoder_forward_flops", args.cross_forward_flops},
            {"avg_query_nonzeros", in.avg_query_nonzeros},
            {"avg_posting_len", in.avg_posting_len},
            {"rerank_depth", in.rerank_depth},
            {"plaintext_bytes", plaintext},
        };
        nlohmann::ordered_json lines = nlohmann::ordered_json::object();
        for (const auto& line : flops.lines) {
            lines[line.system] = {{"flops", line.flops}, {"formula", line.formula}};
        }
        report["flops"] = lines;
        report["flat_index"] = {{"bytes", dense_size.bytes}, {"mib", dense_size.mib()},
                                {"ratio_to_plaintext", dense_size.ratio_to_plaintext()}};
        if (latency) {
            report["live"] = {{"system", live_system},
                              {"index", args.live.index},
                              {"index_bytes", live_size->bytes},
                              {"warmup", args.warmup},
                              {"queries", latency->samples.size()},
                              {"latency_mean_s", latency->mean},
                              {"latency_min_s", latency->min},
                              {"latency_max_s", latency->max},
                              {"samples_s", latency->samples}};
        }
        write_text(args.json, report.dump(2) + "\n");
    }
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::vector<std::string> runs;
    std::string qrels;
    std::string corpus;
    std::string output_dir;
};

std::string file_safe(std::string name)
{
    for (auto& c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-'
                        || c == '_' || c == '.';
        if (!ok) {
            c = '_';
        }
    }
    return name;
}

void cmd_analyze(const AnalyzeArgs& args, const AppConfig& config, std::ostream& out)
{
    const fs::path qrels_path = args.qrels.empty() ? config.qrels : fs::path(args.qrels);
    const fs::path corpus_path = args.corpus.empty() ? config.corpus : fs::path(args.corpus);
    const fs::path dir = args.output_dir.empty() ? config.output_dir : fs::path(args.output_dir);
    if (qrels_path.empty() || corpus_path.empty() || dir.empty()) {
        throw ValidationError("analyze needs --qrels, --corpus and --output-dir (or their [paths] entries)");
    }
    const auto systems = read_systems(args.runs);
    const auto qrels = read_qrels(qrels_path);
    const auto corpus = read_corpus(corpus_path);

    std::vector<std::string> names;
    std::set<std::string> seen;
    for (std::size_t m = 0; m < systems.size(); ++m) {
        auto name = file_safe(system_name(systems[m], m));
        if (!seen.insert(name).second) {
            name += "_" + std::to_string(m + 1);
            seen.insert(name);
        }
        names.push_back(name);
    }

    std::vector<ScoreDistribution> normalized;
    for (std::size_t m = 0; m < systems.size(); ++m) {
        const auto raw = build_score_distribution(names[m], systems[m]);
        for (auto method : {Normalization::min_max, Normalization::z_score, Normalization::percentile}) {
            ScoreDistributionBuilder builder(names[m]);
            std::vector<double> scores;
            for (const auto& run : systems[m]) {
                if (run.empty()) {
                    continue;
                }
                scores.clear();
                for (const auto& entry : run.entries()) {
                    scores.push_back(entry.score);
                }
                for (double s : normalize(scores, method, &raw)) {
                    builder.add(s);
                }
            }
            const auto dist = builder.build();
            auto file = open_file(dir / fmt::format("hist_{}_{}.csv", names[m], to_string(method)));
            write_histogram_csv(export_histograms(dist, config.bins), file);
            if (method == Normalization::min_max) {
                normalized.push_back(dist);
            }
        }
    }

    std::vector<DocId> docs;
    for (const auto& doc : corpus) {
        docs.push_back(doc.id);
    }
    const auto pairs = sample_pairs(systems, qrels, docs, config.positives, config.negatives, config.seed);
    {
        auto file = open_file(dir / "pairs.csv");
        write_pairs_csv(pairs, names, normalized[0], normalized[1], file);
    }
    const auto report = complementarity_report(pairs, normalized[0], normalized[1]);
    {
        auto file = open_file(dir / "regions.csv");
        write_regions_csv(report, file);
    }
    out << fmt::format("{} pairs ({} positive, {} negative); regions over {} vs {}\n", pairs.size(),
                       config.positives, config.negatives, names[0], names[1]);
    for (auto q : {Quadrant::A, Quadrant::B, Quadrant::C, Quadrant::D}) {
        const auto& counts = report[q];
        out << fmt::format("  {}: {} relevant, {} non-relevant{}\n", to_string(q), counts.relevant,
                           counts.non_relevant,
                           counts.agreement ? fmt::format(", agreement {:.3f}", *counts.agreement) : "");
    }
    out << fmt::format("  unlabeled: {}\n", report.unlabeled);
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    SyntheticOptions options;
    std::string output_dir;
};

void cmd_synth(const SynthArgs& args, std::ostream& out)
{
    const auto bench = generate_synthetic(args.options);
    write_synthetic(bench, args.output_dir);
    out << fmt::format("wrote {} documents and {} queries to {}\n", bench.corpus.size(), bench.queries.size(),
                       args.output_dir);
}

std::optional<std::string> find_config(int argc, const char* const* argv)
{
    for (int i = 1; i < argc; ++i) {
        const std::string_view arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            return std::string(argv[i + 1]);
        }
        if (arg.starts_with("--config=")) {
            return std::string(arg.substr(9));
        }
    }
    return std::nullopt;
}

int report_error(std::ostream& err, std::string_view kind, std::string_view message, int code)
{
    std::string line(message);
    for (auto& c : line) {
        if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    err << "error[" << kind << "]: " << line << '\n';
    return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    try {
        AppConfig config;
        const auto config_path = find_config(argc, argv);
        if (config_path) {
            config = load_config(*config_path);
        }

        CLI::App app{"Hybrid retrieval toolkit: indexing, search, late fusion, evaluation and analysis", "hybridir"};
        app.require_subcommand(1);
        std::string config_flag;
        app.add_option("--config", config_flag, "INI config file; command-line flags override its values")
            ->check(CLI::ExistingFile);

        const auto add_bm25 = [&](CLI::App* sub) {
            sub->add_option("--k1", config.bm25.k1, "BM25 term-frequency saturation")->capture_default_str();
            sub->add_option("--b", config.bm25.b, "BM25 length normalization")->capture_default_str();
        };
        const std::vector<std::string> kinds{"lexical", "dense", "sparse", "multivector"};

        IndexArgs index_args;
        auto* index = app.add_subcommand("index", "Build an index from a corpus or document embeddings");
        index->add_option("kind", index_args.kind, "lexical, dense, sparse or multivector")
            ->required()
            ->check(CLI::IsMember(kinds));
        index->add_option("-i,--input", index_args.input,
                          "Corpus JSONL (lexical) or document embeddings (JSONL or FBVX)")
            ->check(CLI::ExistingFile);
        index->add_option("-o,--output", index_args.output, "Index file to write")->required();

        SearchArgs search_args;
        auto* search = app.add_subcommand("search", "Retrieve the top k documents for every query");
        search->add_option("kind", search_args.kind, "lexical, dense, sparse or multivector")
            ->required()
            ->check(CLI::IsMember(kinds));
        search->add_option("--index", search_args.index, "Index file")->required()->check(CLI::ExistingFile);
        search->add_option("-q,--queries", search_args.queries,
                           "Queries JSONL (lexical) or query embeddings of the same kind")
            ->check(CLI::ExistingFile);
        search->add_option("-k", config.k, "Documents per query")->capture_default_str();
        search->add_option("--pool", search_args.pool, "Candidates for inverted indexes: matching or full")
            ->capture_default_str();
        search->add_flag("--cosine,!--no-cosine", config.cosine, "Normalize vectors (dense, multivector)");
        search->add_option("-o,--output", search_args.output, "Run file (default stdout)");
        search->add_option("--tag", search_args.tag, "Run tag (default: bm25, dense, sparse or multivector)");
        add_bm25(search);

        FuseArgs fuse_args;
        auto* fuse = app.add_subcommand("fuse", "Fuse run files, one per system");
        fuse->add_option("runs", fuse_args.runs, "Run files")->required()->check(CLI::ExistingFile);
        fuse->add_option("--method", fuse_args.method, "bcf, rrf or nsf (default nsf)");
        fuse->add_option("--norm", fuse_args.norm, "NSF normalization: minmax, zscore or percentile (default zscore)");
        fuse->add_option("--weights", fuse_args.weights, "NSF weights, comma separated, summing to 1 (default equal)");
        fuse->add_option("--rrf-k", fuse_args.rrf_k, "RRF constant (default 60)");
        fuse->add_option("--depth", fuse_args.depth, "Use only the top entries of each run (default all)");
        fuse->add_option("-o,--output", fuse_args.output, "Run file (default stdout)");
        fuse->add_option("--tag", fuse_args.tag, "Run tag")->capture_default_str();

        TuneArgs tune_args;
        auto* tune = app.add_subcommand("tune", "Grid-search NSF weights on judged queries");
        tune->add_option("runs", tune_args.runs, "Run files (2 to 4)")->required()->check(CLI::ExistingFile);
        tune->add_option("--qrels", tune_args.qrels, "Qrels file")->check(CLI::ExistingFile);
        tune->add_option("--norm", tune_args.norm, "minmax, zscore or percentile (default zscore)");
        tune->add_option("--metric", config.tune_metric, "Objective: R@k, MRR@k or RP")->capture_default_str();
        tune->add_option("--step", config.tune_step, "Grid step; must divide 1")->capture_default_str();
        tune->add_option("-o,--output", tune_args.output, "JSON report");

        EvalArgs eval_args;
        std::string cutoffs_text;
        auto* eval = app.add_subcommand("eval", "Evaluate a run file against qrels");
        eval->add_option("run", eval_args.run, "Run file")->required()->check(CLI::ExistingFile);
        eval->add_option("--qrels", eval_args.qrels, "Qrels file")->check(CLI::ExistingFile);
        eval->add_option("--cutoffs", cutoffs_text, "Recall cutoffs, comma separated (default 10,100,500)");
        eval->add_option("--rr-cutoff", config.rr_cutoff, "MRR cutoff")->capture_default_str();
        eval->add_option("--json", eval_args.json, "Also write the report as JSON");

        ProfileArgs profile_args;
        std::optional<std::uint64_t> plaintext;
        auto* profile = app.add_subcommand("profile", "FLOPs, index size and latency estimates");
        auto& in = profile_args.inputs;
        profile->add_option("--query-len", in.avg_query_len, "Average query length in tokens")->capture_default_str();
        profile->add_option("--doc-len", in.avg_doc_len, "Average document length in tokens")->capture_default_str();
        profile->add_option("--corpus-size", in.corpus_size, "Number of documents")->capture_default_str();
        profile->add_option("--dim", in.dim, "Embedding dimension")->capture_default_str();
        profile->add_option("--bits", in.bits_per_value, "Bits per stored value")->capture_default_str();
        profile->add_option("--forward-flops", in.forward_flops, "Query encoder forward pass FLOPs")
            ->capture_default_str();
        profile->add_option("--cross-forward-flops", profile_args.cross_forward_flops,
                            "Cross-encoder forward pass FLOPs")
            ->capture_default_str();
        profile->add_option("--nonzeros", in.avg_query_nonzeros, "Average non-zero terms per sparse query")
            ->capture_default_str();
        profile->add_option("--posting-len", in.avg_posting_len, "Average inverted list length")
            ->capture_default_str();
        profile->add_option("--rerank-depth", in.rerank_depth, "Candidates re-ranked by the cross-encoder")
            ->capture_default_str();
        profile->add_option("--plaintext-bytes", plaintext, "Plain-text corpus size (default: size of [paths] corpus)");
        profile->add_option("--kind", profile_args.live.kind, "Measure latency of a live index of this kind")
            ->check(CLI::IsMember(kinds));
        profile->add_option("--index", profile_args.live.index, "Index file for latency measurement")
            ->check(CLI::ExistingFile);
        profile->add_option("-q,--queries", profile_args.live.queries, "Queries for latency measurement")
            ->check(CLI::ExistingFile);
        profile->add_option("-k", config.k, "Documents per query")->capture_default_str();
        profile->add_option("--warmup", profile_args.warmup, "Untimed warm-up queries")->capture_default_str();
        profile->add_flag("--cosine,!--no-cosine", config.cosine, "Normalize vectors (dense, multivector)");
        profile->add_option("--json", profile_args.json, "Write inputs and results as JSON");
        add_bm25(profile);

        AnalyzeArgs analyze_args;
        auto* analyze = app.add_subcommand("analyze", "Score distributions and complementarity of two or more systems");
        analyze->add_option("runs", analyze_args.runs, "Run files; the first two define the quadrants")
            ->required()
            ->expected(2, -1)
            ->check(CLI::ExistingFile);
        analyze->add_option("--qrels", analyze_args.qrels, "Qrels file")->check(CLI::ExistingFile);
        analyze->add_option("--corpus", analyze_args.corpus, "Corpus JSONL (negatives are drawn from it)")
            ->check(CLI::ExistingFile);
        analyze->add_option("-o,--output-dir", analyze_args.output_dir, "Directory for the CSV files");
        analyze->add_option("--positives", config.positives, "Relevant pairs to sample")->capture_default_str();
        analyze->add_option("--negatives", config.negatives, "Non-relevant pairs to sample")->capture_default_str();
        analyze->add_option("--seed", config.seed, "Sampling seed")->capture_default_str();
        analyze->add_option("--bins", config.bins, "Histogram bins")->capture_default_str();

        SynthArgs synth_args;
        auto* synth = app.add_subcommand("synth", "Generate the synthetic hybrid benchmark");
        synth->add_option("-o,--output-dir", synth_args.output_dir, "Directory to write")->required();
        synth->add_option("--seed", synth_args.options.seed, "Generator seed")->capture_default_str();
        synth->add_option("--docs", synth_args.options.num_docs, "Number of documents")->capture_default_str();
        synth->add_option("--queries", synth_args.options.num_queries, "Number of queries")->capture_default_str();

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e, out, err);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e, out, err);
        } catch (const CLI::ParseError& e) {
            return report_error(err, "usage", e.what(), kUsage);
        }

        if (!cutoffs_text.empty()) {
            config.cutoffs = parse_cutoffs(cutoffs_text);
        }
        config.validate();

        if (index->parsed()) {
            cmd_index(index_args, config, out);
        } else if (search->parsed()) {
            cmd_search(search_args, config, out);
        } else if (fuse->parsed()) {
            cmd_fuse(fuse_args, config, out);
        } else if (tune->parsed()) {
            cmd_tune(tune_args, config, out);
        } else if (eval->parsed()) {
            cmd_eval(eval_args, config, out);
        } else if (profile->parsed()) {
            if (!profile_args.live.kind.empty()
                && (profile_args.live.index.empty() || (profile_args.live.queries.empty() && config.queries.empty()))) {
                return report_error(err, "usage", "--kind needs --index and --queries", kUsage);
            }
            profile_args.plaintext_bytes = plaintext;
            cmd_profile(profile_args, config, out);
        } else if (analyze->parsed()) {
            cmd_analyze(analyze_args, config, out);
        } else if (synth->parsed()) {
            cmd_synth(synth_args, out);
        }
        out.flush();
        return kOk;
    } catch (const ParseError& e) {
        return report_error(err, "parse", e.what(), kDataError);
    } catch (const ValidationError& e) {
        return report_error(err, "validation", e.what(), kDataError);
    } catch (const IoError& e) {
        return report_error(err, "io", e.what(), kDataError);
    } catch (const Error& e) {
        return report_error(err, "data", e.what(), kDataError);
    } catch (const std::filesystem::filesystem_error& e) {
        return report_error(err, "io", e.what(), kDataError);
    } catch (const std::exception& e) {
        return report_error(err, "internal", e.what(), kInternal);
    }
}

}  // namespace hybrid::cli
