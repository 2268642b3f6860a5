// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "cli_driver.hpp"
#include "fixtures.hpp"
#include "hybrid/bm25.hpp"
#include "hybrid/dense_index.hpp"
#include "hybrid/efficiency.hpp"
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
#include "oracles.hpp"
#include "support.hpp"

#ifndef HYBRID_SYNTHETIC_DATA_DIR
#error "HYBRID_SYNTHETIC_DATA_DIR must point at the bundled benchmark"
#endif

using namespace hybrid;
namespace fs = std::filesystem;
using testing_support::Entries;
using testing_support::make_run;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first few failure messages of a check.
class Checker {
  public:
    void expect(bool condition, const std::string& message)
    {
        if (!condition) {
            ++failures_;
            if (messages_.size() < 3) {
                messages_.push_back(message);
            }
        }
    }
    [[nodiscard]] bool ok() const { return failures_ == 0; }
    [[nodiscard]] Outcome outcome(const std::string& summary) const
    {
        if (ok()) {
            return {true, summary};
        }
        std::string text = std::to_string(failures_) + " mismatches";
        for (const auto& m : messages_) {
            text += "; " + m;
        }
        return {false, text};
    }

  private:
    std::size_t failures_ = 0;
    std::vector<std::string> messages_;
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string sci2(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1e", x);
    return buf;
}

std::map<std::string, double> score_map(const RunList& run)
{
    std::map<std::string, double> out;
    for (const auto& e : run.entries()) {
        out[e.doc.str()] = e.score;
    }
    return out;
}

void compare_scores(Checker& check, const RunList& fused, const oracle::Scores& expected, const std::string& what)
{
    const auto got = score_map(fused);
    check.expect(got.size() == expected.size(), what + ": pool size " + std::to_string(got.size()) + " vs "
                                                    + std::to_string(expected.size()));
    for (const auto& [doc, score] : expected) {
        const auto it = got.find(doc);
        if (it == got.end()) {
            check.expect(false, what + ": missing " + doc);
            continue;
        }
        check.expect(testing_support::close_rel(it->second, score, 1e-12),
                     fmt::format("{} {}: {} vs {}", what, doc, it->second, score));
    }
}

std::vector<RunList> to_runs(const std::vector<Entries>& entries)
{
    std::vector<RunList> runs;
    for (std::size_t m = 0; m < entries.size(); ++m) {
        runs.push_back(make_run("q", "s" + std::to_string(m), entries[m]));
    }
    return runs;
}

// Checks that `run` is a valid descending ordering of the oracle scores:
// every returned doc carries its oracle score, and the oracle score at each
// position equals the oracle's own i-th best, both to `tol`.
void compare_ordering(Checker& check, const RunList& run, const oracle::Entries& expected, double tol,
                      const std::string& what)
{
    std::map<std::string, double> truth(expected.begin(), expected.end());
    check.expect(run.size() == expected.size(),
                 what + ": length " + std::to_string(run.size()) + " vs " + std::to_string(expected.size()));
    for (std::size_t i = 0; i < run.size() && i < expected.size(); ++i) {
        const double own = truth.at(run[i].doc.str());
        check.expect(std::abs(run[i].score - own) <= tol, fmt::format("{} score of {}", what, run[i].doc.str()));
        check.expect(std::abs(own - expected[i].second) <= tol, fmt::format("{} position {}", what, i + 1));
    }
}

// ---------------------------------------------------------------- criteria

Outcome flops_reproduction()
{
    CostModelInputs in;
    in.avg_query_len = 15;
    in.corpus_size = 27'942;
    const double f = flops_bm25(in);
    const bool exact = f == 1'676'520.0;
    return {exact && sci2(f) == "1.7e+06", fmt::format("flops_bm25 = {:.0f} ({})", f, sci2(f))};
}

Outcome index_size_reproduction()
{
    const std::vector<std::pair<std::uint64_t, double>> table{{384, 40.9}, {768, 81.9}, {1024, 109.1}};
    Checker check;
    std::string summary;
    for (const auto& [dim, expected] : table) {
        const IndexSizeReport size{estimate_flat_index_size(dim, 32, 27'942), 0};
        check.expect(std::abs(size.mib() - expected) <= 0.05, fmt::format("d={} gives {:.3f} MiB", dim, size.mib()));
        summary += fmt::format("{}{:.2f}", summary.empty() ? "" : " / ", size.mib());
    }
    return check.outcome(summary + " MiB");
}

Outcome cross_encoder_flops()
{
    CostModelInputs in;
    in.rerank_depth = 1000;
    in.forward_flops = 2.2e10;
    const double f = flops_cross_encoder(in);
    return {f == 2.2e13, fmt::format("flops_cross_encoder = {} ({})", f, sci2(f))};
}

Outcome fusion_oracle_equivalence()
{
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> weight_units(0, 20);
    Checker check;
    for (int instance = 0; instance < 100; ++instance) {
        const auto entries = testing_support::random_fusion_instance(rng);
        const auto runs = to_runs(entries);
        const auto tag = "instance " + std::to_string(instance);

        for (std::size_t m = 0; m < runs.size(); ++m) {
            const auto ranks = rank_positions(runs[m]);
            for (const auto& [doc, pi] : oracle::ranks(entries[m])) {
                check.expect(ranks.at(DocId(doc)) == pi, tag + " rank of " + doc);
            }
        }
        compare_scores(check, fuse_bcf(runs), oracle::bcf(entries), tag + " bcf");
        compare_scores(check, fuse_rrf(runs), oracle::rrf(entries, 60.0), tag + " rrf");

        std::vector<double> units;
        for (std::size_t m = 0; m < runs.size(); ++m) {
            units.push_back(1.0 + weight_units(rng));
        }
        double total = 0.0;
        for (double u : units) {
            total += u;
        }
        std::vector<double> w;
        for (double u : units) {
            w.push_back(u / total);
        }
        compare_scores(check, fuse_nsf(runs, w, Normalization::min_max),
                       oracle::nsf(entries, w, oracle::Norm::min_max), tag + " nsf/minmax");
        compare_scores(check, fuse_nsf(runs, w, Normalization::z_score),
                       oracle::nsf(entries, w, oracle::Norm::z_score), tag + " nsf/zscore");

        std::vector<std::vector<double>> samples;
        std::vector<ScoreDistribution> dists;
        std::uniform_real_distribution<double> extra(-6.0, 21.0);
        for (std::size_t m = 0; m < runs.size(); ++m) {
            std::vector<double> sample;
            for (const auto& [doc, s] : entries[m]) {
                sample.push_back(s);
            }
            for (int i = 0; i < 50; ++i) {
                sample.push_back(extra(rng));
            }
            ScoreDistributionBuilder b("s" + std::to_string(m));
            for (double s : sample) {
                b.add(s);
            }
            dists.push_back(b.build());
            samples.push_back(std::move(sample));
        }
        compare_scores(check, fuse_nsf(runs, w, Normalization::percentile, dists),
                       oracle::nsf(entries, w, oracle::Norm::percentile, samples), tag + " nsf/percentile");
    }
    const double elapsed = seconds_since(start);
    check.expect(elapsed < 10.0, fmt::format("took {:.2f}s", elapsed));
    return check.outcome(fmt::format("100 instances, BCF/RRF/NSF(x3) and ranks agree to 1e-12 in {:.2f}s", elapsed));
}

Outcome normalization_properties()
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    std::uniform_int_distribution<std::size_t> len(2, 300);
    Checker check;
    for (int t = 0; t < 100; ++t) {
        std::vector<double> s(len(rng));
        for (auto& x : s) {
            x = u(rng);
        }
        const auto mm = normalize(s, Normalization::min_max);
        const auto lo = std::min_element(s.begin(), s.end()) - s.begin();
        const auto hi = std::max_element(s.begin(), s.end()) - s.begin();
        check.expect(mm[static_cast<std::size_t>(lo)] == 0.0 && mm[static_cast<std::size_t>(hi)] == 1.0,
                     "min-max extremes");
        const auto z = normalize(s, Normalization::z_score);
        double mean = 0.0;
        for (double x : z) {
            mean += x;
        }
        mean /= static_cast<double>(z.size());
        double var = 0.0;
        for (double x : z) {
            var += (x - mean) * (x - mean);
        }
        const double sigma = std::sqrt(var / static_cast<double>(z.size()));
        check.expect(std::abs(mean) <= 1e-12, fmt::format("z mean {}", mean));
        check.expect(std::abs(sigma - 1.0) <= 1e-12, fmt::format("z sigma {}", sigma));

        ScoreDistributionBuilder b("s");
        for (double x : s) {
            b.add(x);
        }
        const auto dist = b.build();
        const double n = static_cast<double>(dist.size());
        check.expect(std::abs(dist.percentile(dist.median()) - 0.5) <= 1.0 / (2.0 * n), "percentile of median");
    }

    ScoreDistributionBuilder b("s");
    for (int i = 0; i < 5000; ++i) {
        b.add(std::round(u(rng) * 4.0) / 4.0);  // plenty of ties
    }
    const auto dist = b.build();
    std::uniform_real_distribution<double> probe(-60.0, 60.0);
    std::vector<double> probes(1000);
    for (auto& p : probes) {
        p = probe(rng);
    }
    std::sort(probes.begin(), probes.end());
    for (std::size_t i = 1; i < probes.size(); ++i) {
        check.expect(dist.percentile(probes[i - 1]) <= dist.percentile(probes[i]), "percentile monotone");
    }
    return check.outcome("100 random lists plus 1,000 sorted percentile probes");
}

Outcome rank_only_invariance()
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    std::uniform_real_distribution<double> rate(0.05, 0.3);
    std::uniform_real_distribution<double> shift(-1e3, 1e3);
    std::uniform_int_distribution<int> family(0, 2);
    Checker check;
    for (int trial = 0; trial < 20; ++trial) {
        auto entries = testing_support::random_fusion_instance(rng);
        std::vector<Entries> mapped;
        for (const auto& run : entries) {
            const double a = scale(rng);
            const double k = rate(rng);
            const double c = shift(rng);
            const int f = family(rng);
            Entries out;
            for (const auto& [doc, s] : run) {
                const double v = f == 0 ? a * s + c : f == 1 ? a * std::exp(k * s) + c : a * s * s * s + c;
                out.emplace_back(doc, v);
            }
            // a rescaling that collapses distinct scores in floating point is not strictly monotone
            const auto before = oracle::ranks(run);
            const auto after = oracle::ranks(out);
            check.expect(before == after, fmt::format("trial {} rescaling lost strictness", trial));
            mapped.push_back(std::move(out));
        }
        const auto runs = to_runs(entries);
        const auto other = to_runs(mapped);
        check.expect(fuse_rrf(runs) == fuse_rrf(other), fmt::format("trial {} rrf", trial));
        check.expect(fuse_bcf(runs) == fuse_bcf(other), fmt::format("trial {} bcf", trial));
    }
    return check.outcome("20 trials, RRF and BCF bit-identical under monotone rescaling");
}

Outcome self_fusion_identity()
{
    std::mt19937_64 rng(7);
    Checker check;
    struct Combo {
        FusionMethod method;
        Normalization norm;
        const char* name;
    };
    const Combo combos[] = {{FusionMethod::bcf, Normalization::z_score, "bcf"},
                            {FusionMethod::rrf, Normalization::z_score, "rrf"},
                            {FusionMethod::nsf, Normalization::min_max, "nsf/minmax"},
                            {FusionMethod::nsf, Normalization::z_score, "nsf/zscore"},
                            {FusionMethod::nsf, Normalization::percentile, "nsf/percentile"}};
    for (int trial = 0; trial < 20; ++trial) {
        const auto entries = testing_support::random_entries(rng, 300, 1 + static_cast<std::size_t>(trial) * 13, trial % 2 == 0);
        const std::vector<RunList> runs{make_run("q", "s", entries)};
        const auto dists = std::vector<ScoreDistribution>{build_score_distribution("s", runs)};
        for (const auto& combo : combos) {
            FusionSpec spec;
            spec.method = combo.method;
            spec.normalization = combo.norm;
            const auto fused = fuse(runs, spec, dists);
            check.expect(testing_support::doc_order(fused) == testing_support::doc_order(runs[0]),
                         fmt::format("trial {} {}", trial, combo.name));
        }
    }
    return check.outcome("5 method/normalization combinations, 20 runs each");
}

Outcome retrieval_oracle_equivalence()
{
    Checker check;
    std::mt19937_64 rng(8);

    // BM25 on the synthetic corpus, zero-shot and in-domain parameters.
    SyntheticOptions options;
    options.num_docs = 400;
    options.num_queries = 15;
    const auto bench = generate_synthetic(options);
    const auto lexical = build_lexical_index(bench.corpus);
    std::vector<std::vector<std::string>> docs;
    for (const auto& doc : bench.corpus) {
        docs.push_back(tokenize(doc.text));
    }
    for (const auto& params : {kBm25InDomain, kBm25ZeroShot}) {
        for (const auto& query : bench.queries) {
            const auto terms = tokenize(query.text);
            oracle::Entries expected;
            for (std::size_t i = 0; i < docs.size(); ++i) {
                expected.emplace_back(bench.corpus[i].id.str(), oracle::bm25(docs, i, terms, params.k1, params.b));
            }
            const auto run = bm25_search(lexical, params, query.id, terms, docs.size(), CandidatePool::full_corpus);
            compare_ordering(check, run, oracle::ranked(expected), 1e-9, "bm25 " + query.id.str());
        }
    }

    // Dense: 1,000 random vectors, cosine.
    std::normal_distribution<double> g;
    const auto random_vec = [&](std::size_t dim) {
        std::vector<double> v(dim);
        for (auto& x : v) {
            x = g(rng);
        }
        return v;
    };
    {
        DenseRecords records;
        std::vector<double> values;
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < 1000; ++i) {
            rows.push_back(random_vec(24));
            records.ids.push_back("d" + std::to_string(i));
            values.insert(values.end(), rows.back().begin(), rows.back().end());
        }
        records.matrix = TokenMatrix(24, values);
        const FlatDenseIndex index(records, true);
        for (int t = 0; t < 5; ++t) {
            const auto q = random_vec(24);
            oracle::Entries expected;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                expected.emplace_back(records.ids[i], oracle::dot(oracle::unit(q), oracle::unit(rows[i])));
            }
            compare_ordering(check, dense_search(index, QueryId("q"), q, 1000), oracle::ranked(expected), 1e-9, "dense");
        }
    }

    // Sparse: 1,000 docs with up to 100 terms; the dense-expansion identity.
    {
        std::uniform_int_distribution<int> term(0, 499);
        std::uniform_int_distribution<int> nnz(1, 100);
        std::uniform_real_distribution<double> weight(0.01, 4.0);
        const auto random_sparse = [&] {
            std::map<std::string, double> m;
            for (int i = nnz(rng); i > 0; --i) {
                m["t" + std::to_string(term(rng))] = weight(rng);
            }
            return m;
        };
        SparseRecords records;
        std::vector<std::map<std::string, double>> raw;
        for (int i = 0; i < 1000; ++i) {
            raw.push_back(random_sparse());
            records.ids.push_back("d" + std::to_string(i));
            records.vectors.emplace_back(std::vector<std::pair<std::string, double>>(raw.back().begin(), raw.back().end()));
        }
        const SparseIndex index(records);
        for (int t = 0; t < 5; ++t) {
            const auto q = random_sparse();
            oracle::Entries expected;
            for (std::size_t i = 0; i < raw.size(); ++i) {
                expected.emplace_back(records.ids[i], oracle::sparse_dot(q, raw[i]));
            }
            const SparseVector qv(std::vector<std::pair<std::string, double>>(q.begin(), q.end()));
            compare_ordering(check, sparse_search(index, QueryId("q"), qv, 1000, CandidatePool::full_corpus),
                             oracle::ranked(expected), 1e-9, "sparse");
        }
    }

    // Multi-vector: 300 docs of 2 to 9 tokens.
    {
        std::uniform_int_distribution<std::size_t> tokens(2, 9);
        MultiVectorRecords records;
        records.dim = 16;
        std::vector<std::vector<std::vector<double>>> raw;
        for (int i = 0; i < 300; ++i) {
            std::vector<std::vector<double>> m;
            std::vector<double> values;
            for (auto n = tokens(rng); n > 0; --n) {
                m.push_back(random_vec(16));
                values.insert(values.end(), m.back().begin(), m.back().end());
            }
            raw.push_back(std::move(m));
            records.ids.push_back("d" + std::to_string(i));
            records.matrices.emplace_back(16, values);
        }
        const MultiVectorStore store(records, false);
        for (int t = 0; t < 5; ++t) {
            std::vector<std::vector<double>> q;
            std::vector<double> values;
            for (int i = 0; i < 4; ++i) {
                q.push_back(random_vec(16));
                values.insert(values.end(), q.back().begin(), q.back().end());
            }
            oracle::Entries expected;
            for (std::size_t i = 0; i < raw.size(); ++i) {
                expected.emplace_back(records.ids[i], oracle::maxsim(q, raw[i]));
            }
            compare_ordering(check, multivector_search(store, QueryId("q"), TokenMatrix(16, values), 300),
                             oracle::ranked(expected), 1e-9, "multivector");
        }
    }
    return check.outcome("BM25 (400 docs, 2 settings), dense (1,000), sparse (1,000), multi-vector (300) match brute force to 1e-9");
}

Outcome metric_correctness()
{
    Checker check;
    const auto run_of = [](std::vector<std::string> ids) {
        Entries e;
        double s = static_cast<double>(ids.size());
        for (auto& id : ids) {
            e.emplace_back(id, s--);
        }
        return make_run("q", "s", e);
    };
    const auto set_of = [](std::initializer_list<const char*> ids) {
        std::set<DocId> out;
        for (const auto* id : ids) {
            out.emplace(id);
        }
        return out;
    };
    check.expect(recall_at_k(run_of({"a", "x", "b", "y", "c", "d"}), set_of({"a", "b", "c", "d"}), 3) == 0.5,
                 "R@k: 2 of 4 relevant");
    check.expect(rr_at_k(run_of({"x", "y", "a"}), set_of({"a"}), 10) == 1.0 / 3.0, "RR: first relevant at 3");
    check.expect(r_precision(run_of({"a", "x", "b"}), set_of({"a", "b"})) == 0.5, "RP: N=2 with one hit");

    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> rel_count(1, 12);
    std::uniform_int_distribution<std::size_t> cutoff(1, 120);
    std::uniform_int_distribution<std::size_t> doc(0, 99);
    std::uniform_int_distribution<std::size_t> length(1, 100);
    for (int t = 0; t < 100; ++t) {
        const auto run = make_run("q", "s", testing_support::random_entries(rng, 100, length(rng), t % 2 == 0));
        std::set<DocId> relevant;
        std::set<std::string> ids;
        for (auto n = rel_count(rng); n > 0; --n) {
            const auto id = "d" + std::to_string(doc(rng));
            relevant.emplace(id);
            ids.insert(id);
        }
        const auto ranking = testing_support::doc_order(run);
        const auto k = cutoff(rng);
        check.expect(recall_at_k(run, relevant, k) == oracle::recall(ranking, ids, k), "random R@k");
        check.expect(rr_at_k(run, relevant, k) == oracle::reciprocal_rank(ranking, ids, k), "random RR@k");
        check.expect(r_precision(run, relevant) == oracle::r_precision(ranking, ids), "random RP");
    }
    return check.outcome("3 hand examples and 100 random instances");
}

Outcome qualitative_fusion_effect()
{
    const auto start = std::chrono::steady_clock::now();
    const auto bench = generate_synthetic();
    const auto lexical = build_lexical_index(bench.corpus);
    const FlatDenseIndex dense(bench.dense_docs, true);

    std::vector<RunList> bm25_runs;
    std::vector<RunList> dense_runs;
    for (std::size_t i = 0; i < bench.queries.size(); ++i) {
        bm25_runs.push_back(bm25_search(lexical, kBm25InDomain, bench.queries[i], 100));
        dense_runs.push_back(dense_search(dense, bench.queries[i].id, bench.dense_queries.matrix.row(i), 100));
    }
    const std::vector<std::vector<RunList>> systems{bm25_runs, dense_runs};
    FusionSpec spec;  // NSF, z-score, equal weights
    const auto fused = fuse_systems(systems, spec);

    const std::vector<Metric> metrics{Metric::parse("R@10")};
    const double r_bm25 = evaluate_run(bm25_runs, bench.qrels, metrics).mean[0];
    const double r_dense = evaluate_run(dense_runs, bench.qrels, metrics).mean[0];
    const double r_fused = evaluate_run(fused, bench.qrels, metrics).mean[0];
    const double elapsed = seconds_since(start);
    return {r_fused > r_bm25 && r_fused > r_dense && elapsed < 30.0,
            fmt::format("R@10 bm25 {:.3f}, dense {:.3f}, nsf(zscore, equal) {:.3f} in {:.2f}s", r_bm25, r_dense,
                        r_fused, elapsed)};
}

Outcome tuning_determinism()
{
    Checker check;
    std::string summary;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto planted = testing_support::planted_three_systems(seed);
        const auto first = tune_weights(planted.systems, planted.qrels, Normalization::z_score, Metric::parse("R@10"), 0.05);
        const auto second = tune_weights(planted.systems, planted.qrels, Normalization::z_score, Metric::parse("R@10"), 0.05);
        const auto expected = oracle::tune_three(planted.oracle_queries, 20, oracle::Norm::z_score, 10);
        std::vector<double> weights;
        for (auto c : expected.counts) {
            weights.push_back(static_cast<double>(c) / 20.0);
        }
        check.expect(first.grid_points == 231, fmt::format("seed {} grid {}", seed, first.grid_points));
        check.expect(first.weights == second.weights && first.objective == second.objective,
                     fmt::format("seed {} repeat differs", seed));
        check.expect(first.weights == weights && first.objective == expected.objective,
                     fmt::format("seed {} optimum differs from oracle", seed));
        summary += fmt::format("{}({:.2f},{:.2f},{:.2f})", summary.empty() ? "" : " ", first.weights[0],
                               first.weights[1], first.weights[2]);
    }
    return check.outcome("231 grid points; optima " + summary);
}

Outcome reproducibility()
{
    const auto start = std::chrono::steady_clock::now();
    const fs::path data = HYBRID_SYNTHETIC_DATA_DIR;
    const auto corpus = read_corpus(data / "corpus.jsonl");
    const auto queries = read_queries(data / "queries.jsonl");
    if (corpus.size() != 200 || queries.size() != 20) {
        return {false, fmt::format("bundled benchmark has {} docs and {} queries", corpus.size(), queries.size())};
    }
    testing_support::TempDir dir;
    const auto work = dir / "pipeline";
    std::vector<std::map<std::string, std::string>> snapshots;
    for (int round = 0; round < 2; ++round) {
        const auto error = testing_support::run_pipeline(data, work);
        if (!error.empty()) {
            return {false, "pipeline failed: " + error};
        }
        snapshots.push_back(testing_support::snapshot(work));
        fs::remove_all(work);
    }
    const double elapsed = seconds_since(start);
    std::size_t bytes = 0;
    for (const auto& [name, content] : snapshots[0]) {
        bytes += content.size();
    }
    const bool same = snapshots[0] == snapshots[1];
    return {same && elapsed < 60.0, fmt::format("{} files ({} bytes) {} across two runs in {:.2f}s",
                                                snapshots[0].size(), bytes, same ? "identical" : "DIFFER", elapsed)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"FLOPs reproduction", flops_reproduction},
        {"Index-size reproduction", index_size_reproduction},
        {"Cross-encoder FLOPs", cross_encoder_flops},
        {"Fusion oracle equivalence", fusion_oracle_equivalence},
        {"Normalization properties", normalization_properties},
        {"Rank-only invariance", rank_only_invariance},
        {"Self-fusion identity", self_fusion_identity},
        {"Retrieval oracle equivalence", retrieval_oracle_equivalence},
        {"Metric correctness", metric_correctness},
        {"Qualitative fusion effect", qualitative_fusion_effect},
        {"Tuning determinism", tuning_determinism},
        {"Reproducibility", reproducibility},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failed += outcome.pass ? 0 : 1;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": "
                  << outcome.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
