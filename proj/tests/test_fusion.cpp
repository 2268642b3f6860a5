#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "hybrid/error.hpp"
#include "hybrid/fusion.hpp"
#include "hybrid/normalization.hpp"
#include "hybrid/score_distribution.hpp"
#include "hybrid/tuning.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hybrid;
using testing_support::Entries;
using testing_support::make_run;

namespace {

std::vector<double> scores_of(const Entries& entries)
{
    std::vector<double> out;
    for (const auto& e : entries) {
        out.push_back(e.second);
    }
    return out;
}

std::map<std::string, double> score_map(const RunList& run)
{
    std::map<std::string, double> out;
    for (const auto& e : run.entries()) {
        out[e.doc.str()] = e.score;
    }
    return out;
}

void expect_matches_oracle(const RunList& fused, const oracle::Scores& expected)
{
    const auto got = score_map(fused);
    ASSERT_EQ(got.size(), expected.size());
    for (const auto& [doc, score] : expected) {
        ASSERT_TRUE(got.count(doc)) << doc;
        EXPECT_TRUE(testing_support::close_rel(got.at(doc), score, 1e-12))
            << doc << ": " << got.at(doc) << " vs " << score;
    }
}

}  // namespace

// ------------------------------------------------------------ normalization

TEST(Normalize, MinMaxExample)
{
    const std::vector<double> s{2, 4, 6};
    EXPECT_EQ(normalize(s, Normalization::min_max), (std::vector<double>{0, 0.5, 1}));
}

TEST(Normalize, ZScoreUsesPopulationSigma)
{
    const std::vector<double> s{1, 2, 3};
    const auto z = normalize(s, Normalization::z_score);
    EXPECT_NEAR(z[0], -1.22474, 1e-5);
    EXPECT_EQ(z[1], 0.0);
    EXPECT_NEAR(z[2], 1.22474, 1e-5);
    EXPECT_NEAR(z[2], std::sqrt(1.5), 1e-15);
}

TEST(Normalize, ConstantListsAreNeutral)
{
    const std::vector<double> s{3, 3, 3};
    EXPECT_EQ(normalize(s, Normalization::min_max), (std::vector<double>{0.5, 0.5, 0.5}));
    EXPECT_EQ(normalize(s, Normalization::z_score), (std::vector<double>{0, 0, 0}));
}

TEST(Normalize, Errors)
{
    EXPECT_THROW(normalize({}, Normalization::min_max), ValidationError);
    const std::vector<double> s{1};
    EXPECT_THROW(normalize(s, Normalization::percentile), ValidationError);
}

TEST(Normalize, ParseNames)
{
    EXPECT_EQ(parse_normalization("minmax"), Normalization::min_max);
    EXPECT_EQ(parse_normalization("min-max"), Normalization::min_max);
    EXPECT_EQ(parse_normalization("z-score"), Normalization::z_score);
    EXPECT_EQ(parse_normalization("percentile"), Normalization::percentile);
    EXPECT_THROW(parse_normalization("softmax"), Error);
}

TEST(NormalizeProperty, RandomListsMatchOracle)
{
    std::mt19937_64 rng(101);
    for (int t = 0; t < 50; ++t) {
        const auto s = scores_of(testing_support::random_entries(rng, 100, 1 + static_cast<std::size_t>(t), false));
        const auto mm = normalize(s, Normalization::min_max);
        const auto zz = normalize(s, Normalization::z_score);
        const auto mm_oracle = oracle::min_max(s);
        const auto zz_oracle = oracle::z_score(s);
        for (std::size_t i = 0; i < s.size(); ++i) {
            EXPECT_NEAR(mm[i], mm_oracle[i], 1e-12);
            EXPECT_NEAR(zz[i], zz_oracle[i], 1e-12);
        }
        if (s.size() > 1) {
            EXPECT_EQ(*std::min_element(mm.begin(), mm.end()), 0.0);
            EXPECT_EQ(*std::max_element(mm.begin(), mm.end()), 1.0);
        }
    }
}

// ------------------------------------------------------------ distributions

TEST(ScoreDistribution, QuartilesOfOneToHundred)
{
    ScoreDistributionBuilder builder("s");
    for (int i = 100; i >= 1; --i) {
        builder.add(static_cast<double>(i));
    }
    const auto dist = builder.build();
    EXPECT_DOUBLE_EQ(dist.first_quartile(), 25.5);
    EXPECT_DOUBLE_EQ(dist.median(), 50.5);
    EXPECT_DOUBLE_EQ(dist.third_quartile(), 75.5);
    EXPECT_NEAR(dist.percentile(dist.median()), 0.5, 1.0 / 200.0);
}

TEST(ScoreDistribution, SingleScoreAlwaysHalf)
{
    ScoreDistributionBuilder builder("s");
    builder.add(7.0);
    const auto dist = builder.build();
    EXPECT_EQ(dist.percentile(7.0), 0.5);
    EXPECT_EQ(dist.quantile(0.1), 7.0);
    EXPECT_EQ(dist.quantile(0.9), 7.0);
}

TEST(ScoreDistribution, PercentileMatchesCountingOracle)
{
    std::mt19937_64 rng(102);
    const auto sample = scores_of(testing_support::random_entries(rng, 300, 300, true));
    ScoreDistributionBuilder builder("s");
    for (double s : sample) {
        builder.add(s);
    }
    const auto dist = builder.build();
    std::uniform_real_distribution<double> probe(-1.0, 6.0);
    for (int i = 0; i < 200; ++i) {
        const double x = i % 2 ? probe(rng) : sample[static_cast<std::size_t>(i) % sample.size()];
        EXPECT_DOUBLE_EQ(dist.percentile(x), oracle::percentile(sample, x));
    }
}

TEST(ScoreDistribution, PoolsEveryQueryDocumentScore)
{
    // 201 queries scored against a 140-document corpus.
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> score(0.0, 30.0);
    std::vector<RunList> runs;
    for (int q = 0; q < 201; ++q) {
        Entries entries;
        for (int d = 0; d < 140; ++d) {
            entries.emplace_back("d" + std::to_string(d), score(rng));
        }
        runs.push_back(make_run("q" + std::to_string(q), "s", entries));
    }
    const auto dist = build_score_distribution("s", runs);
    EXPECT_EQ(dist.total_count(), 201u * 140u);
    EXPECT_EQ(dist.size(), 28'140u);
    EXPECT_TRUE(std::is_sorted(dist.sample().begin(), dist.sample().end()));
}

TEST(ScoreDistribution, ReservoirKeepsCapacityAndCount)
{
    ScoreDistributionBuilder builder("s", 50);
    for (int i = 0; i < 1000; ++i) {
        builder.add(static_cast<double>(i));
    }
    const auto dist = builder.build();
    EXPECT_EQ(dist.size(), 50u);
    EXPECT_EQ(dist.total_count(), 1000u);
}

TEST(ScoreDistributionProperty, PercentileMonotone)
{
    std::mt19937_64 rng(104);
    const auto dist = build_score_distribution("s", std::vector<RunList>{make_run("q", "s", testing_support::random_entries(rng, 500, 500, false))});
    std::uniform_real_distribution<double> probe(-10.0, 25.0);
    std::vector<double> probes(1000);
    for (auto& p : probes) {
        p = probe(rng);
    }
    std::sort(probes.begin(), probes.end());
    for (std::size_t i = 1; i < probes.size(); ++i) {
        EXPECT_LE(dist.percentile(probes[i - 1]), dist.percentile(probes[i]));
    }
    EXPECT_GE(dist.percentile(-100.0), 0.0);
    EXPECT_LE(dist.percentile(100.0), 1.0);
}

// ------------------------------------------------------------ ranks

TEST(RankPositions, Examples)
{
    const auto distinct = rank_positions(make_run("q", "s", {{"a", 5}, {"b", 3}, {"c", 1}}));
    EXPECT_EQ(distinct.at(DocId("a")), 1u);
    EXPECT_EQ(distinct.at(DocId("b")), 2u);
    EXPECT_EQ(distinct.at(DocId("c")), 3u);
    const auto tied = rank_positions(make_run("q", "s", {{"a", 5}, {"b", 5}, {"c", 1}}));
    EXPECT_EQ(tied.at(DocId("a")), 1u);
    EXPECT_EQ(tied.at(DocId("b")), 1u);
    EXPECT_EQ(tied.at(DocId("c")), 3u);
}

TEST(RankPositions, ThousandScoresWithTiesMatchQuadraticOracle)
{
    std::mt19937_64 rng(105);
    const auto entries = testing_support::random_entries(rng, 1000, 1000, true);
    const auto ranks = rank_positions(make_run("q", "s", entries));
    for (const auto& [doc, pi] : oracle::ranks(entries)) {
        EXPECT_EQ(ranks.at(DocId(doc)), pi);
    }
}

// ------------------------------------------------------------ BCF / RRF

TEST(Bcf, Examples)
{
    Entries ten;
    for (int i = 0; i < 10; ++i) {
        ten.emplace_back("d" + std::to_string(i), 10.0 - i);
    }
    const std::vector<RunList> one{make_run("q", "a", ten)};
    EXPECT_EQ(score_map(fuse_bcf(one)).at("d0"), 10.0);

    Entries reversed;
    for (int i = 0; i < 10; ++i) {
        reversed.emplace_back("d" + std::to_string(i), static_cast<double>(i));
    }
    const std::vector<RunList> two{make_run("q", "a", ten), make_run("q", "b", reversed)};
    EXPECT_EQ(score_map(fuse_bcf(two)).at("d0"), 11.0);
}

TEST(Bcf, ThreeTwentyDocRunsMatchSummation)
{
    std::mt19937_64 rng(106);
    std::vector<Entries> entries;
    std::vector<RunList> runs;
    for (int m = 0; m < 3; ++m) {
        entries.push_back(testing_support::random_entries(rng, 30, 20, m == 1));
        runs.push_back(make_run("q", "s" + std::to_string(m), entries.back()));
    }
    expect_matches_oracle(fuse_bcf(runs), oracle::bcf(entries));
}

TEST(Rrf, Examples)
{
    const std::vector<RunList> both{make_run("q", "a", {{"x", 3}, {"y", 1}}), make_run("q", "b", {{"x", 9}})};
    EXPECT_DOUBLE_EQ(score_map(fuse_rrf(both)).at("x"), 2.0 / 61.0);
    EXPECT_NEAR(score_map(fuse_rrf(both)).at("x"), 0.032787, 1e-6);
    const std::vector<RunList> partial{make_run("q", "a", {{"x", 3}, {"y", 1}}), make_run("q", "b", {{"z", 1}})};
    EXPECT_DOUBLE_EQ(score_map(fuse_rrf(partial)).at("y"), 1.0 / 62.0);
}

TEST(Rrf, RejectsNonPositiveK)
{
    const std::vector<RunList> runs{make_run("q", "a", {{"x", 1}})};
    EXPECT_THROW(fuse_rrf(runs, 0.0), ValidationError);
    EXPECT_THROW(fuse_rrf(runs, -1.0), ValidationError);
}

TEST(Fusion, MismatchedQueriesRejected)
{
    const std::vector<RunList> runs{make_run("q1", "a", {{"x", 1}}), make_run("q2", "b", {{"x", 1}})};
    EXPECT_THROW(fuse_rrf(runs), ValidationError);
}

TEST(Rrf, RandomRunsMatchFormula)
{
    std::mt19937_64 rng(107);
    for (int t = 0; t < 20; ++t) {
        std::vector<Entries> entries;
        std::vector<RunList> runs;
        for (int m = 0; m < 4; ++m) {
            entries.push_back(testing_support::random_entries(rng, 80, 50, t % 2 == 0));
            runs.push_back(make_run("q", "s" + std::to_string(m), entries.back()));
        }
        expect_matches_oracle(fuse_rrf(runs, 60.0), oracle::rrf(entries, 60.0));
    }
}

// ------------------------------------------------------------ NSF

TEST(Nsf, SharedMaximumFusesToOne)
{
    const std::vector<RunList> runs{make_run("q", "a", {{"x", 9}, {"y", 2}}), make_run("q", "b", {{"x", 0.7}, {"z", 0.1}})};
    const std::vector<double> w{0.5, 0.5};
    EXPECT_DOUBLE_EQ(score_map(fuse_nsf(runs, w, Normalization::min_max)).at("x"), 1.0);
}

TEST(Nsf, MissingDocumentTakesSystemMinimum)
{
    const std::vector<RunList> runs{make_run("q", "a", {{"x", 9}, {"y", 2}, {"w", 5}}), make_run("q", "b", {{"x", 1}})};
    const std::vector<double> w{0.5, 0.5};
    const auto fused = score_map(fuse_nsf(runs, w, Normalization::min_max));
    // system b is constant (0.5), so y and w receive 0.5 from it too
    EXPECT_DOUBLE_EQ(fused.at("y"), 0.25);
    EXPECT_EQ(fused.size(), 3u);
}

TEST(Nsf, EmptyRunContributesNothing)
{
    const std::vector<RunList> runs{make_run("q", "a", {{"x", 3}, {"y", 1}}), RunList(QueryId("q"), "b", {})};
    const std::vector<double> w{0.5, 0.5};
    const auto fused = score_map(fuse_nsf(runs, w, Normalization::min_max));
    EXPECT_DOUBLE_EQ(fused.at("x"), 0.5);
    EXPECT_DOUBLE_EQ(fused.at("y"), 0.0);
}

TEST(Nsf, WeightedSumOracleOnThreeRuns)
{
    std::mt19937_64 rng(108);
    std::vector<Entries> entries;
    std::vector<RunList> runs;
    for (int m = 0; m < 3; ++m) {
        entries.push_back(testing_support::random_entries(rng, 60, 40, false));
        runs.push_back(make_run("q", "s" + std::to_string(m), entries.back()));
    }
    const std::vector<double> w{0.5, 0.3, 0.2};
    expect_matches_oracle(fuse_nsf(runs, w, Normalization::min_max), oracle::nsf(entries, w, oracle::Norm::min_max));
    expect_matches_oracle(fuse_nsf(runs, w, Normalization::z_score), oracle::nsf(entries, w, oracle::Norm::z_score));
    std::vector<ScoreDistribution> dists;
    std::vector<std::vector<double>> samples;
    for (int m = 0; m < 3; ++m) {
        samples.push_back(scores_of(testing_support::random_entries(rng, 500, 500, false)));
        ScoreDistributionBuilder b("s" + std::to_string(m));
        for (double s : samples.back()) {
            b.add(s);
        }
        dists.push_back(b.build());
    }
    expect_matches_oracle(fuse_nsf(runs, w, Normalization::percentile, dists),
                          oracle::nsf(entries, w, oracle::Norm::percentile, samples));
}

TEST(Nsf, WeightValidation)
{
    const std::vector<RunList> runs{make_run("q", "a", {{"x", 1}}), make_run("q", "b", {{"x", 1}})};
    const std::vector<double> bad_sum{0.5, 0.6};
    const std::vector<double> negative{1.5, -0.5};
    const std::vector<double> wrong_count{1.0};
    EXPECT_THROW(fuse_nsf(runs, bad_sum, Normalization::z_score), ValidationError);
    EXPECT_THROW(fuse_nsf(runs, negative, Normalization::z_score), ValidationError);
    EXPECT_THROW(fuse_nsf(runs, wrong_count, Normalization::z_score), ValidationError);
    EXPECT_THROW(fuse_nsf(runs, std::vector<double>{0.5, 0.5}, Normalization::percentile), ValidationError);
}

// ------------------------------------------------------------ properties

TEST(FusionProperty, MinMaxNsfInvariantUnderAffineMaps)
{
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> scale(0.1, 50.0);
    std::uniform_real_distribution<double> shift(-100.0, 100.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<RunList> runs;
        std::vector<RunList> mapped;
        for (int m = 0; m < 3; ++m) {
            const auto e = testing_support::random_entries(rng, 50, 30, false);
            runs.push_back(make_run("q", "s", e));
            const double a = scale(rng);
            const double b = shift(rng);
            Entries me;
            for (const auto& [doc, s] : e) {
                me.emplace_back(doc, a * s + b);
            }
            mapped.push_back(make_run("q", "s", me));
        }
        const std::vector<double> w{0.2, 0.3, 0.5};
        const auto base = score_map(fuse_nsf(runs, w, Normalization::min_max));
        const auto other = score_map(fuse_nsf(mapped, w, Normalization::min_max));
        for (const auto& [doc, s] : base) {
            EXPECT_NEAR(other.at(doc), s, 1e-12);
        }
    }
}

TEST(FusionProperty, FusedPoolIsUnionOfInputs)
{
    std::mt19937_64 rng(110);
    std::vector<RunList> runs;
    std::set<std::string> pool;
    for (int m = 0; m < 3; ++m) {
        const auto e = testing_support::random_entries(rng, 100, 15, false);
        for (const auto& [doc, s] : e) {
            pool.insert(doc);
        }
        runs.push_back(make_run("q", "s", e));
    }
    for (const auto method : {FusionMethod::bcf, FusionMethod::rrf, FusionMethod::nsf}) {
        FusionSpec spec;
        spec.method = method;
        const auto fused = fuse(runs, spec);
        const auto ids = testing_support::doc_order(fused);
        EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()), pool);
    }
}

TEST(FusionProperty, DepthTruncatesInputs)
{
    const std::vector<RunList> runs{make_run("q", "a", {{"x", 3}, {"y", 2}, {"z", 1}})};
    FusionSpec spec;
    spec.method = FusionMethod::rrf;
    spec.depth = 2;
    EXPECT_EQ(fuse(runs, spec).size(), 2u);
}

TEST(AlignByQuery, FillsMissingQueriesWithEmptyRuns)
{
    const std::vector<std::vector<RunList>> systems{
        {make_run("q2", "a", {{"x", 1}}), make_run("q1", "a", {{"x", 1}})},
        {make_run("q1", "b", {{"y", 1}})},
    };
    const auto aligned = align_by_query(systems);
    ASSERT_EQ(aligned.size(), 2u);
    EXPECT_EQ(aligned[0].query.str(), "q1");
    EXPECT_EQ(aligned[1].query.str(), "q2");
    EXPECT_TRUE(aligned[1].runs[1].empty());
    const auto fused = fuse_systems(systems, FusionSpec{});
    EXPECT_EQ(fused.size(), 2u);
}

// ------------------------------------------------------------ option parsing

TEST(FusionSpecParse, KeyValueSection)
{
    const auto spec = parse_fusion_spec({{"method", "nsf"}, {"norm", "zscore"}, {"weights", "0.2,0.8"}, {"rrf_k", "60"}});
    EXPECT_EQ(spec.method, FusionMethod::nsf);
    EXPECT_EQ(spec.normalization, Normalization::z_score);
    EXPECT_EQ(spec.weights, (std::vector<double>{0.2, 0.8}));
    EXPECT_EQ(spec.rrf_k, 60.0);
    EXPECT_EQ(parse_fusion_spec({{"method", "rrf"}, {"rrf_k", "10"}}).rrf_k, 10.0);
    EXPECT_THROW(parse_fusion_spec({{"colour", "red"}}), ValidationError);
    EXPECT_THROW(parse_fusion_spec({{"rrf_k", "0"}}), ValidationError);
    EXPECT_THROW(parse_fusion_spec({{"method", "combmnz"}}), Error);
    EXPECT_THROW(parse_fusion_spec({{"weights", "0.2,x"}}), Error);
}

TEST(FusionSpecParse, EqualWeightsByDefault)
{
    EXPECT_EQ(FusionSpec{}.resolved_weights(4), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
}

// ------------------------------------------------------------ tuning

TEST(SimplexGrid, Sizes)
{
    EXPECT_EQ(simplex_grid(3, 20).size(), 231u);
    EXPECT_EQ(simplex_grid(2, 20).size(), 21u);
    EXPECT_EQ(simplex_grid(4, 20).size(), 1771u);
    for (const auto& point : simplex_grid(3, 20)) {
        EXPECT_EQ(std::accumulate(point.begin(), point.end(), std::size_t{0}), 20u);
    }
}

TEST(TuneWeights, DominantSystemGetsAllWeight)
{
    // System a ranks the relevant doc first by a hair; b puts a decoy on top.
    std::vector<RunList> a;
    std::vector<RunList> b;
    Qrels qrels;
    for (int q = 0; q < 5; ++q) {
        const auto id = "q" + std::to_string(q);
        a.push_back(make_run(id, "a", {{"rel", 1.0}, {"decoy", 0.99}, {"filler", 0.0}}));
        b.push_back(make_run(id, "b", {{"rel", 0.0}, {"decoy", 1.0}, {"filler", 0.5}}));
        qrels.add_judgment(QueryId(id), DocId("rel"), true);
    }
    const std::vector<std::vector<RunList>> systems{a, b};
    const auto result = tune_weights(systems, qrels, Normalization::min_max, Metric::parse("R@1"));
    EXPECT_EQ(result.weights, (std::vector<double>{1.0, 0.0}));
    EXPECT_EQ(result.objective, 1.0);
    EXPECT_EQ(result.grid_points, 21u);
    EXPECT_EQ(result.queries, 5u);
}

TEST(TuneWeights, IdenticalRunsTieToEqualWeights)
{
    std::mt19937_64 rng(111);
    std::vector<RunList> runs;
    Qrels qrels;
    for (int q = 0; q < 6; ++q) {
        const auto id = "q" + std::to_string(q);
        runs.push_back(make_run(id, "a", testing_support::random_entries(rng, 40, 30, false)));
        qrels.add_judgment(QueryId(id), DocId("d" + std::to_string(q)), true);
    }
    const std::vector<std::vector<RunList>> systems{runs, runs};
    const auto result = tune_weights(systems, qrels, Normalization::z_score, Metric::parse("R@10"));
    EXPECT_EQ(result.weights, (std::vector<double>{0.5, 0.5}));
}

TEST(TuneWeights, Errors)
{
    const std::vector<std::vector<RunList>> one{{make_run("q", "a", {{"x", 1}})}};
    Qrels qrels;
    qrels.add_judgment(QueryId("q"), DocId("x"), true);
    EXPECT_THROW(tune_weights(one, qrels, Normalization::z_score, Metric::parse("R@10")), ValidationError);
    const std::vector<std::vector<RunList>> two{one[0], one[0]};
    EXPECT_THROW(tune_weights(two, qrels, Normalization::z_score, Metric::parse("R@10"), 0.0), ValidationError);
    EXPECT_THROW(tune_weights(two, qrels, Normalization::z_score, Metric::parse("R@10"), 1.5), ValidationError);
    EXPECT_THROW(tune_weights(two, qrels, Normalization::z_score, Metric::parse("R@10"), 0.3), ValidationError);
    EXPECT_NO_THROW(tune_weights(two, qrels, Normalization::z_score, Metric::parse("R@10"), 1.0));
}

TEST(TuneWeights, PlantedThreeSystemsMatchExhaustiveOracle)
{
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto planted = testing_support::planted_three_systems(seed);
        const auto result =
            tune_weights(planted.systems, planted.qrels, Normalization::z_score, Metric::parse("R@10"));
        const auto expected = oracle::tune_three(planted.oracle_queries, 20, oracle::Norm::z_score, 10);
        std::vector<double> weights;
        for (auto c : expected.counts) {
            weights.push_back(static_cast<double>(c) / 20.0);
        }
        EXPECT_EQ(result.grid_points, 231u);
        EXPECT_EQ(result.weights, weights) << "seed " << seed;
        EXPECT_EQ(result.objective, expected.objective);
    }
}
