#include "hybrid/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>

#include "hybrid/error.hpp"
#include "hybrid/fusion.hpp"
#include "hybrid/io.hpp"
#include "hybrid/normalization.hpp"

namespace hybrid {

namespace {

// Uniform integer in [0, n) by rejection; the standard distributions are
// not specified bit-for-bit across library implementations.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n)
{
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) {
        x = rng();
    }
    return static_cast<std::size_t>(x % bound);
}

// Partial Fisher-Yates: the first k elements become a uniform sample.
template <typename T>
void shuffle_prefix(std::vector<T>& items, std::size_t k, std::mt19937_64& rng)
{
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(items[i], items[i + uniform_index(rng, items.size() - i)]);
    }
}

using ScoreTable = std::unordered_map<DocId, double>;

ScoreTable normalized_scores(const RunList& run)
{
    ScoreTable table;
    if (run.empty()) {
        return table;
    }
    std::vector<double> raw;
    raw.reserve(run.size());
    for (const auto& entry : run.entries()) {
        raw.push_back(entry.score);
    }
    const auto normalized = normalize(raw, Normalization::min_max);
    for (std::size_t i = 0; i < run.size(); ++i) {
        table.emplace(run[i].doc, normalized[i]);
    }
    return table;
}

}  // namespace

std::string_view to_string(Quadrant quadrant)
{
    switch (quadrant) {
        case Quadrant::A:
            return "A";
        case Quadrant::B:
            return "B";
        case Quadrant::C:
            return "C";
        case Quadrant::D:
            return "D";
    }
    return "?";
}

std::optional<Quadrant> quadrant_classify(const PairSample& pair, const ScoreDistribution& first,
                                          const ScoreDistribution& second)
{
    if (pair.scores.size() < 2) {
        throw ValidationError("quadrant classification needs two scores per pair");
    }
    const double s1 = pair.scores[0];
    const double s2 = pair.scores[1];
    const bool high1 = s1 > first.third_quartile();
    const bool low1 = s1 < first.first_quartile();
    const bool high2 = s2 > second.third_quartile();
    const bool low2 = s2 < second.first_quartile();
    if (high1 && low2) {
        return Quadrant::A;
    }
    if (low1 && high2) {
        return Quadrant::B;
    }
    if (high1 && high2) {
        return Quadrant::C;
    }
    if (low1 && low2) {
        return Quadrant::D;
    }
    return std::nullopt;
}

ComplementarityReport complementarity_report(std::span<const PairSample> pairs, const ScoreDistribution& first,
                                             const ScoreDistribution& second)
{
    ComplementarityReport report;
    for (const auto& pair : pairs) {
        const auto region = quadrant_classify(pair, first, second);
        if (!region) {
            ++report.unlabeled;
            continue;
        }
        auto& counts = report.regions[static_cast<std::size_t>(*region)];
        ++(pair.relevant ? counts.relevant : counts.non_relevant);
    }
    for (auto q : {Quadrant::A, Quadrant::B}) {
        auto& counts = report.regions[static_cast<std::size_t>(q)];
        if (counts.total() > 0) {
            counts.agreement = static_cast<double>(counts.relevant) / static_cast<double>(counts.total());
        }
    }
    return report;
}

std::vector<PairSample> sample_pairs(std::span<const std::vector<RunList>> systems, const Qrels& qrels,
                                     std::span<const DocId> corpus_docs, std::size_t n_positive,
                                     std::size_t n_negative, std::uint64_t seed)
{
    if (systems.empty()) {
        throw ValidationError("pair sampling needs at least one system");
    }
    const auto aligned = align_by_query(systems);

    struct Candidate {
        std::size_t query;  // index into aligned
        DocId doc;
    };
    std::vector<Candidate> positives;
    std::vector<std::size_t> judged;
    for (std::size_t q = 0; q < aligned.size(); ++q) {
        if (!qrels.contains(aligned[q].query)) {
            continue;
        }
        judged.push_back(q);
        for (const auto& doc : qrels.relevant(aligned[q].query)) {
            positives.push_back({q, doc});
        }
    }
    if (positives.size() < n_positive) {
        throw ValidationError("requested " + std::to_string(n_positive) + " positive pairs but only "
                              + std::to_string(positives.size()) + " are available");
    }

    std::size_t available_negatives = 0;
    for (auto q : judged) {
        const auto& relevant = qrels.relevant(aligned[q].query);
        std::size_t hits = 0;
        for (const auto& doc : corpus_docs) {
            hits += relevant.count(doc);
        }
        available_negatives += corpus_docs.size() - hits;
    }
    if (available_negatives < n_negative) {
        throw ValidationError("requested " + std::to_string(n_negative) + " negative pairs but only "
                              + std::to_string(available_negatives) + " are available");
    }

    std::mt19937_64 rng(seed);
    shuffle_prefix(positives, n_positive, rng);
    positives.erase(positives.begin() + static_cast<std::ptrdiff_t>(n_positive), positives.end());

    std::vector<Candidate> negatives;
    if (2 * n_negative > available_negatives) {
        // Dense request: enumerate and shuffle.
        for (auto q : judged) {
            const auto& relevant = qrels.relevant(aligned[q].query);
            for (const auto& doc : corpus_docs) {
                if (relevant.count(doc) == 0) {
                    negatives.push_back({q, doc});
                }
            }
        }
        shuffle_prefix(negatives, n_negative, rng);
        negatives.erase(negatives.begin() + static_cast<std::ptrdiff_t>(n_negative), negatives.end());
    } else {
        // Sparse request: rejection sampling over (query, doc) cells.
        std::set<std::pair<std::size_t, std::size_t>> taken;
        while (negatives.size() < n_negative) {
            const auto q = judged[uniform_index(rng, judged.size())];
            const auto d = uniform_index(rng, corpus_docs.size());
            if (qrels.is_relevant(aligned[q].query, corpus_docs[d]) || !taken.emplace(q, d).second) {
                continue;
            }
            negatives.push_back({q, corpus_docs[d]});
        }
    }

    const auto by_query_doc = [&](const Candidate& a, const Candidate& b) {
        if (a.query != b.query) {
            return aligned[a.query].query < aligned[b.query].query;
        }
        return a.doc < b.doc;
    };
    std::sort(positives.begin(), positives.end(), by_query_doc);
    std::sort(negatives.begin(), negatives.end(), by_query_doc);

    std::map<std::size_t, std::vector<ScoreTable>> tables;
    const auto scores_for = [&](std::size_t q) -> const std::vector<ScoreTable>& {
        auto it = tables.find(q);
        if (it == tables.end()) {
            std::vector<ScoreTable> per_system;
            for (const auto& run : aligned[q].runs) {
                per_system.push_back(normalized_scores(run));
            }
            it = tables.emplace(q, std::move(per_system)).first;
        }
        return it->second;
    };

    std::vector<PairSample> pairs;
    pairs.reserve(n_positive + n_negative);
    for (const auto* group : {&positives, &negatives}) {
        for (const auto& c : *group) {
            PairSample pair{aligned[c.query].query, c.doc, {}, group == &positives};
            for (const auto& table : scores_for(c.query)) {
                const auto it = table.find(c.doc);
                pair.scores.push_back(it == table.end() ? 0.0 : it->second);
            }
            pairs.push_back(std::move(pair));
        }
    }
    return pairs;
}

ScoreDistribution normalized_distribution(const std::string& system_id, std::span<const RunList> runs)
{
    ScoreDistributionBuilder builder(system_id);
    std::vector<double> raw;
    for (const auto& run : runs) {
        if (run.empty()) {
            continue;
        }
        raw.clear();
        for (const auto& entry : run.entries()) {
            raw.push_back(entry.score);
        }
        for (double s : normalize(raw, Normalization::min_max)) {
            builder.add(s);
        }
    }
    return builder.build();
}

std::vector<HistogramBin> export_histograms(const ScoreDistribution& distribution, std::size_t bins)
{
    if (bins == 0) {
        throw ValidationError("histogram needs at least one bin");
    }
    const auto sample = distribution.sample();
    if (sample.empty()) {
        throw ValidationError("cannot build a histogram of an empty distribution");
    }
    double lo = sample.front();
    double hi = sample.back();
    if (lo == hi) {
        lo -= 0.5 * static_cast<double>(bins);
        hi += 0.5 * static_cast<double>(bins);
    }
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out;
    out.reserve(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        const double left = lo + width * static_cast<double>(i);
        const double right = i + 1 == bins ? hi : lo + width * static_cast<double>(i + 1);
        out.push_back({left, right, 0});
    }
    for (double x : sample) {
        auto i = static_cast<std::size_t>(std::floor((x - lo) / width));
        i = std::min(i, bins - 1);
        // Floating-point edges: keep each value inside [left, right).
        while (i > 0 && x < out[i].left) {
            --i;
        }
        while (i + 1 < bins && x >= out[i + 1].left) {
            ++i;
        }
        ++out[i].count;
    }
    return out;
}

void write_histogram_csv(std::span<const HistogramBin> bins, std::ostream& out)
{
    out << "bin_left,bin_right,count\n";
    for (const auto& bin : bins) {
        out << format_score(bin.left) << ',' << format_score(bin.right) << ',' << bin.count << '\n';
    }
}

void write_pairs_csv(std::span<const PairSample> pairs, std::span<const std::string> system_names,
                     const ScoreDistribution& first, const ScoreDistribution& second, std::ostream& out)
{
    out << "query_id,doc_id";
    for (const auto& name : system_names) {
        out << ',' << name;
    }
    out << ",relevant,region\n";
    for (const auto& pair : pairs) {
        if (pair.scores.size() != system_names.size()) {
            throw ValidationError("pair has " + std::to_string(pair.scores.size()) + " scores for "
                                  + std::to_string(system_names.size()) + " systems");
        }
        out << pair.query.str() << ',' << pair.doc.str();
        for (double s : pair.scores) {
            out << ',' << format_score(s);
        }
        const auto region = pair.scores.size() >= 2 ? quadrant_classify(pair, first, second) : std::nullopt;
        out << ',' << (pair.relevant ? 1 : 0) << ',' << (region ? to_string(*region) : "") << '\n';
    }
}

void write_regions_csv(const ComplementarityReport& report, std::ostream& out)
{
    out << "region,relevant,non_relevant,total,agreement\n";
    for (auto q : {Quadrant::A, Quadrant::B, Quadrant::C, Quadrant::D}) {
        const auto& counts = report[q];
        out << to_string(q) << ',' << counts.relevant << ',' << counts.non_relevant << ',' << counts.total() << ',';
        if (counts.agreement) {
            out << format_score(*counts.agreement);
        }
        out << '\n';
    }
    out << "unlabeled,,," << report.unlabeled << ",\n";
}

}  // namespace hybrid
