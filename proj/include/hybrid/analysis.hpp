#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybrid/score_distribution.hpp"
#include "hybrid/types.hpp"

namespace hybrid {

enum class Quadrant { A, B, C, D };

std::string_view to_string(Quadrant quadrant);

/// One judged (query, document) pair with each system's per-query min-max
/// normalized score. A document a system did not return scores 0.
struct PairSample {
    QueryId query;
    DocId doc;
    std::vector<double> scores;
    bool relevant = false;
};

/// Region of a pair relative to the quartiles of both systems' global
/// distributions, using the first two scores of the pair.
///
///   A: s1 > Q3(d1) and s2 < Q1(d2)     B: s1 < Q1(d1) and s2 > Q3(d2)
///   C: both above Q3                    D: both below Q1
///
/// Anything else, including a score equal to a quartile, is unlabeled.
std::optional<Quadrant> quadrant_classify(const PairSample& pair, const ScoreDistribution& first,
                                          const ScoreDistribution& second);

struct RegionCounts {
    std::size_t relevant = 0;
    std::size_t non_relevant = 0;
    /// Regions A and B: share of pairs where the system scoring high is right,
    /// i.e. the pair is relevant. Empty for C, D and for empty regions.
    std::optional<double> agreement;

    [[nodiscard]] std::size_t total() const { return relevant + non_relevant; }
};

struct ComplementarityReport {
    std::array<RegionCounts, 4> regions{};  // indexed by Quadrant
    std::size_t unlabeled = 0;

    [[nodiscard]] const RegionCounts& operator[](Quadrant q) const { return regions[static_cast<std::size_t>(q)]; }
};

ComplementarityReport complementarity_report(std::span<const PairSample> pairs, const ScoreDistribution& first,
                                             const ScoreDistribution& second);

/// Draws `n_positive` relevant pairs from the qrels and `n_negative` pairs
/// whose document is a non-relevant corpus document, both uniformly without
/// replacement, over the queries judged in `qrels` that at least one system
/// answered. Output is positives then negatives, each sorted by (query, doc).
///
/// Throws ValidationError when there are too few positives or negatives.
std::vector<PairSample> sample_pairs(std::span<const std::vector<RunList>> systems, const Qrels& qrels,
                                     std::span<const DocId> corpus_docs, std::size_t n_positive,
                                     std::size_t n_negative, std::uint64_t seed);

/// Global distribution of one system's per-query min-max normalized scores.
ScoreDistribution normalized_distribution(const std::string& system_id, std::span<const RunList> runs);

struct HistogramBin {
    double left;
    double right;
    std::size_t count;
};

/// Equal-width bins over [min, max] of the sample; the last bin is closed.
/// A constant sample gets unit-width bins centred on its value.
/// Throws ValidationError when bins == 0 or the distribution is empty.
std::vector<HistogramBin> export_histograms(const ScoreDistribution& distribution, std::size_t bins);

void write_histogram_csv(std::span<const HistogramBin> bins, std::ostream& out);
void write_pairs_csv(std::span<const PairSample> pairs, std::span<const std::string> system_names,
                     const ScoreDistribution& first, const ScoreDistribution& second, std::ostream& out);
void write_regions_csv(const ComplementarityReport& report, std::ostream& out);

}  // namespace hybrid
