#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hybrid/normalization.hpp"
#include "hybrid/score_distribution.hpp"
#include "hybrid/types.hpp"

namespace hybrid {

enum class FusionMethod { bcf, rrf, nsf };

std::string_view to_string(FusionMethod method);
FusionMethod parse_fusion_method(std::string_view text);

/// Late-fusion configuration.
struct FusionSpec {
    static constexpr double kDefaultRrfK = 60.0;

    FusionMethod method = FusionMethod::nsf;
    Normalization normalization = Normalization::z_score;
    /// One weight per system, non-negative, summing to one. Empty means equal
    /// weights.
    std::vector<double> weights;
    double rrf_k = kDefaultRrfK;
    /// Truncate every input list to its top `depth` entries before fusing;
    /// 0 keeps whole lists.
    std::size_t depth = 0;

    /// Weights for `num_systems` systems after validation.
    [[nodiscard]] std::vector<double> resolved_weights(std::size_t num_systems) const;
    void validate(std::size_t num_systems) const;
};

/// Reads `method`, `norm`, `weights`, `rrf_k` and `depth` from a key-value
/// section; unknown keys are rejected, missing ones keep their defaults.
FusionSpec parse_fusion_spec(const std::map<std::string, std::string>& section);

/// Throws ValidationError unless the weights are non-negative and sum to
/// one within 1e-9.
void validate_weights(std::span<const double> weights, std::size_t num_systems);

/// rank = 1 + number of entries with a strictly higher score; ties share the
/// best rank.
std::unordered_map<DocId, std::size_t> rank_positions(const RunList& run);

// Single-query fusion. All runs must carry the same query id; a run may be
// empty. Outputs are sorted by fused score, ties by doc id, and pool the
// union of the inputs' documents.

/// Borda count: sum over systems of |R_m| - rank + 1; absent documents add 0.
RunList fuse_bcf(std::span<const RunList> runs);
/// Reciprocal rank fusion: sum over systems of 1 / (k + rank); absent
/// documents add 0.
RunList fuse_rrf(std::span<const RunList> runs, double k = FusionSpec::kDefaultRrfK);
/// Weighted sum of per-query normalized scores. A document missing from a
/// system's list takes that list's minimum normalized score; an empty list
/// contributes nothing. Percentile normalization needs one distribution per
/// run, in run order.
RunList fuse_nsf(std::span<const RunList> runs, std::span<const double> weights,
                 Normalization normalization, std::span<const ScoreDistribution> distributions = {});

RunList fuse(std::span<const RunList> runs, const FusionSpec& spec,
             std::span<const ScoreDistribution> distributions = {});

/// Per-query runs of several systems, aligned by query id. Systems that did
/// not return a query get an empty list for it. Queries come out in id
/// order.
struct AlignedQuery {
    QueryId query;
    std::vector<RunList> runs;
};
std::vector<AlignedQuery> align_by_query(std::span<const std::vector<RunList>> systems);

/// Fuses every query of the aligned systems.
std::vector<RunList> fuse_systems(std::span<const std::vector<RunList>> systems, const FusionSpec& spec,
                                  std::span<const ScoreDistribution> distributions = {});

}  // namespace hybrid
