#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hybrid/metrics.hpp"
#include "hybrid/normalization.hpp"
#include "hybrid/score_distribution.hpp"
#include "hybrid/types.hpp"

namespace hybrid {

/// All compositions of `steps` into `parts` non-negative integers, in
/// lexicographic order. Weight i of a grid point is counts[i] / steps.
std::vector<std::vector<std::size_t>> simplex_grid(std::size_t parts, std::size_t steps);

struct TuningResult {
    std::vector<double> weights;
    double objective = 0.0;
    std::size_t grid_points = 0;
    std::size_t queries = 0;
};

/// Exhaustive grid search of normalized-score-fusion weights.
///
/// Every grid point {w : w_i in {0, step, ..., 1}, sum w = 1} is scored by the
/// macro average of `metric` over the queries that have relevant documents.
/// Among equally good points the most uniform one (highest entropy) wins,
/// then the lexicographically greatest weight vector.
///
/// Needs 2 to 4 systems and a step that divides 1; throws ValidationError
/// otherwise.
TuningResult tune_weights(std::span<const std::vector<RunList>> systems, const Qrels& qrels,
                          Normalization normalization, const Metric& metric, double step = 0.05,
                          std::span<const ScoreDistribution> distributions = {});

}  // namespace hybrid
