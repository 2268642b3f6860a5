#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "hybrid/score_distribution.hpp"

namespace hybrid {

enum class Normalization { min_max, z_score, percentile };

std::string_view to_string(Normalization normalization);
/// Accepts "minmax"/"min-max", "zscore"/"z-score" and "percentile".
Normalization parse_normalization(std::string_view text);

/// Normalizes one query's candidate scores.
///
/// - min-max: (s - min) / (max - min); a constant list maps to 0.5.
/// - z-score: (s - mean) / sigma with the population sigma; sigma = 0 maps to 0.
/// - percentile: midpoint CDF value in `distribution`, which is required.
///
/// Throws ValidationError on empty input or a missing distribution.
std::vector<double> normalize(std::span<const double> scores, Normalization method,
                              const ScoreDistribution* distribution = nullptr);

}  // namespace hybrid
