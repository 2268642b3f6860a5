#include "hybrid/normalization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hybrid/error.hpp"

namespace hybrid {

std::string_view to_string(Normalization normalization)
{
    switch (normalization) {
        case Normalization::min_max:
            return "minmax";
        case Normalization::z_score:
            return "zscore";
        case Normalization::percentile:
            return "percentile";
    }
    return "?";
}

Normalization parse_normalization(std::string_view text)
{
    if (text == "minmax" || text == "min-max" || text == "min_max") {
        return Normalization::min_max;
    }
    if (text == "zscore" || text == "z-score" || text == "z_score") {
        return Normalization::z_score;
    }
    if (text == "percentile") {
        return Normalization::percentile;
    }
    throw ValidationError("unknown normalization '" + std::string(text)
                          + "' (expected minmax, zscore or percentile)");
}

std::vector<double> normalize(std::span<const double> scores, Normalization method,
                              const ScoreDistribution* distribution)
{
    if (scores.empty()) {
        throw ValidationError("cannot normalize an empty score list");
    }
    std::vector<double> out(scores.size());
    switch (method) {
        case Normalization::min_max: {
            const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
            const double range = *hi - *lo;
            for (std::size_t i = 0; i < scores.size(); ++i) {
                out[i] = range > 0.0 ? (scores[i] - *lo) / range : 0.5;
            }
            break;
        }
        case Normalization::z_score: {
            const double n = static_cast<double>(scores.size());
            double sum = 0.0;
            for (double s : scores) {
                sum += s;
            }
            const double mean = sum / n;
            double squares = 0.0;
            for (double s : scores) {
                squares += (s - mean) * (s - mean);
            }
            const double sigma = std::sqrt(squares / n);
            for (std::size_t i = 0; i < scores.size(); ++i) {
                out[i] = sigma > 0.0 ? (scores[i] - mean) / sigma : 0.0;
            }
            break;
        }
        case Normalization::percentile: {
            if (distribution == nullptr) {
                throw ValidationError("percentile normalization needs a score distribution");
            }
            for (std::size_t i = 0; i < scores.size(); ++i) {
                out[i] = distribution->percentile(scores[i]);
            }
            break;
        }
    }
    return out;
}

}  // namespace hybrid
