#include "hybrid/score_distribution.hpp"

#include <algorithm>
#include <cmath>

#include "hybrid/error.hpp"

namespace hybrid {

ScoreDistribution::ScoreDistribution(std::string system_id, std::vector<double> sorted_sample,
                                     std::size_t total_count)
    : system_id_(std::move(system_id)), sample_(std::move(sorted_sample)), total_count_(total_count)
{
    if (sample_.empty()) {
        throw ValidationError("score distribution of '" + system_id_ + "' needs at least one score");
    }
    if (!std::is_sorted(sample_.begin(), sample_.end())) {
        throw ValidationError("score distribution sample must be sorted ascending");
    }
    if (total_count_ < sample_.size()) {
        throw ValidationError("score distribution total count is smaller than its sample");
    }
}

double ScoreDistribution::percentile(double score) const
{
    const auto less = std::lower_bound(sample_.begin(), sample_.end(), score) - sample_.begin();
    const auto less_or_equal = std::upper_bound(sample_.begin(), sample_.end(), score) - sample_.begin();
    return static_cast<double>(less + less_or_equal) / (2.0 * static_cast<double>(sample_.size()));
}

double ScoreDistribution::quantile(double p) const
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("quantile probability must lie in [0, 1]");
    }
    const auto n = sample_.size();
    const double h = p * static_cast<double>(n);
    const double whole = std::floor(h);
    const auto j = static_cast<std::size_t>(whole);
    if (j == 0 && h == whole) {
        return sample_.front();
    }
    if (j >= n) {
        return sample_.back();
    }
    if (h == whole) {
        return 0.5 * (sample_[j - 1] + sample_[j]);
    }
    return sample_[j];
}

ScoreDistributionBuilder::ScoreDistributionBuilder(std::string system_id, std::size_t capacity,
                                                   std::uint64_t seed)
    : system_id_(std::move(system_id)), capacity_(capacity), rng_(seed)
{
    if (capacity_ == 0) {
        throw ValidationError("score distribution capacity must be positive");
    }
}

void ScoreDistributionBuilder::add(double score)
{
    if (!std::isfinite(score)) {
        throw ValidationError("score distribution of '" + system_id_ + "': non-finite score");
    }
    ++seen_;
    if (reservoir_.size() < capacity_) {
        reservoir_.push_back(score);
        return;
    }
    std::uniform_int_distribution<std::size_t> pick(0, seen_ - 1);
    const auto slot = pick(rng_);
    if (slot < capacity_) {
        reservoir_[slot] = score;
    }
}

void ScoreDistributionBuilder::add(const RunList& run)
{
    for (const auto& entry : run.entries()) {
        add(entry.score);
    }
}

ScoreDistribution ScoreDistributionBuilder::build() const
{
    auto sample = reservoir_;
    std::sort(sample.begin(), sample.end());
    return ScoreDistribution(system_id_, std::move(sample), seen_);
}

ScoreDistribution build_score_distribution(const std::string& system_id, std::span<const RunList> runs,
                                           std::size_t capacity)
{
    ScoreDistributionBuilder builder(system_id, capacity);
    for (const auto& run : runs) {
        builder.add(run);
    }
    return builder.build();
}

}  // namespace hybrid
