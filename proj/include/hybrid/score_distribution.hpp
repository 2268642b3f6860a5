#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hybrid/types.hpp"

namespace hybrid {

/// A system's global score distribution: a sorted sample of pooled scores
/// plus the number of scores that were offered.
///
/// Percentiles use the midpoint empirical CDF,
///   (#{x < s} + #{x <= s}) / (2 n),
/// so a value tied with k sample points sits in the middle of their mass.
class ScoreDistribution {
  public:
    ScoreDistribution(std::string system_id, std::vector<double> sorted_sample, std::size_t total_count);

    [[nodiscard]] const std::string& system_id() const noexcept { return system_id_; }
    [[nodiscard]] std::span<const double> sample() const noexcept { return sample_; }
    [[nodiscard]] std::size_t size() const noexcept { return sample_.size(); }
    /// Scores offered, including those dropped by reservoir sampling.
    [[nodiscard]] std::size_t total_count() const noexcept { return total_count_; }

    [[nodiscard]] double percentile(double score) const;

    /// Inverse of the midpoint CDF: for p*n integral the average of the
    /// two neighbouring order statistics, otherwise the next one up.
    /// {1..100} gives Q1 = 25.5, median 50.5, Q3 = 75.5.
    [[nodiscard]] double quantile(double p) const;
    [[nodiscard]] double first_quartile() const { return quantile(0.25); }
    [[nodiscard]] double median() const { return quantile(0.5); }
    [[nodiscard]] double third_quartile() const { return quantile(0.75); }

  private:
    std::string system_id_;
    std::vector<double> sample_;
    std::size_t total_count_;
};

/// Accumulates scores exactly up to `capacity`, then keeps a uniform
/// reservoir sample (algorithm R) with a fixed-seed generator.
class ScoreDistributionBuilder {
  public:
    static constexpr std::size_t kDefaultCapacity = 10'000'000;
    static constexpr std::uint64_t kDefaultSeed = 0x5EEDF00DULL;

    explicit ScoreDistributionBuilder(std::string system_id, std::size_t capacity = kDefaultCapacity,
                                      std::uint64_t seed = kDefaultSeed);

    void add(double score);
    void add(const RunList& run);

    [[nodiscard]] ScoreDistribution build() const;

  private:
    std::string system_id_;
    std::size_t capacity_;
    std::vector<double> reservoir_;
    std::size_t seen_ = 0;
    std::mt19937_64 rng_;
};

/// Pools every (query, document) score of one system.
ScoreDistribution build_score_distribution(const std::string& system_id, std::span<const RunList> runs,
                                           std::size_t capacity = ScoreDistributionBuilder::kDefaultCapacity);

}  // namespace hybrid
