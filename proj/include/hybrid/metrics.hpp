#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybrid/types.hpp"

namespace hybrid {

enum class MetricKind { recall, reciprocal_rank, r_precision };

/// A binary-relevance metric: R@k, RR@k (reported as MRR@k once averaged)
/// or R-precision.
struct Metric {
    MetricKind kind;
    std::size_t cutoff = 0;  // unused for R-precision

    [[nodiscard]] std::string name() const;
    /// Accepts "R@10", "MRR@10", "RR@10" and "RP" (case-insensitive).
    static Metric parse(std::string_view text);

    friend bool operator==(const Metric&, const Metric&) = default;
};

// Per-query metrics. `relevant` must be non-empty (ValidationError otherwise).
double recall_at_k(const RunList& run, const std::set<DocId>& relevant, std::size_t k);
double rr_at_k(const RunList& run, const std::set<DocId>& relevant, std::size_t k);
/// Relevant documents among the top N over N = |relevant|; a run shorter
/// than N is not padded, the denominator stays N.
double r_precision(const RunList& run, const std::set<DocId>& relevant);

double evaluate_query(const RunList& run, const std::set<DocId>& relevant, const Metric& metric);

struct MetricReport {
    std::vector<Metric> metrics;
    /// Per evaluated query, one value per metric (same order as `metrics`).
    std::map<QueryId, std::vector<double>> per_query;
    /// Macro averages, one per metric.
    std::vector<double> mean;
    /// Queries in the run but absent from the qrels.
    std::vector<QueryId> skipped_unjudged;
    /// Judged queries without a single relevant document.
    std::vector<QueryId> skipped_no_relevant;
    /// Queries with relevant documents that the run does not contain.
    std::vector<QueryId> missing_from_run;

    [[nodiscard]] std::size_t evaluated() const noexcept { return per_query.size(); }
    [[nodiscard]] double mean_of(const Metric& metric) const;

    [[nodiscard]] std::string to_table() const;
    [[nodiscard]] std::string to_json() const;
};

/// Macro-averages every metric over the queries present in both the runs and
/// the qrels with at least one relevant document. Throws ValidationError when
/// no query qualifies.
MetricReport evaluate_run(std::span<const RunList> runs, const Qrels& qrels,
                          std::span<const Metric> metrics);

/// R@k for every cutoff, then MRR@`rr_cutoff` and RP.
std::vector<Metric> standard_metrics(std::span<const std::size_t> recall_cutoffs,
                                     std::size_t rr_cutoff = 10);

}  // namespace hybrid
