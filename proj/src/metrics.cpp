#include "hybrid/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "file_util.hpp"
#include "hybrid/error.hpp"

namespace hybrid {

namespace {

void require_relevant(const std::set<DocId>& relevant, const RunList& run)
{
    if (relevant.empty()) {
        throw ValidationError("query '" + run.query_id().str() + "' has no relevant documents");
    }
}

std::size_t hits_in_top(const RunList& run, const std::set<DocId>& relevant, std::size_t depth)
{
    const auto n = std::min(depth, run.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        hits += relevant.contains(run[i].doc) ? 1 : 0;
    }
    return hits;
}

}  // namespace

std::string Metric::name() const
{
    switch (kind) {
        case MetricKind::recall:
            return "R@" + std::to_string(cutoff);
        case MetricKind::reciprocal_rank:
            return "MRR@" + std::to_string(cutoff);
        case MetricKind::r_precision:
            return "RP";
    }
    return "?";
}

Metric Metric::parse(std::string_view text)
{
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "RP") {
        return Metric{MetricKind::r_precision, 0};
    }
    const auto at = upper.find('@');
    if (at != std::string::npos) {
        const auto prefix = upper.substr(0, at);
        std::size_t cutoff = 0;
        if (detail::parse_number(std::string_view(upper).substr(at + 1), cutoff) && cutoff > 0) {
            if (prefix == "R") {
                return Metric{MetricKind::recall, cutoff};
            }
            if (prefix == "RR" || prefix == "MRR") {
                return Metric{MetricKind::reciprocal_rank, cutoff};
            }
        }
    }
    throw ValidationError("unknown metric '" + std::string(text) + "' (expected R@k, MRR@k or RP)");
}

double recall_at_k(const RunList& run, const std::set<DocId>& relevant, std::size_t k)
{
    require_relevant(relevant, run);
    return static_cast<double>(hits_in_top(run, relevant, k)) / static_cast<double>(relevant.size());
}

double rr_at_k(const RunList& run, const std::set<DocId>& relevant, std::size_t k)
{
    require_relevant(relevant, run);
    const auto n = std::min(k, run.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (relevant.contains(run[i].doc)) {
            return 1.0 / static_cast<double>(i + 1);
        }
    }
    return 0.0;
}

double r_precision(const RunList& run, const std::set<DocId>& relevant)
{
    require_relevant(relevant, run);
    const auto n = relevant.size();
    return static_cast<double>(hits_in_top(run, relevant, n)) / static_cast<double>(n);
}

double evaluate_query(const RunList& run, const std::set<DocId>& relevant, const Metric& metric)
{
    switch (metric.kind) {
        case MetricKind::recall:
            return recall_at_k(run, relevant, metric.cutoff);
        case MetricKind::reciprocal_rank:
            return rr_at_k(run, relevant, metric.cutoff);
        case MetricKind::r_precision:
            return r_precision(run, relevant);
    }
    throw ValidationError("unsupported metric");
}

double MetricReport::mean_of(const Metric& metric) const
{
    auto it = std::find(metrics.begin(), metrics.end(), metric);
    if (it == metrics.end()) {
        throw ValidationError("metric " + metric.name() + " not in report");
    }
    return mean[static_cast<std::size_t>(it - metrics.begin())];
}

std::string MetricReport::to_table() const
{
    std::size_t width = 8;
    for (const auto& [query, values] : per_query) {
        width = std::max(width, query.str().size());
    }
    std::string out = fmt::format("{:<{}}", "query", width);
    for (const auto& metric : metrics) {
        out += fmt::format("  {:>8}", metric.name());
    }
    out += '\n';
    for (const auto& [query, values] : per_query) {
        out += fmt::format("{:<{}}", query.str(), width);
        for (double v : values) {
            out += fmt::format("  {:>8.4f}", v);
        }
        out += '\n';
    }
    out += fmt::format("{:<{}}", "all", width);
    for (double v : mean) {
        out += fmt::format("  {:>8.4f}", v);
    }
    out += '\n';
    out += fmt::format("evaluated {} queries; skipped {} unjudged, {} without relevant documents; "
                       "{} judged queries missing from run\n",
                       evaluated(), skipped_unjudged.size(), skipped_no_relevant.size(),
                       missing_from_run.size());
    return out;
}

std::string MetricReport::to_json() const
{
    using nlohmann::ordered_json;
    ordered_json aggregate = ordered_json::object();
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        aggregate[metrics[m].name()] = mean[m];
    }
    ordered_json queries = ordered_json::object();
    for (const auto& [query, values] : per_query) {
        ordered_json row = ordered_json::object();
        for (std::size_t m = 0; m < metrics.size(); ++m) {
            row[metrics[m].name()] = values[m];
        }
        queries[query.str()] = std::move(row);
    }
    auto ids = [](const std::vector<QueryId>& list) {
        ordered_json array = ordered_json::array();
        for (const auto& q : list) {
            array.push_back(q.str());
        }
        return array;
    };
    ordered_json report{{"evaluated", evaluated()},
                        {"aggregate", std::move(aggregate)},
                        {"per_query", std::move(queries)},
                        {"skipped_unjudged", ids(skipped_unjudged)},
                        {"skipped_no_relevant", ids(skipped_no_relevant)},
                        {"missing_from_run", ids(missing_from_run)}};
    return report.dump(2) + "\n";
}

MetricReport evaluate_run(std::span<const RunList> runs, const Qrels& qrels,
                          std::span<const Metric> metrics)
{
    if (metrics.empty()) {
        throw ValidationError("no metrics requested");
    }
    MetricReport report;
    report.metrics.assign(metrics.begin(), metrics.end());
    std::unordered_set<QueryId> in_run;
    for (const auto& run : runs) {
        if (!in_run.insert(run.query_id()).second) {
            throw ValidationError("query '" + run.query_id().str() + "' appears twice in run");
        }
        if (!qrels.contains(run.query_id())) {
            report.skipped_unjudged.push_back(run.query_id());
            continue;
        }
        const auto& relevant = qrels.relevant(run.query_id());
        if (relevant.empty()) {
            report.skipped_no_relevant.push_back(run.query_id());
            continue;
        }
        std::vector<double> values;
        values.reserve(metrics.size());
        for (const auto& metric : metrics) {
            values.push_back(evaluate_query(run, relevant, metric));
        }
        report.per_query.emplace(run.query_id(), std::move(values));
    }
    for (const auto& [query, relevant] : qrels.judgments()) {
        if (!relevant.empty() && !in_run.contains(query)) {
            report.missing_from_run.push_back(query);
        }
    }
    if (report.per_query.empty()) {
        throw ValidationError("no query is present in both the run and the qrels");
    }
    // Sum in query-id order so the averages do not depend on run order.
    report.mean.assign(metrics.size(), 0.0);
    for (const auto& [query, values] : report.per_query) {
        for (std::size_t m = 0; m < values.size(); ++m) {
            report.mean[m] += values[m];
        }
    }
    for (double& v : report.mean) {
        v /= static_cast<double>(report.per_query.size());
    }
    return report;
}

std::vector<Metric> standard_metrics(std::span<const std::size_t> recall_cutoffs, std::size_t rr_cutoff)
{
    std::vector<Metric> metrics;
    for (auto k : recall_cutoffs) {
        metrics.push_back(Metric{MetricKind::recall, k});
    }
    metrics.push_back(Metric{MetricKind::reciprocal_rank, rr_cutoff});
    metrics.push_back(Metric{MetricKind::r_precision, 0});
    return metrics;
}

}  // namespace hybrid
