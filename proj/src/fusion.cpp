#include "hybrid/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "file_util.hpp"
#include "hybrid/error.hpp"

namespace hybrid {

namespace {

constexpr std::string_view kFusedSystem = "fused";

void check_same_query(std::span<const RunList> runs)
{
    if (runs.empty()) {
        throw ValidationError("fusion needs at least one run");
    }
    for (const auto& run : runs) {
        if (run.query_id() != runs.front().query_id()) {
            throw ValidationError("cannot fuse runs of different queries ('" + runs.front().query_id().str()
                                  + "' and '" + run.query_id().str() + "')");
        }
    }
}

// Union of all documents, in first-seen order, with a slot per document.
struct Pool {
    std::vector<DocId> docs;
    std::unordered_map<DocId, std::size_t> slot;

    explicit Pool(std::span<const RunList> runs)
    {
        for (const auto& run : runs) {
            for (const auto& entry : run.entries()) {
                if (slot.try_emplace(entry.doc, docs.size()).second) {
                    docs.push_back(entry.doc);
                }
            }
        }
    }

    [[nodiscard]] RunList to_run(const QueryId& query, const std::vector<double>& fused) const
    {
        std::vector<ScoredDoc> entries;
        entries.reserve(docs.size());
        for (std::size_t i = 0; i < docs.size(); ++i) {
            entries.push_back(ScoredDoc{docs[i], fused[i]});
        }
        return RunList::from_unsorted(query, std::string(kFusedSystem), std::move(entries));
    }
};

// Ranks aligned with run entries; relies on the non-increasing order.
std::vector<std::size_t> ranks_of(const RunList& run)
{
    std::vector<std::size_t> ranks(run.size());
    for (std::size_t i = 0; i < run.size(); ++i) {
        ranks[i] = (i > 0 && run[i].score == run[i - 1].score) ? ranks[i - 1] : i + 1;
    }
    return ranks;
}

std::vector<double> parse_weight_list(std::string_view text)
{
    std::vector<double> weights;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string_view::npos) {
            comma = text.size();
        }
        auto item = text.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') {
            item.remove_prefix(1);
        }
        while (!item.empty() && item.back() == ' ') {
            item.remove_suffix(1);
        }
        double w = 0.0;
        if (!detail::parse_number(item, w)) {
            throw ValidationError("weight '" + std::string(item) + "' is not a number");
        }
        weights.push_back(w);
        pos = comma + 1;
    }
    return weights;
}

}  // namespace

std::string_view to_string(FusionMethod method)
{
    switch (method) {
        case FusionMethod::bcf:
            return "bcf";
        case FusionMethod::rrf:
            return "rrf";
        case FusionMethod::nsf:
            return "nsf";
    }
    return "?";
}

FusionMethod parse_fusion_method(std::string_view text)
{
    if (text == "bcf" || text == "borda") {
        return FusionMethod::bcf;
    }
    if (text == "rrf") {
        return FusionMethod::rrf;
    }
    if (text == "nsf" || text == "combsum") {
        return FusionMethod::nsf;
    }
    throw ValidationError("unknown fusion method '" + std::string(text) + "' (expected bcf, rrf or nsf)");
}

void validate_weights(std::span<const double> weights, std::size_t num_systems)
{
    if (weights.size() != num_systems) {
        throw ValidationError("got " + std::to_string(weights.size()) + " weights for "
                              + std::to_string(num_systems) + " systems");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ValidationError("fusion weights must be finite and non-negative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("fusion weights must sum to 1 (got " + std::to_string(sum) + ")");
    }
}

std::vector<double> FusionSpec::resolved_weights(std::size_t num_systems) const
{
    if (weights.empty()) {
        return std::vector<double>(num_systems, 1.0 / static_cast<double>(num_systems));
    }
    validate_weights(weights, num_systems);
    return weights;
}

void FusionSpec::validate(std::size_t num_systems) const
{
    if (num_systems == 0) {
        throw ValidationError("fusion needs at least one system");
    }
    if (!(rrf_k > 0.0) || !std::isfinite(rrf_k)) {
        throw ValidationError("rrf_k must be a positive number");
    }
    if (method == FusionMethod::nsf) {
        (void)resolved_weights(num_systems);
    }
}

FusionSpec parse_fusion_spec(const std::map<std::string, std::string>& section)
{
    FusionSpec spec;
    for (const auto& [key, value] : section) {
        if (key == "method") {
            spec.method = parse_fusion_method(value);
        } else if (key == "norm" || key == "normalization") {
            spec.normalization = parse_normalization(value);
        } else if (key == "weights") {
            spec.weights = parse_weight_list(value);
        } else if (key == "rrf_k") {
            if (!detail::parse_number(std::string_view(value), spec.rrf_k) || !(spec.rrf_k > 0.0)) {
                throw ValidationError("rrf_k must be a positive number, got '" + value + "'");
            }
        } else if (key == "depth") {
            if (!detail::parse_number(std::string_view(value), spec.depth)) {
                throw ValidationError("depth must be a non-negative integer, got '" + value + "'");
            }
        } else {
            throw ValidationError("unknown fusion key '" + key + "'");
        }
    }
    return spec;
}

std::unordered_map<DocId, std::size_t> rank_positions(const RunList& run)
{
    const auto ranks = ranks_of(run);
    std::unordered_map<DocId, std::size_t> positions;
    positions.reserve(run.size());
    for (std::size_t i = 0; i < run.size(); ++i) {
        positions.emplace(run[i].doc, ranks[i]);
    }
    return positions;
}

RunList fuse_bcf(std::span<const RunList> runs)
{
    check_same_query(runs);
    Pool pool(runs);
    std::vector<double> fused(pool.docs.size(), 0.0);
    for (const auto& run : runs) {
        const auto ranks = ranks_of(run);
        const auto length = static_cast<double>(run.size());
        for (std::size_t i = 0; i < run.size(); ++i) {
            fused[pool.slot.at(run[i].doc)] += length - static_cast<double>(ranks[i]) + 1.0;
        }
    }
    return pool.to_run(runs.front().query_id(), fused);
}

RunList fuse_rrf(std::span<const RunList> runs, double k)
{
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ValidationError("RRF constant k must be positive");
    }
    check_same_query(runs);
    Pool pool(runs);
    std::vector<double> fused(pool.docs.size(), 0.0);
    for (const auto& run : runs) {
        const auto ranks = ranks_of(run);
        for (std::size_t i = 0; i < run.size(); ++i) {
            fused[pool.slot.at(run[i].doc)] += 1.0 / (k + static_cast<double>(ranks[i]));
        }
    }
    return pool.to_run(runs.front().query_id(), fused);
}

RunList fuse_nsf(std::span<const RunList> runs, std::span<const double> weights,
                 Normalization normalization, std::span<const ScoreDistribution> distributions)
{
    check_same_query(runs);
    validate_weights(weights, runs.size());
    if (normalization == Normalization::percentile && distributions.size() != runs.size()) {
        throw ValidationError("percentile fusion needs one score distribution per system");
    }
    Pool pool(runs);
    std::vector<double> fused(pool.docs.size(), 0.0);
    std::vector<double> contribution(pool.docs.size());
    std::vector<double> raw;
    for (std::size_t m = 0; m < runs.size(); ++m) {
        const auto& run = runs[m];
        if (run.empty()) {
            continue;
        }
        raw.clear();
        for (const auto& entry : run.entries()) {
            raw.push_back(entry.score);
        }
        const auto* distribution =
            normalization == Normalization::percentile ? &distributions[m] : nullptr;
        const auto normalized = normalize(raw, normalization, distribution);
        const double floor = *std::min_element(normalized.begin(), normalized.end());
        std::fill(contribution.begin(), contribution.end(), floor);
        for (std::size_t i = 0; i < run.size(); ++i) {
            contribution[pool.slot.at(run[i].doc)] = normalized[i];
        }
        for (std::size_t d = 0; d < fused.size(); ++d) {
            fused[d] += weights[m] * contribution[d];
        }
    }
    return pool.to_run(runs.front().query_id(), fused);
}

RunList fuse(std::span<const RunList> runs, const FusionSpec& spec,
             std::span<const ScoreDistribution> distributions)
{
    spec.validate(runs.size());
    std::vector<RunList> inputs;
    if (spec.depth > 0) {
        inputs.reserve(runs.size());
        for (const auto& run : runs) {
            inputs.push_back(run.truncated(spec.depth));
        }
        runs = inputs;
    }
    switch (spec.method) {
        case FusionMethod::bcf:
            return fuse_bcf(runs);
        case FusionMethod::rrf:
            return fuse_rrf(runs, spec.rrf_k);
        case FusionMethod::nsf:
            return fuse_nsf(runs, spec.resolved_weights(runs.size()), spec.normalization, distributions);
    }
    throw ValidationError("unsupported fusion method");
}

std::vector<AlignedQuery> align_by_query(std::span<const std::vector<RunList>> systems)
{
    std::map<QueryId, std::vector<const RunList*>> by_query;
    for (std::size_t m = 0; m < systems.size(); ++m) {
        for (const auto& run : systems[m]) {
            auto& slots = by_query.try_emplace(run.query_id(), systems.size(), nullptr).first->second;
            if (slots[m] != nullptr) {
                throw ValidationError("system " + std::to_string(m + 1) + " has two runs for query '"
                                      + run.query_id().str() + "'");
            }
            slots[m] = &run;
        }
    }
    std::vector<AlignedQuery> aligned;
    aligned.reserve(by_query.size());
    for (const auto& [query, slots] : by_query) {
        AlignedQuery entry{query, {}};
        entry.runs.reserve(slots.size());
        for (std::size_t m = 0; m < slots.size(); ++m) {
            if (slots[m] != nullptr) {
                entry.runs.push_back(*slots[m]);
            } else {
                entry.runs.emplace_back(query, "system" + std::to_string(m + 1), std::vector<ScoredDoc>{});
            }
        }
        aligned.push_back(std::move(entry));
    }
    return aligned;
}

std::vector<RunList> fuse_systems(std::span<const std::vector<RunList>> systems, const FusionSpec& spec,
                                  std::span<const ScoreDistribution> distributions)
{
    spec.validate(systems.size());
    std::vector<RunList> fused;
    for (const auto& query : align_by_query(systems)) {
        fused.push_back(fuse(query.runs, spec, distributions));
    }
    return fused;
}

}  // namespace hybrid
