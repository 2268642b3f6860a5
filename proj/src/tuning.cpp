#include "hybrid/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "hybrid/error.hpp"
#include "hybrid/fusion.hpp"

namespace hybrid {

namespace {

void compositions(std::size_t parts, std::size_t remaining, std::vector<std::size_t>& current,
                  std::vector<std::vector<std::size_t>>& out)
{
    if (current.size() + 1 == parts) {
        current.push_back(remaining);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
        current.push_back(c);
        compositions(parts, remaining - c, current, out);
        current.pop_back();
    }
}

double entropy(const std::vector<std::size_t>& counts, std::size_t steps)
{
    double h = 0.0;
    for (auto c : counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / static_cast<double>(steps);
            h -= p * std::log(p);
        }
    }
    return h;
}

// One judged query with every system's normalized contribution precomputed
// over the pooled documents, mirroring fuse_nsf.
struct PreparedQuery {
    QueryId query;
    std::vector<DocId> docs;
    std::vector<std::vector<double>> contributions;  // per non-empty system
    std::vector<std::size_t> systems;                // index of each contribution
    const std::set<DocId>* relevant;
};

PreparedQuery prepare(const AlignedQuery& aligned, Normalization normalization,
                      std::span<const ScoreDistribution> distributions, const std::set<DocId>& relevant)
{
    PreparedQuery prepared{aligned.query, {}, {}, {}, &relevant};
    std::unordered_map<DocId, std::size_t> slot;
    for (const auto& run : aligned.runs) {
        for (const auto& entry : run.entries()) {
            if (slot.try_emplace(entry.doc, prepared.docs.size()).second) {
                prepared.docs.push_back(entry.doc);
            }
        }
    }
    std::vector<double> raw;
    for (std::size_t m = 0; m < aligned.runs.size(); ++m) {
        const auto& run = aligned.runs[m];
        if (run.empty()) {
            continue;
        }
        raw.clear();
        for (const auto& entry : run.entries()) {
            raw.push_back(entry.score);
        }
        const auto normalized = normalize(
            raw, normalization, normalization == Normalization::percentile ? &distributions[m] : nullptr);
        std::vector<double> column(prepared.docs.size(),
                                   *std::min_element(normalized.begin(), normalized.end()));
        for (std::size_t i = 0; i < run.size(); ++i) {
            column[slot.at(run[i].doc)] = normalized[i];
        }
        prepared.contributions.push_back(std::move(column));
        prepared.systems.push_back(m);
    }
    return prepared;
}

double score_point(const PreparedQuery& prepared, std::span<const double> weights, const Metric& metric,
                   std::vector<double>& fused, std::vector<std::size_t>& order)
{
    fused.assign(prepared.docs.size(), 0.0);
    for (std::size_t c = 0; c < prepared.contributions.size(); ++c) {
        const double w = weights[prepared.systems[c]];
        const auto& column = prepared.contributions[c];
        for (std::size_t d = 0; d < fused.size(); ++d) {
            fused[d] += w * column[d];
        }
    }
    order.resize(fused.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (fused[a] != fused[b]) {
            return fused[a] > fused[b];
        }
        return prepared.docs[a] < prepared.docs[b];
    });
    std::vector<ScoredDoc> entries;
    entries.reserve(order.size());
    for (auto i : order) {
        entries.push_back(ScoredDoc{prepared.docs[i], fused[i]});
    }
    const RunList run(prepared.query, "tuning", std::move(entries));
    return evaluate_query(run, *prepared.relevant, metric);
}

}  // namespace

std::vector<std::vector<std::size_t>> simplex_grid(std::size_t parts, std::size_t steps)
{
    std::vector<std::vector<std::size_t>> grid;
    if (parts == 0) {
        return grid;
    }
    std::vector<std::size_t> current;
    compositions(parts, steps, current, grid);
    return grid;
}

TuningResult tune_weights(std::span<const std::vector<RunList>> systems, const Qrels& qrels,
                          Normalization normalization, const Metric& metric, double step,
                          std::span<const ScoreDistribution> distributions)
{
    if (systems.size() < 2 || systems.size() > 4) {
        throw ValidationError("weight tuning supports 2 to 4 systems, got " + std::to_string(systems.size()));
    }
    if (!(step > 0.0 && step <= 1.0)) {
        throw ValidationError("tuning step must lie in (0, 1]");
    }
    const double ratio = 1.0 / step;
    const auto steps = static_cast<std::size_t>(std::llround(ratio));
    if (std::abs(ratio - static_cast<double>(steps)) > 1e-9) {
        throw ValidationError("tuning step must divide 1 evenly");
    }
    if (normalization == Normalization::percentile && distributions.size() != systems.size()) {
        throw ValidationError("percentile tuning needs one score distribution per system");
    }

    std::vector<PreparedQuery> prepared;
    for (const auto& aligned : align_by_query(systems)) {
        const auto& relevant = qrels.relevant(aligned.query);
        if (!relevant.empty()) {
            prepared.push_back(prepare(aligned, normalization, distributions, relevant));
        }
    }
    if (prepared.empty()) {
        throw ValidationError("no tuning query has relevant documents in the qrels");
    }

    const auto grid = simplex_grid(systems.size(), steps);
    TuningResult best;
    best.grid_points = grid.size();
    best.queries = prepared.size();
    const std::vector<std::size_t>* best_counts = nullptr;
    double best_entropy = 0.0;
    std::vector<double> weights(systems.size());
    std::vector<double> fused;
    std::vector<std::size_t> order;

    for (const auto& counts : grid) {
        for (std::size_t m = 0; m < counts.size(); ++m) {
            weights[m] = static_cast<double>(counts[m]) / static_cast<double>(steps);
        }
        double total = 0.0;
        for (const auto& query : prepared) {
            total += score_point(query, weights, metric, fused, order);
        }
        const double objective = total / static_cast<double>(prepared.size());
        const double h = entropy(counts, steps);

        bool better = best_counts == nullptr || objective > best.objective;
        if (!better && objective == best.objective) {
            if (h > best_entropy + 1e-12) {
                better = true;
            } else if (std::abs(h - best_entropy) <= 1e-12) {
                better = counts > *best_counts;
            }
        }
        if (better) {
            best.objective = objective;
            best.weights = weights;
            best_counts = &counts;
            best_entropy = h;
        }
    }
    return best;
}

}  // namespace hybrid
