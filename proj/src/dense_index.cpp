#include "hybrid/dense_index.hpp"

#include <unordered_set>

#include "hybrid/error.hpp"
#include "top_k.hpp"

namespace hybrid {

FlatDenseIndex::FlatDenseIndex(DenseRecords records, bool cosine)
    : matrix_(std::move(records.matrix)), cosine_(cosine)
{
    if (records.ids.empty()) {
        throw ValidationError("dense index needs at least one vector");
    }
    if (records.ids.size() != matrix_.rows()) {
        throw ValidationError("dense index: id count does not match row count");
    }
    ids_.reserve(records.ids.size());
    std::unordered_set<DocId> seen;
    for (auto& id : records.ids) {
        ids_.emplace_back(std::move(id));
        if (!seen.insert(ids_.back()).second) {
            throw ValidationError("dense index: duplicate id '" + ids_.back().str() + "'");
        }
    }
    if (cosine_) {
        std::vector<double> values(matrix_.values().begin(), matrix_.values().end());
        const auto d = matrix_.dim();
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            try {
                normalize_l2(std::span<double>(values).subspan(i * d, d));
            } catch (const ValidationError&) {
                throw ValidationError("dense index: vector of '" + ids_[i].str()
                                      + "' is zero and cannot be normalized");
            }
        }
        matrix_ = TokenMatrix(d, std::move(values));
    }
}

DenseRecords FlatDenseIndex::records() const
{
    DenseRecords out;
    for (const auto& id : ids_) {
        out.ids.push_back(id.str());
    }
    out.matrix = matrix_;
    return out;
}

FlatDenseIndex ingest_dense(const std::filesystem::path& path, bool cosine)
{
    auto records = read_dense_records(path);
    try {
        return FlatDenseIndex(std::move(records), cosine);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

double dot(std::span<const double> lhs, std::span<const double> rhs)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        sum += lhs[i] * rhs[i];
    }
    return sum;
}

RunList dense_search(const FlatDenseIndex& index, const QueryId& query,
                     std::span<const double> query_vector, std::size_t k)
{
    if (query_vector.size() != index.dim()) {
        throw ValidationError("query '" + query.str() + "' has dimension "
                              + std::to_string(query_vector.size()) + ", index has "
                              + std::to_string(index.dim()));
    }
    std::vector<double> q(query_vector.begin(), query_vector.end());
    if (index.cosine()) {
        normalize_l2(q);
    }
    std::vector<ScoredDoc> candidates;
    candidates.reserve(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        candidates.push_back(ScoredDoc{index.id(i), dot(q, index.row(i))});
    }
    return detail::top_k_run(query, "dense", std::move(candidates), k);
}

}  // namespace hybrid
