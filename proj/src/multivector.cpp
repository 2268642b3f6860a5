#include "hybrid/multivector.hpp"

#include <limits>
#include <unordered_set>

#include "hybrid/dense_index.hpp"
#include "hybrid/error.hpp"
#include "top_k.hpp"

namespace hybrid {

double maxsim_score(const TokenMatrix& query_tokens, const TokenMatrix& doc_tokens)
{
    if (query_tokens.dim() != doc_tokens.dim()) {
        throw ValidationError("MaxSim dimension mismatch: query " + std::to_string(query_tokens.dim())
                              + " vs document " + std::to_string(doc_tokens.dim()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < query_tokens.rows(); ++i) {
        const auto q = query_tokens.row(i);
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < doc_tokens.rows(); ++j) {
            best = std::max(best, dot(q, doc_tokens.row(j)));
        }
        total += best;
    }
    return total;
}

MultiVectorStore::MultiVectorStore(MultiVectorRecords records, bool cosine)
    : dim_(records.dim), cosine_(cosine)
{
    if (records.ids.empty()) {
        throw ValidationError("multi-vector store needs at least one document");
    }
    if (records.ids.size() != records.matrices.size()) {
        throw ValidationError("multi-vector store: id count does not match matrix count");
    }
    std::unordered_set<DocId> seen;
    for (std::size_t i = 0; i < records.ids.size(); ++i) {
        ids_.emplace_back(std::move(records.ids[i]));
        if (!seen.insert(ids_.back()).second) {
            throw ValidationError("multi-vector store: duplicate id '" + ids_.back().str() + "'");
        }
        auto& matrix = records.matrices[i];
        if (matrix.dim() != dim_) {
            throw ValidationError("multi-vector store: '" + ids_.back().str() + "' has dimension "
                                  + std::to_string(matrix.dim()) + ", expected " + std::to_string(dim_));
        }
        if (cosine_) {
            try {
                matrix.normalize_rows();
            } catch (const ValidationError&) {
                throw ValidationError("multi-vector store: '" + ids_.back().str()
                                      + "' has a zero token vector");
            }
        }
        matrices_.push_back(std::move(matrix));
    }
}

double MultiVectorStore::average_tokens() const
{
    double total = 0.0;
    for (const auto& matrix : matrices_) {
        total += static_cast<double>(matrix.rows());
    }
    return total / static_cast<double>(matrices_.size());
}

MultiVectorRecords MultiVectorStore::records() const
{
    MultiVectorRecords out;
    out.dim = dim_;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        out.ids.push_back(ids_[i].str());
        out.matrices.push_back(matrices_[i]);
    }
    return out;
}

MultiVectorStore ingest_multivector(const std::filesystem::path& path, bool cosine)
{
    auto records = read_multivector_records(path);
    try {
        return MultiVectorStore(std::move(records), cosine);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

RunList multivector_search(const MultiVectorStore& store, const QueryId& query,
                           const TokenMatrix& query_tokens, std::size_t k)
{
    if (query_tokens.dim() != store.dim()) {
        throw ValidationError("query '" + query.str() + "' has token dimension "
                              + std::to_string(query_tokens.dim()) + ", store has "
                              + std::to_string(store.dim()));
    }
    TokenMatrix q = query_tokens;
    if (store.cosine()) {
        q.normalize_rows();
    }
    std::vector<ScoredDoc> candidates;
    candidates.reserve(store.size());
    for (std::size_t i = 0; i < store.size(); ++i) {
        candidates.push_back(ScoredDoc{store.id(i), maxsim_score(q, store.tokens(i))});
    }
    return detail::top_k_run(query, "multivector", std::move(candidates), k);
}

}  // namespace hybrid
