#pragma once

#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "hybrid/embeddings.hpp"
#include "hybrid/types.hpp"

namespace hybrid {

/// Exhaustive (flat) store of one d-dimensional vector per document.
///
/// In cosine mode every row is L2-normalized at ingestion and queries are
/// normalized before scoring, so the inner product is the cosine similarity.
class FlatDenseIndex {
  public:
    FlatDenseIndex(DenseRecords records, bool cosine);

    [[nodiscard]] std::size_t size() const noexcept { return ids_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return matrix_.dim(); }
    [[nodiscard]] bool cosine() const noexcept { return cosine_; }
    [[nodiscard]] const DocId& id(std::size_t i) const { return ids_.at(i); }
    [[nodiscard]] std::span<const double> row(std::size_t i) const { return matrix_.row(i); }

    /// Back to on-disk records (values as stored, i.e. normalized in cosine mode).
    [[nodiscard]] DenseRecords records() const;

  private:
    std::vector<DocId> ids_;
    TokenMatrix matrix_;
    bool cosine_;
};

FlatDenseIndex ingest_dense(const std::filesystem::path& path, bool cosine);

double dot(std::span<const double> lhs, std::span<const double> rhs);

/// Brute-force inner-product search over every document; ties by doc id.
RunList dense_search(const FlatDenseIndex& index, const QueryId& query,
                     std::span<const double> query_vector, std::size_t k);

}  // namespace hybrid
