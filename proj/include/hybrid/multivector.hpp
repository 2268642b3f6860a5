#pragma once

#include <filesystem>
#include <vector>

#include "hybrid/embeddings.hpp"
#include "hybrid/types.hpp"

namespace hybrid {

/// Late-interaction relevance: for every query token, the best inner product
/// against any document token, summed over query tokens.
/// Throws ValidationError when the dimensions differ.
double maxsim_score(const TokenMatrix& query_tokens, const TokenMatrix& doc_tokens);

/// One token matrix per document, scored exhaustively with MaxSim.
class MultiVectorStore {
  public:
    /// In cosine mode every token row is unit-normalized.
    MultiVectorStore(MultiVectorRecords records, bool cosine);

    [[nodiscard]] std::size_t size() const noexcept { return ids_.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] bool cosine() const noexcept { return cosine_; }
    [[nodiscard]] const DocId& id(std::size_t i) const { return ids_.at(i); }
    [[nodiscard]] const TokenMatrix& tokens(std::size_t i) const { return matrices_.at(i); }
    [[nodiscard]] double average_tokens() const;

    [[nodiscard]] MultiVectorRecords records() const;

  private:
    std::vector<DocId> ids_;
    std::vector<TokenMatrix> matrices_;
    std::size_t dim_ = 0;
    bool cosine_;
};

MultiVectorStore ingest_multivector(const std::filesystem::path& path, bool cosine);

/// Query rows are normalized first when the store is in cosine mode.
RunList multivector_search(const MultiVectorStore& store, const QueryId& query,
                           const TokenMatrix& query_tokens, std::size_t k);

}  // namespace hybrid
