#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hybrid/embeddings.hpp"
#include "hybrid/types.hpp"

namespace hybrid {

struct WeightedPosting {
    std::uint32_t doc;
    double weight;

    friend bool operator==(const WeightedPosting&, const WeightedPosting&) = default;
};

/// Inverted index over learned sparse document vectors. Every stored weight
/// is strictly positive.
class SparseIndex {
  public:
    explicit SparseIndex(SparseRecords records);

    [[nodiscard]] std::size_t size() const noexcept { return ids_.size(); }
    [[nodiscard]] const DocId& id(std::size_t i) const { return ids_.at(i); }
    [[nodiscard]] std::size_t nonzeros(std::size_t i) const { return nonzeros_.at(i); }
    [[nodiscard]] std::size_t vocabulary_size() const noexcept { return postings_.size(); }
    [[nodiscard]] std::span<const WeightedPosting> postings(const std::string& term) const;
    [[nodiscard]] double average_posting_length() const;

    [[nodiscard]] SparseRecords records() const;

    friend bool operator==(const SparseIndex&, const SparseIndex&) = default;

  private:
    std::vector<DocId> ids_;
    std::vector<std::size_t> nonzeros_;
    std::unordered_map<std::string, std::vector<WeightedPosting>> postings_;
};

SparseIndex ingest_sparse(const std::filesystem::path& path);

/// Binary layout is described in docs/formats.md.
void save_sparse_index(const SparseIndex& index, const std::filesystem::path& path);
SparseIndex load_sparse_index(const std::filesystem::path& path);

/// Score accumulation over the postings of each query term:
/// score(q, a) = sum_t q_t * a_t. An empty query yields an empty run.
RunList sparse_search(const SparseIndex& index, const QueryId& query, const SparseVector& query_vector,
                      std::size_t k, CandidatePool pool = CandidatePool::matching);

}  // namespace hybrid
