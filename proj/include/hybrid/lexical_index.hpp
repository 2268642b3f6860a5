#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hybrid/types.hpp"

namespace hybrid {

struct Posting {
    std::uint32_t doc;  // ordinal in corpus order
    std::uint32_t tf;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Corpus-level statistics that enter BM25 besides per-term counts.
struct CollectionStats {
    double corpus_size;
    double avg_len;
};

/// Term -> postings inverted index with document lengths.
///
/// Postings are sorted by document ordinal; df(t) is the postings length and
/// every tf is at least one. Immutable once built.
class LexicalIndex {
  public:
    [[nodiscard]] std::size_t corpus_size() const noexcept { return doc_ids_.size(); }
    [[nodiscard]] double avg_len() const noexcept { return avg_len_; }
    [[nodiscard]] CollectionStats stats() const noexcept
    {
        return {static_cast<double>(doc_ids_.size()), avg_len_};
    }
    [[nodiscard]] std::size_t vocabulary_size() const noexcept { return postings_.size(); }

    [[nodiscard]] std::span<const Posting> postings(std::string_view term) const;
    [[nodiscard]] std::size_t df(std::string_view term) const { return postings(term).size(); }
    /// Occurrences of `term` in the document at `ordinal` (0 when absent).
    [[nodiscard]] std::uint32_t tf(std::string_view term, std::size_t ordinal) const;

    [[nodiscard]] std::optional<std::size_t> ordinal(const DocId& doc) const;
    [[nodiscard]] const DocId& doc_id(std::size_t ordinal) const { return doc_ids_.at(ordinal); }
    [[nodiscard]] std::uint32_t doc_len(std::size_t ordinal) const { return doc_len_.at(ordinal); }

    /// Vocabulary in bytewise ascending order.
    [[nodiscard]] std::vector<std::string> sorted_terms() const;

    friend bool operator==(const LexicalIndex&, const LexicalIndex&) = default;

  private:
    friend LexicalIndex build_lexical_index(const Corpus& corpus);
    friend LexicalIndex load_lexical_index(const std::filesystem::path& path);
    LexicalIndex() = default;
    void finalize();

    std::vector<DocId> doc_ids_;
    std::vector<std::uint32_t> doc_len_;
    std::unordered_map<DocId, std::uint32_t> ordinal_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    double avg_len_ = 0.0;
};

/// Tokenizes every document and builds the index. Throws ValidationError on
/// an empty corpus.
LexicalIndex build_lexical_index(const Corpus& corpus);

/// Binary layout is described in docs/formats.md.
void save_lexical_index(const LexicalIndex& index, const std::filesystem::path& path);
LexicalIndex load_lexical_index(const std::filesystem::path& path);

}  // namespace hybrid
