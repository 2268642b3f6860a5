#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hybrid {

namespace detail {
void validate_identifier(std::string_view value, std::string_view what);
}

/// Opaque textual identifier. Non-empty and free of whitespace so that it
/// survives the whitespace-separated TREC formats unchanged.
template <typename Tag>
class Identifier {
  public:
    explicit Identifier(std::string value) : value_(std::move(value))
    {
        detail::validate_identifier(value_, Tag::name);
    }

    [[nodiscard]] const std::string& str() const noexcept { return value_; }

    friend auto operator<=>(const Identifier&, const Identifier&) = default;
    friend bool operator==(const Identifier&, const Identifier&) = default;

  private:
    std::string value_;
};

struct DocTag {
    static constexpr std::string_view name = "document id";
};
struct QueryTag {
    static constexpr std::string_view name = "query id";
};

using DocId = Identifier<DocTag>;
using QueryId = Identifier<QueryTag>;

struct Document {
    DocId id;
    std::string text;
};

struct Query {
    QueryId id;
    std::string text;
};

/// Ordered document collection with unique ids.
class Corpus {
  public:
    Corpus() = default;
    explicit Corpus(std::vector<Document> documents);

    [[nodiscard]] std::size_t size() const noexcept { return documents_.size(); }
    [[nodiscard]] bool empty() const noexcept { return documents_.empty(); }
    [[nodiscard]] const Document& operator[](std::size_t i) const { return documents_[i]; }
    [[nodiscard]] std::span<const Document> documents() const noexcept { return documents_; }
    [[nodiscard]] auto begin() const noexcept { return documents_.begin(); }
    [[nodiscard]] auto end() const noexcept { return documents_.end(); }

  private:
    std::vector<Document> documents_;
};

/// Binary relevance judgments. A query may be present with an empty set when
/// every judgment for it was non-positive.
class Qrels {
  public:
    void add_judgment(const QueryId& query, const DocId& doc, bool relevant);

    [[nodiscard]] bool contains(const QueryId& query) const;
    /// Relevant documents of `query`; empty when the query is unknown.
    [[nodiscard]] const std::set<DocId>& relevant(const QueryId& query) const;
    [[nodiscard]] bool is_relevant(const QueryId& query, const DocId& doc) const;
    [[nodiscard]] const std::map<QueryId, std::set<DocId>>& judgments() const noexcept
    {
        return judgments_;
    }
    [[nodiscard]] std::size_t num_queries() const noexcept { return judgments_.size(); }

  private:
    std::map<QueryId, std::set<DocId>> judgments_;
};

struct ScoredDoc {
    DocId doc;
    double score;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// One system's ranked output for one query.
///
/// Entries are sorted by non-increasing score, doc ids are distinct and every
/// score is finite. Construction validates all three and throws
/// ValidationError otherwise.
class RunList {
  public:
    RunList(QueryId query, std::string system, std::vector<ScoredDoc> entries);

    /// Sorts `entries` by score descending, ties by doc id ascending, then
    /// validates.
    static RunList from_unsorted(QueryId query, std::string system, std::vector<ScoredDoc> entries);

    [[nodiscard]] const QueryId& query_id() const noexcept { return query_; }
    [[nodiscard]] const std::string& system_id() const noexcept { return system_; }
    [[nodiscard]] std::span<const ScoredDoc> entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    [[nodiscard]] const ScoredDoc& operator[](std::size_t i) const { return entries_[i]; }

    /// First `k` entries (all of them when k >= size()).
    [[nodiscard]] RunList truncated(std::size_t k) const;

    friend bool operator==(const RunList&, const RunList&) = default;

  private:
    QueryId query_;
    std::string system_;
    std::vector<ScoredDoc> entries_;
};

/// Which documents a sparse retriever reports for a query.
enum class CandidatePool {
    matching,     ///< documents sharing at least one term with the query
    full_corpus,  ///< every document; non-matching ones score 0
};

/// Canonical ordering used for every ranked output: score descending, then
/// doc id ascending.
[[nodiscard]] inline bool ranks_before(const ScoredDoc& lhs, const ScoredDoc& rhs)
{
    if (lhs.score != rhs.score) {
        return lhs.score > rhs.score;
    }
    return lhs.doc < rhs.doc;
}

}  // namespace hybrid

template <typename Tag>
struct std::hash<hybrid::Identifier<Tag>> {
    std::size_t operator()(const hybrid::Identifier<Tag>& id) const noexcept
    {
        return std::hash<std::string>{}(id.str());
    }
};
