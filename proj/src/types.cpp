#include "hybrid/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "hybrid/error.hpp"

namespace hybrid {

namespace detail {

void validate_identifier(std::string_view value, std::string_view what)
{
    if (value.empty()) {
        throw ValidationError(std::string(what) + " must not be empty");
    }
    auto is_space = [](unsigned char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    };
    if (std::any_of(value.begin(), value.end(), is_space)) {
        throw ValidationError(std::string(what) + " '" + std::string(value)
                              + "' contains whitespace");
    }
}

}  // namespace detail

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents))
{
    std::unordered_set<DocId> seen;
    seen.reserve(documents_.size());
    for (const auto& doc : documents_) {
        if (!seen.insert(doc.id).second) {
            throw ValidationError("duplicate document id '" + doc.id.str() + "'");
        }
    }
}

void Qrels::add_judgment(const QueryId& query, const DocId& doc, bool relevant)
{
    auto& docs = judgments_[query];
    if (relevant) {
        docs.insert(doc);
    }
}

bool Qrels::contains(const QueryId& query) const
{
    return judgments_.contains(query);
}

const std::set<DocId>& Qrels::relevant(const QueryId& query) const
{
    static const std::set<DocId> none;
    auto it = judgments_.find(query);
    return it == judgments_.end() ? none : it->second;
}

bool Qrels::is_relevant(const QueryId& query, const DocId& doc) const
{
    return relevant(query).contains(doc);
}

RunList::RunList(QueryId query, std::string system, std::vector<ScoredDoc> entries)
    : query_(std::move(query)), system_(std::move(system)), entries_(std::move(entries))
{
    std::unordered_set<DocId> seen;
    seen.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& entry = entries_[i];
        if (!std::isfinite(entry.score)) {
            throw ValidationError("query '" + query_.str() + "': non-finite score for document '"
                                  + entry.doc.str() + "'");
        }
        if (i > 0 && entry.score > entries_[i - 1].score) {
            throw ValidationError("query '" + query_.str()
                                  + "': run entries are not sorted by non-increasing score");
        }
        if (!seen.insert(entry.doc).second) {
            throw ValidationError("query '" + query_.str() + "': duplicate document '"
                                  + entry.doc.str() + "' in run");
        }
    }
}

RunList RunList::from_unsorted(QueryId query, std::string system, std::vector<ScoredDoc> entries)
{
    // NaN would break the strict weak ordering; let the constructor report it.
    if (std::all_of(entries.begin(), entries.end(),
                    [](const ScoredDoc& e) { return !std::isnan(e.score); })) {
        std::sort(entries.begin(), entries.end(), ranks_before);
    }
    return RunList(std::move(query), std::move(system), std::move(entries));
}

RunList RunList::truncated(std::size_t k) const
{
    auto n = std::min(k, entries_.size());
    return RunList(query_, system_, std::vector<ScoredDoc>(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(n)));
}

}  // namespace hybrid
