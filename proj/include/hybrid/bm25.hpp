#pragma once

#include <span>
#include <string>
#include <vector>

#include "hybrid/lexical_index.hpp"
#include "hybrid/types.hpp"

namespace hybrid {

struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;

    /// Throws ValidationError unless k1 >= 0 and 0 <= b <= 1.
    void validate() const;
};

/// Settings tuned on in-domain legal queries.
inline constexpr Bm25Params kBm25InDomain{0.9, 0.4};
/// Settings used for zero-shot transfer.
inline constexpr Bm25Params kBm25ZeroShot{2.5, 0.2};

/// Okapi BM25 without IDF clamping:
///
///   sum over query terms t (with multiplicity) of
///   ln((|C| - df + 0.5) / (df + 0.5)) * tf (k1 + 1) / (tf + k1 (1 - b + b |a| / avgal))
///
/// Terms that do not occur in the document contribute 0. IDF goes negative
/// once df exceeds half the collection; that is kept as is. `stats` replaces
/// the index's own |C| and avgal, which lets callers pin them.
double bm25_score(const LexicalIndex& index, const Bm25Params& params,
                  std::span<const std::string> query_terms, const DocId& doc);
double bm25_score(const LexicalIndex& index, const Bm25Params& params,
                  std::span<const std::string> query_terms, const DocId& doc,
                  const CollectionStats& stats);

/// Term-at-a-time search. Returns the best `k` documents, ties broken by doc
/// id. With CandidatePool::matching only documents containing at least one
/// query term are returned.
RunList bm25_search(const LexicalIndex& index, const Bm25Params& params, const QueryId& query,
                    std::span<const std::string> query_terms, std::size_t k,
                    CandidatePool pool = CandidatePool::matching);
RunList bm25_search(const LexicalIndex& index, const Bm25Params& params, const Query& query,
                    std::size_t k, CandidatePool pool = CandidatePool::matching);

}  // namespace hybrid
