#include "hybrid/bm25.hpp"

#include <cmath>

#include "hybrid/error.hpp"
#include "hybrid/tokenizer.hpp"
#include "top_k.hpp"

namespace hybrid {

namespace {

double idf(double corpus_size, double df)
{
    return std::log((corpus_size - df + 0.5) / (df + 0.5));
}

double term_score(double idf_value, double tf, double doc_len, const Bm25Params& params,
                  const CollectionStats& stats)
{
    const double length_norm = params.k1 * (1.0 - params.b + params.b * doc_len / stats.avg_len);
    return idf_value * (tf * (params.k1 + 1.0)) / (tf + length_norm);
}

}  // namespace

void Bm25Params::validate() const
{
    if (!(k1 >= 0.0) || !std::isfinite(k1)) {
        throw ValidationError("BM25 k1 must be a finite non-negative number");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw ValidationError("BM25 b must lie in [0, 1]");
    }
}

double bm25_score(const LexicalIndex& index, const Bm25Params& params,
                  std::span<const std::string> query_terms, const DocId& doc,
                  const CollectionStats& stats)
{
    params.validate();
    auto ordinal = index.ordinal(doc);
    if (!ordinal) {
        throw ValidationError("unknown document '" + doc.str() + "'");
    }
    const double doc_len = index.doc_len(*ordinal);
    double score = 0.0;
    for (const auto& term : query_terms) {
        const auto tf = index.tf(term, *ordinal);
        if (tf == 0) {
            continue;
        }
        const double idf_value = idf(stats.corpus_size, static_cast<double>(index.df(term)));
        score += term_score(idf_value, tf, doc_len, params, stats);
    }
    return score;
}

double bm25_score(const LexicalIndex& index, const Bm25Params& params,
                  std::span<const std::string> query_terms, const DocId& doc)
{
    return bm25_score(index, params, query_terms, doc, index.stats());
}

RunList bm25_search(const LexicalIndex& index, const Bm25Params& params, const QueryId& query,
                    std::span<const std::string> query_terms, std::size_t k, CandidatePool pool)
{
    params.validate();
    const auto stats = index.stats();
    std::vector<double> accumulator(index.corpus_size(), 0.0);
    std::vector<bool> matched(index.corpus_size(), pool == CandidatePool::full_corpus);

    for (const auto& term : query_terms) {
        auto list = index.postings(term);
        if (list.empty()) {
            continue;
        }
        const double idf_value = idf(stats.corpus_size, static_cast<double>(list.size()));
        for (const auto& posting : list) {
            accumulator[posting.doc] += term_score(idf_value, posting.tf,
                                                   index.doc_len(posting.doc), params, stats);
            matched[posting.doc] = true;
        }
    }

    std::vector<ScoredDoc> candidates;
    for (std::size_t i = 0; i < accumulator.size(); ++i) {
        if (matched[i]) {
            candidates.push_back(ScoredDoc{index.doc_id(i), accumulator[i]});
        }
    }
    return detail::top_k_run(query, "bm25", std::move(candidates), k);
}

RunList bm25_search(const LexicalIndex& index, const Bm25Params& params, const Query& query,
                    std::size_t k, CandidatePool pool)
{
    const auto terms = tokenize(query.text);
    return bm25_search(index, params, query.id, terms, k, pool);
}

}  // namespace hybrid
