#pragma once

// Seeded generator for a small hybrid-retrieval benchmark.
//
// Every query has two kinds of relevant documents:
//   lexical   shares the query's rare keywords, but its embeddings are noise;
//   semantic  shares no query keyword, but its embeddings sit next to the
//             query's topic vector.
// BM25 can only find the former and the embedding systems mostly the latter.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hybrid/embeddings.hpp"
#include "hybrid/types.hpp"

namespace hybrid {

struct SyntheticOptions {
    std::size_t num_docs = 200;
    std::size_t num_queries = 20;
    std::size_t lexical_relevant = 1;   // per query
    std::size_t semantic_relevant = 1;  // per query
    std::size_t doc_length = 40;
    std::size_t background_vocabulary = 400;
    std::size_t dense_dim = 32;
    std::size_t multivector_dim = 16;
    std::size_t doc_tokens = 8;
    std::size_t query_tokens = 4;
    double semantic_noise = 0.25;
    std::uint64_t seed = 42;
};

struct SyntheticBenchmark {
    Corpus corpus;
    std::vector<Query> queries;
    Qrels qrels;
    DenseRecords dense_docs;
    DenseRecords dense_queries;
    SparseRecords sparse_docs;
    SparseRecords sparse_queries;
    MultiVectorRecords multivector_docs;
    MultiVectorRecords multivector_queries;
};

/// Deterministic for a given seed; does not rely on std:: distributions,
/// whose output differs between standard libraries.
/// Throws ValidationError when the corpus cannot hold all relevant documents.
SyntheticBenchmark generate_synthetic(const SyntheticOptions& options = {});

/// Writes corpus.jsonl, queries.jsonl, qrels.txt and
/// {dense,sparse,multivector}_{docs,queries}.jsonl into `dir`, creating it.
void write_synthetic(const SyntheticBenchmark& benchmark, const std::filesystem::path& dir);

}  // namespace hybrid
