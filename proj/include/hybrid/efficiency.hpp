#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hybrid/error.hpp"

namespace hybrid {

/// Encoder forward-pass costs measured externally with a FLOPs profiler.
/// Base-size encoder on a 157-token article.
inline constexpr double kBaseEncoderForwardFlops = 2.6e9;
/// Base-size cross-encoder on a 512-token query-article pair.
inline constexpr double kCrossEncoderForwardFlops = 2.2e10;

/// Inputs of the per-query FLOPs cost model. Defaults describe the legal
/// retrieval benchmark the model was calibrated on: 15-token queries,
/// 157-token articles, 27,942 articles.
struct CostModelInputs {
    double avg_query_len = 15.0;
    double avg_doc_len = 157.0;
    double corpus_size = 27'942.0;
    double dim = 768.0;
    double bits_per_value = 32.0;
    double forward_flops = kBaseEncoderForwardFlops;
    double avg_query_nonzeros = 178.0;
    double avg_posting_len = 378.0;
    double rerank_depth = 1000.0;

    /// Throws ValidationError on negative or non-finite fields or an empty corpus.
    void validate() const;
};

/// 4 q|C|: two multiplications, one addition and one division per query
/// term and document.
double flops_bm25(const CostModelInputs& in);
/// C_fw + (2d - 1)|C|: one query encoding plus |C| inner products.
double flops_dense(const CostModelInputs& in);
/// C_fw + 2 * nonzeros * posting length: one multiply-add per posting visited.
double flops_sparse(const CostModelInputs& in);
/// C_fw + (2 d q a + q a + q)|C|: token inner products, row-wise maxima
/// and the final reduction, per document.
double flops_multivector(const CostModelInputs& in);
/// C_fw + q^2 (2 d a + a + 1)|C|, the closed form as usually printed. It
/// differs from flops_multivector by a factor q; both are reported.
double flops_multivector_closed_form(const CostModelInputs& in);
/// depth * C_fw: one forward pass per re-ranked candidate.
double flops_cross_encoder(const CostModelInputs& in);

struct FlopsReport {
    struct Line {
        std::string system;
        double flops;
        std::string formula;
    };
    std::vector<Line> lines;
};

/// All estimators at once. Cross-encoder uses `cross_encoder_forward_flops`
/// instead of `in.forward_flops`.
FlopsReport estimate_flops(const CostModelInputs& in,
                           double cross_encoder_forward_flops = kCrossEncoderForwardFlops);

struct IndexSizeReport {
    std::uint64_t bytes = 0;
    std::uint64_t plaintext_bytes = 0;

    /// Binary megabytes (2^20 bytes).
    [[nodiscard]] double mib() const { return static_cast<double>(bytes) / 1048576.0; }
    /// Index size over plain-text corpus size; 0 when the latter is unknown.
    [[nodiscard]] double ratio_to_plaintext() const
    {
        return plaintext_bytes == 0 ? 0.0 : static_cast<double>(bytes) / static_cast<double>(plaintext_bytes);
    }
};

/// Flat index storage: d * b * |C| bits, in bytes.
std::uint64_t estimate_flat_index_size(std::uint64_t dim, std::uint64_t bits_per_value,
                                       std::uint64_t corpus_size);

struct LatencyReport {
    std::vector<double> samples;  // seconds, one per timed query
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Summary statistics of per-query samples in seconds.
LatencyReport summarize_latency(std::vector<double> samples);

/// Streams queries one at a time (batch size one) through `search`, timing
/// each with a monotonic clock. The first `warmup` calls (cycling through the
/// queries) are not recorded. Throws ValidationError when there are no
/// queries.
template <typename QueryT, typename Search>
LatencyReport measure_latency(std::span<const QueryT> queries, Search&& search, std::size_t warmup = 3)
{
    if (queries.empty()) {
        throw ValidationError("latency measurement needs at least one query");
    }
    for (std::size_t i = 0; i < warmup; ++i) {
        search(queries[i % queries.size()]);
    }
    std::vector<double> samples;
    samples.reserve(queries.size());
    for (const auto& query : queries) {
        const auto start = std::chrono::steady_clock::now();
        search(query);
        const auto stop = std::chrono::steady_clock::now();
        samples.push_back(std::chrono::duration<double>(stop - start).count());
    }
    return summarize_latency(std::move(samples));
}

}  // namespace hybrid
