#include "hybrid/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hybrid {

void CostModelInputs::validate() const
{
    const double fields[] = {avg_query_len,  avg_doc_len,        corpus_size,
                             dim,            bits_per_value,     forward_flops,
                             avg_query_nonzeros, avg_posting_len, rerank_depth};
    for (double value : fields) {
        if (!std::isfinite(value) || value < 0.0) {
            throw ValidationError("cost model inputs must be finite and non-negative");
        }
    }
    if (corpus_size < 1.0) {
        throw ValidationError("cost model corpus size must be at least 1");
    }
}

double flops_bm25(const CostModelInputs& in)
{
    in.validate();
    return 4.0 * in.avg_query_len * in.corpus_size;
}

double flops_dense(const CostModelInputs& in)
{
    in.validate();
    return in.forward_flops + (2.0 * in.dim - 1.0) * in.corpus_size;
}

double flops_sparse(const CostModelInputs& in)
{
    in.validate();
    return in.forward_flops + 2.0 * in.avg_query_nonzeros * in.avg_posting_len;
}

double flops_multivector(const CostModelInputs& in)
{
    in.validate();
    const double q = in.avg_query_len;
    const double a = in.avg_doc_len;
    const double per_doc = 2.0 * in.dim * q * a + q * a + q;
    return in.forward_flops + per_doc * in.corpus_size;
}

double flops_multivector_closed_form(const CostModelInputs& in)
{
    in.validate();
    const double q = in.avg_query_len;
    const double a = in.avg_doc_len;
    return in.forward_flops + q * q * (2.0 * in.dim * a + a + 1.0) * in.corpus_size;
}

double flops_cross_encoder(const CostModelInputs& in)
{
    in.validate();
    return in.rerank_depth * in.forward_flops;
}

FlopsReport estimate_flops(const CostModelInputs& in, double cross_encoder_forward_flops)
{
    in.validate();
    auto cross = in;
    cross.forward_flops = cross_encoder_forward_flops;
    cross.validate();
    FlopsReport report;
    report.lines = {
        {"bm25", flops_bm25(in), "4 q |C|"},
        {"dense", flops_dense(in), "C_fw + (2d - 1) |C|"},
        {"sparse", flops_sparse(in), "C_fw + 2 nnz(q) |L|"},
        {"multivector", flops_multivector(in), "C_fw + (2 d q a + q a + q) |C|"},
        {"multivector-closed-form", flops_multivector_closed_form(in), "C_fw + q^2 (2 d a + a + 1) |C|"},
        {"cross-encoder", flops_cross_encoder(cross), "depth * C_fw"},
    };
    return report;
}

std::uint64_t estimate_flat_index_size(std::uint64_t dim, std::uint64_t bits_per_value,
                                       std::uint64_t corpus_size)
{
    return dim * bits_per_value * corpus_size / 8;
}

LatencyReport summarize_latency(std::vector<double> samples)
{
    if (samples.empty()) {
        throw ValidationError("latency summary needs at least one sample");
    }
    LatencyReport report;
    report.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    report.min = *lo;
    report.max = *hi;
    report.samples = std::move(samples);
    return report;
}

}  // namespace hybrid
