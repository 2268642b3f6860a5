#include "hybrid/sparse_index.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "binary_io.hpp"
#include "file_util.hpp"
#include "hybrid/error.hpp"
#include "top_k.hpp"

namespace hybrid {

namespace {
constexpr std::string_view kMagic = "HBSX";
constexpr std::uint32_t kVersion = 1;
}  // namespace

SparseIndex::SparseIndex(SparseRecords records)
{
    if (records.ids.empty()) {
        throw ValidationError("sparse index needs at least one vector");
    }
    if (records.ids.size() != records.vectors.size()) {
        throw ValidationError("sparse index: id count does not match vector count");
    }
    if (records.ids.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw ValidationError("sparse index: too many documents");
    }
    std::unordered_set<DocId> seen;
    for (std::size_t i = 0; i < records.ids.size(); ++i) {
        ids_.emplace_back(std::move(records.ids[i]));
        if (!seen.insert(ids_.back()).second) {
            throw ValidationError("sparse index: duplicate id '" + ids_.back().str() + "'");
        }
        const auto& vector = records.vectors[i];
        nonzeros_.push_back(vector.nonzeros());
        for (const auto& [term, weight] : vector.entries()) {
            postings_[term].push_back(WeightedPosting{static_cast<std::uint32_t>(i), weight});
        }
    }
}

std::span<const WeightedPosting> SparseIndex::postings(const std::string& term) const
{
    auto it = postings_.find(term);
    if (it == postings_.end()) {
        return {};
    }
    return it->second;
}

double SparseIndex::average_posting_length() const
{
    if (postings_.empty()) {
        return 0.0;
    }
    std::size_t total = 0;
    for (const auto& [term, list] : postings_) {
        total += list.size();
    }
    return static_cast<double>(total) / static_cast<double>(postings_.size());
}

SparseRecords SparseIndex::records() const
{
    std::vector<std::vector<std::pair<std::string, double>>> weights(ids_.size());
    for (const auto& [term, list] : postings_) {
        for (const auto& posting : list) {
            weights[posting.doc].emplace_back(term, posting.weight);
        }
    }
    SparseRecords out;
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        out.ids.push_back(ids_[i].str());
        out.vectors.emplace_back(std::move(weights[i]));
    }
    return out;
}

SparseIndex ingest_sparse(const std::filesystem::path& path)
{
    auto records = read_sparse_records(path);
    try {
        return SparseIndex(std::move(records));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void save_sparse_index(const SparseIndex& index, const std::filesystem::path& path)
{
    const auto records = index.records();
    auto out = detail::open_output(path, std::ios::binary);
    detail::BinaryWriter writer(out);
    writer.bytes(kMagic.data(), kMagic.size());
    writer.fixed<std::uint32_t>(kVersion);
    writer.fixed<std::uint64_t>(records.ids.size());
    for (std::size_t i = 0; i < records.ids.size(); ++i) {
        const auto& vector = records.vectors[i];
        writer.string(records.ids[i]);
        writer.varint(vector.nonzeros());
        for (const auto& [term, weight] : vector.entries()) {
            writer.string(term);
            writer.fixed<double>(weight);
        }
    }
}

SparseIndex load_sparse_index(const std::filesystem::path& path)
{
    auto in = detail::open_input(path, std::ios::binary);
    detail::BinaryReader reader(in, path.string());
    reader.expect_magic(kMagic);
    if (auto version = reader.fixed<std::uint32_t>(); version != kVersion) {
        throw ParseError(path.string() + ": unsupported sparse index version " + std::to_string(version));
    }
    const auto num_docs = reader.fixed<std::uint64_t>();
    SparseRecords records;
    for (std::uint64_t i = 0; i < num_docs; ++i) {
        records.ids.push_back(reader.string());
        const auto nonzeros = reader.varint();
        std::vector<std::pair<std::string, double>> weights;
        for (std::uint64_t j = 0; j < nonzeros; ++j) {
            auto term = reader.string();
            weights.emplace_back(std::move(term), reader.fixed<double>());
        }
        try {
            records.vectors.emplace_back(std::move(weights));
        } catch (const ValidationError& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
    }
    if (!reader.at_end()) {
        throw ParseError(path.string() + ": trailing bytes");
    }
    try {
        return SparseIndex(std::move(records));
    } catch (const ValidationError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

RunList sparse_search(const SparseIndex& index, const QueryId& query, const SparseVector& query_vector,
                      std::size_t k, CandidatePool pool)
{
    if (query_vector.empty()) {
        // Still validates k.
        return detail::top_k_run(query, "sparse", {}, k);
    }
    std::vector<double> accumulator(index.size(), 0.0);
    std::vector<bool> matched(index.size(), pool == CandidatePool::full_corpus);
    for (const auto& [term, query_weight] : query_vector.entries()) {
        for (const auto& posting : index.postings(term)) {
            accumulator[posting.doc] += query_weight * posting.weight;
            matched[posting.doc] = true;
        }
    }
    std::vector<ScoredDoc> candidates;
    for (std::size_t i = 0; i < accumulator.size(); ++i) {
        if (matched[i]) {
            candidates.push_back(ScoredDoc{index.id(i), accumulator[i]});
        }
    }
    return detail::top_k_run(query, "sparse", std::move(candidates), k);
}

}  // namespace hybrid
