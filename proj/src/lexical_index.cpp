#include "hybrid/lexical_index.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "binary_io.hpp"
#include "file_util.hpp"
#include "hybrid/error.hpp"
#include "hybrid/tokenizer.hpp"

namespace hybrid {

namespace {
constexpr std::string_view kMagic = "HBLX";
constexpr std::uint32_t kVersion = 1;
}  // namespace

std::span<const Posting> LexicalIndex::postings(std::string_view term) const
{
    // Heterogeneous lookup on unordered_map needs C++20 library support that
    // GCC 11 lacks, hence the temporary string.
    auto it = postings_.find(std::string(term));
    if (it == postings_.end()) {
        return {};
    }
    return it->second;
}

std::uint32_t LexicalIndex::tf(std::string_view term, std::size_t ordinal) const
{
    auto list = postings(term);
    auto it = std::lower_bound(list.begin(), list.end(), ordinal,
                               [](const Posting& p, std::size_t doc) { return p.doc < doc; });
    return (it != list.end() && it->doc == ordinal) ? it->tf : 0;
}

std::optional<std::size_t> LexicalIndex::ordinal(const DocId& doc) const
{
    auto it = ordinal_.find(doc);
    if (it == ordinal_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::string> LexicalIndex::sorted_terms() const
{
    std::vector<std::string> terms;
    terms.reserve(postings_.size());
    for (const auto& [term, list] : postings_) {
        terms.push_back(term);
    }
    std::sort(terms.begin(), terms.end());
    return terms;
}

void LexicalIndex::finalize()
{
    ordinal_.clear();
    ordinal_.reserve(doc_ids_.size());
    double total = 0.0;
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) {
        if (!ordinal_.emplace(doc_ids_[i], static_cast<std::uint32_t>(i)).second) {
            throw ValidationError("duplicate document id '" + doc_ids_[i].str() + "'");
        }
        total += doc_len_[i];
    }
    avg_len_ = doc_ids_.empty() ? 0.0 : total / static_cast<double>(doc_ids_.size());
}

LexicalIndex build_lexical_index(const Corpus& corpus)
{
    if (corpus.empty()) {
        throw ValidationError("cannot build a lexical index over an empty corpus");
    }
    if (corpus.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw ValidationError("corpus too large for 32-bit document ordinals");
    }
    LexicalIndex index;
    index.doc_ids_.reserve(corpus.size());
    index.doc_len_.reserve(corpus.size());

    std::unordered_map<std::string, std::uint32_t> counts;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& doc = corpus[i];
        auto terms = tokenize(doc.text);
        counts.clear();
        for (auto& term : terms) {
            ++counts[std::move(term)];
        }
        // Documents are visited in ordinal order, so each list stays sorted.
        for (auto& [term, tf] : counts) {
            index.postings_[term].push_back(Posting{static_cast<std::uint32_t>(i), tf});
        }
        index.doc_ids_.push_back(doc.id);
        index.doc_len_.push_back(static_cast<std::uint32_t>(terms.size()));
    }
    index.finalize();
    return index;
}

void save_lexical_index(const LexicalIndex& index, const std::filesystem::path& path)
{
    auto out = detail::open_output(path, std::ios::binary);
    detail::BinaryWriter writer(out);
    writer.bytes(kMagic.data(), kMagic.size());
    writer.fixed<std::uint32_t>(kVersion);
    writer.fixed<std::uint64_t>(index.corpus_size());
    writer.fixed<double>(index.avg_len());
    for (std::size_t i = 0; i < index.corpus_size(); ++i) {
        writer.string(index.doc_id(i).str());
        writer.varint(index.doc_len(i));
    }
    const auto terms = index.sorted_terms();
    writer.fixed<std::uint64_t>(terms.size());
    for (const auto& term : terms) {
        auto list = index.postings(term);
        writer.string(term);
        writer.varint(list.size());
        std::uint32_t previous = 0;
        for (const auto& posting : list) {
            writer.varint(posting.doc - previous);
            writer.varint(posting.tf);
            previous = posting.doc;
        }
    }
}

LexicalIndex load_lexical_index(const std::filesystem::path& path)
{
    auto in = detail::open_input(path, std::ios::binary);
    detail::BinaryReader reader(in, path.string());
    const auto& source = reader.source();
    reader.expect_magic(kMagic);
    if (auto version = reader.fixed<std::uint32_t>(); version != kVersion) {
        throw ParseError(source + ": unsupported lexical index version " + std::to_string(version));
    }
    const auto num_docs = reader.fixed<std::uint64_t>();
    const auto stored_avg = reader.fixed<double>();
    if (num_docs == 0 || num_docs > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(source + ": invalid document count " + std::to_string(num_docs));
    }

    LexicalIndex index;
    for (std::uint64_t i = 0; i < num_docs; ++i) {
        index.doc_ids_.emplace_back(reader.string());
        index.doc_len_.push_back(static_cast<std::uint32_t>(reader.varint()));
    }
    const auto num_terms = reader.fixed<std::uint64_t>();
    std::string previous_term;
    for (std::uint64_t t = 0; t < num_terms; ++t) {
        auto term = reader.string();
        if (t > 0 && term <= previous_term) {
            throw ParseError(source + ": term dictionary not strictly sorted at '" + term + "'");
        }
        const auto df = reader.varint();
        if (df == 0 || df > num_docs) {
            throw ParseError(source + ": invalid df " + std::to_string(df) + " for '" + term + "'");
        }
        std::vector<Posting> list;
        list.reserve(df);
        std::uint64_t doc = 0;
        for (std::uint64_t p = 0; p < df; ++p) {
            const auto gap = reader.varint();
            if (p > 0 && gap == 0) {
                throw ParseError(source + ": repeated document in postings of '" + term + "'");
            }
            doc += gap;
            const auto tf = reader.varint();
            if (doc >= num_docs || tf == 0 || tf > std::numeric_limits<std::uint32_t>::max()) {
                throw ParseError(source + ": corrupt posting in list of '" + term + "'");
            }
            list.push_back(Posting{static_cast<std::uint32_t>(doc), static_cast<std::uint32_t>(tf)});
        }
        index.postings_.emplace(term, std::move(list));
        previous_term = std::move(term);
    }
    if (!reader.at_end()) {
        throw ParseError(source + ": trailing bytes after postings");
    }
    index.finalize();
    if (index.avg_len_ != stored_avg) {
        throw ParseError(source + ": stored average length does not match document lengths");
    }
    return index;
}

}  // namespace hybrid
