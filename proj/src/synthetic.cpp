#include "hybrid/synthetic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>

#include "file_util.hpp"
#include "hybrid/error.hpp"
#include "hybrid/tokenizer.hpp"

namespace hybrid {

namespace {

class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

    // Box-Muller; the spare value is dropped to keep the stream simple.
    double gaussian()
    {
        double u = uniform();
        while (u == 0.0) {
            u = uniform();
        }
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * uniform());
    }

    std::vector<double> unit_vector(std::size_t dim)
    {
        std::vector<double> v(dim);
        for (auto& x : v) {
            x = gaussian();
        }
        normalize_l2(v);
        return v;
    }

    template <typename T>
    void shuffle(std::vector<T>& items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[index(i)]);
        }
    }

  private:
    std::mt19937_64 rng_;
};

std::string background_word(std::size_t i)
{
    static constexpr const char* kSyllables[] = {"ba", "ce", "di", "fo", "gu", "ha", "je", "ki", "lo", "mu",
                                                 "na", "pe", "ri", "so", "tu", "va", "we", "xi", "yo", "zu"};
    std::string word = kSyllables[i % 20];
    word += kSyllables[(i / 20) % 20];
    word += kSyllables[(i / 400) % 20];
    return word;
}

std::vector<double> near(const std::vector<double>& center, double noise, Sampler& sampler)
{
    auto jitter = sampler.unit_vector(center.size());
    std::vector<double> v(center.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = center[i] + noise * jitter[i];
    }
    normalize_l2(v);
    return v;
}

SparseVector term_weights(const std::string& text, const std::map<std::string, double>& extra)
{
    std::map<std::string, double> tf;
    for (const auto& token : tokenize(text)) {
        tf[token] += 1.0;
    }
    for (auto& [term, count] : tf) {
        count = 1.0 + std::log(count);
    }
    for (const auto& [term, weight] : extra) {
        tf[term] += weight;
    }
    return SparseVector({tf.begin(), tf.end()});
}

void write_jsonl_text(const std::vector<std::pair<std::string, std::string>>& rows, const std::filesystem::path& path)
{
    auto out = detail::open_output(path);
    for (const auto& [id, text] : rows) {
        out << nlohmann::ordered_json{{"id", id}, {"text", text}}.dump() << '\n';
    }
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

}  // namespace

SyntheticBenchmark generate_synthetic(const SyntheticOptions& options)
{
    const std::size_t per_query = options.lexical_relevant + options.semantic_relevant;
    if (options.num_queries == 0 || per_query == 0) {
        throw ValidationError("synthetic benchmark needs queries with relevant documents");
    }
    if (options.num_queries * per_query > options.num_docs) {
        throw ValidationError("synthetic corpus of " + std::to_string(options.num_docs)
                              + " documents cannot hold every relevant document");
    }
    if (options.dense_dim == 0 || options.multivector_dim == 0 || options.doc_tokens < 2
        || options.query_tokens == 0 || options.background_vocabulary == 0 || options.background_vocabulary > 8000) {
        throw ValidationError("invalid synthetic benchmark dimensions");
    }

    Sampler sampler(options.seed);
    SyntheticBenchmark bench;

    enum class Role { background, lexical, semantic };
    std::vector<Role> role(options.num_docs, Role::background);
    std::vector<std::size_t> owner(options.num_docs, 0);
    std::vector<std::size_t> order(options.num_docs);
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    sampler.shuffle(order);
    std::size_t next = 0;
    for (std::size_t q = 0; q < options.num_queries; ++q) {
        for (std::size_t j = 0; j < per_query; ++j) {
            const auto d = order[next++];
            role[d] = j < options.lexical_relevant ? Role::lexical : Role::semantic;
            owner[d] = q;
        }
    }

    const auto doc_id = [](std::size_t d) { return fmt::format("doc{:04}", d); };
    const auto query_id = [](std::size_t q) { return fmt::format("q{:03}", q); };
    const auto keyword = [](std::size_t q, char suffix) { return fmt::format("key{:03}{}", q, suffix); };
    const auto topic_term = [](std::size_t q) { return fmt::format("topic{:03}", q); };

    std::vector<std::vector<double>> topics;
    for (std::size_t q = 0; q < options.num_queries; ++q) {
        topics.push_back(sampler.unit_vector(options.dense_dim));
    }
    std::vector<std::vector<double>> mv_topics;
    for (std::size_t q = 0; q < options.num_queries; ++q) {
        mv_topics.push_back(sampler.unit_vector(options.multivector_dim));
    }

    std::vector<std::pair<std::string, std::string>> docs;
    std::vector<double> dense_values;
    bench.multivector_docs.dim = options.multivector_dim;
    for (std::size_t d = 0; d < options.num_docs; ++d) {
        std::vector<std::string> words;
        for (std::size_t i = 0; i < options.doc_length; ++i) {
            words.push_back(background_word(sampler.index(options.background_vocabulary)));
        }
        if (role[d] == Role::lexical) {
            for (char suffix : {'a', 'b', 'a', 'b'}) {
                words[sampler.index(words.size())] = keyword(owner[d], suffix);
            }
        }
        std::string text;
        for (const auto& w : words) {
            text += text.empty() ? w : " " + w;
        }
        docs.emplace_back(doc_id(d), text);

        const bool semantic = role[d] == Role::semantic;
        const auto vec = semantic ? near(topics[owner[d]], options.semantic_noise, sampler)
                                  : sampler.unit_vector(options.dense_dim);
        dense_values.insert(dense_values.end(), vec.begin(), vec.end());

        std::map<std::string, double> expansion;
        if (semantic) {
            expansion[topic_term(owner[d])] = 2.0;
        }
        bench.sparse_docs.ids.push_back(doc_id(d));
        bench.sparse_docs.vectors.push_back(term_weights(text, expansion));

        std::vector<double> tokens;
        for (std::size_t t = 0; t < options.doc_tokens; ++t) {
            const auto row = semantic && t < 2 ? near(mv_topics[owner[d]], options.semantic_noise, sampler)
                                               : sampler.unit_vector(options.multivector_dim);
            tokens.insert(tokens.end(), row.begin(), row.end());
        }
        bench.multivector_docs.ids.push_back(doc_id(d));
        bench.multivector_docs.matrices.emplace_back(options.multivector_dim, std::move(tokens));
    }
    bench.dense_docs.ids = bench.sparse_docs.ids;
    bench.dense_docs.matrix = TokenMatrix(options.dense_dim, std::move(dense_values));

    std::vector<std::pair<std::string, std::string>> queries;
    std::vector<double> query_values;
    bench.multivector_queries.dim = options.multivector_dim;
    for (std::size_t q = 0; q < options.num_queries; ++q) {
        const std::string text = keyword(q, 'a') + " " + background_word(sampler.index(options.background_vocabulary))
                                 + " " + keyword(q, 'b') + " "
                                 + background_word(sampler.index(options.background_vocabulary));
        queries.emplace_back(query_id(q), text);

        const auto vec = near(topics[q], 0.1, sampler);
        query_values.insert(query_values.end(), vec.begin(), vec.end());

        bench.sparse_queries.ids.push_back(query_id(q));
        bench.sparse_queries.vectors.push_back(term_weights(text, {{topic_term(q), 1.5}}));

        std::vector<double> tokens;
        for (std::size_t t = 0; t < options.query_tokens; ++t) {
            const auto row = near(mv_topics[q], 0.3, sampler);
            tokens.insert(tokens.end(), row.begin(), row.end());
        }
        bench.multivector_queries.ids.push_back(query_id(q));
        bench.multivector_queries.matrices.emplace_back(options.multivector_dim, std::move(tokens));
    }
    bench.dense_queries.ids = bench.sparse_queries.ids;
    bench.dense_queries.matrix = TokenMatrix(options.dense_dim, std::move(query_values));

    std::vector<Document> documents;
    for (const auto& [id, text] : docs) {
        documents.push_back(Document{DocId(id), text});
    }
    bench.corpus = Corpus(std::move(documents));
    for (const auto& [id, text] : queries) {
        bench.queries.push_back(Query{QueryId(id), text});
    }
    for (std::size_t d = 0; d < options.num_docs; ++d) {
        if (role[d] != Role::background) {
            bench.qrels.add_judgment(QueryId(query_id(owner[d])), DocId(doc_id(d)), true);
        }
    }
    return bench;
}

void write_synthetic(const SyntheticBenchmark& bench, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }

    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& doc : bench.corpus) {
        rows.emplace_back(doc.id.str(), doc.text);
    }
    write_jsonl_text(rows, dir / "corpus.jsonl");
    rows.clear();
    for (const auto& query : bench.queries) {
        rows.emplace_back(query.id.str(), query.text);
    }
    write_jsonl_text(rows, dir / "queries.jsonl");

    {
        auto out = detail::open_output(dir / "qrels.txt");
        for (const auto& [query, relevant] : bench.qrels.judgments()) {
            for (const auto& doc : relevant) {
                out << query.str() << " 0 " << doc.str() << " 1\n";
            }
        }
        if (!out) {
            throw IoError("failed writing qrels");
        }
    }

    write_dense_jsonl(bench.dense_docs, dir / "dense_docs.jsonl");
    write_dense_jsonl(bench.dense_queries, dir / "dense_queries.jsonl");
    write_sparse_jsonl(bench.sparse_docs, dir / "sparse_docs.jsonl");
    write_sparse_jsonl(bench.sparse_queries, dir / "sparse_queries.jsonl");
    write_multivector_jsonl(bench.multivector_docs, dir / "multivector_docs.jsonl");
    write_multivector_jsonl(bench.multivector_queries, dir / "multivector_queries.jsonl");
}

}  // namespace hybrid
