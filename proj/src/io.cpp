#include "hybrid/io.hpp"

#include <fmt/format.h>

#include <istream>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "file_util.hpp"
#include "hybrid/error.hpp"

namespace hybrid {

namespace {

using detail::location;

template <typename Record>
std::vector<Record> read_id_text_lines(std::istream& in, std::string_view source)
{
    std::vector<Record> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_blank(line)) {
            continue;
        }
        nlohmann::json object;
        try {
            object = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(location(source, line_no) + ": malformed JSON: " + e.what());
        }
        if (!object.is_object() || !object.contains("id") || !object.contains("text")) {
            throw ParseError(location(source, line_no) + ": expected an object with \"id\" and \"text\"");
        }
        if (!object["id"].is_string() || !object["text"].is_string()) {
            throw ParseError(location(source, line_no) + ": \"id\" and \"text\" must be strings");
        }
        try {
            records.push_back(Record{decltype(Record::id)(object["id"].get<std::string>()),
                                     object["text"].get<std::string>()});
        } catch (const ValidationError& e) {
            throw ValidationError(location(source, line_no) + ": " + e.what());
        }
    }
    return records;
}

}  // namespace

Corpus read_corpus(std::istream& in, std::string_view source)
{
    auto documents = read_id_text_lines<Document>(in, source);
    try {
        return Corpus(std::move(documents));
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(source) + ": " + e.what());
    }
}

Corpus read_corpus(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return read_corpus(in, path.string());
}

std::vector<Query> read_queries(std::istream& in, std::string_view source)
{
    auto queries = read_id_text_lines<Query>(in, source);
    std::unordered_set<QueryId> seen;
    for (const auto& query : queries) {
        if (!seen.insert(query.id).second) {
            throw ValidationError(std::string(source) + ": duplicate query id '" + query.id.str() + "'");
        }
    }
    return queries;
}

std::vector<Query> read_queries(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return read_queries(in, path.string());
}

Qrels read_qrels(std::istream& in, std::string_view source)
{
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_blank(line)) {
            continue;
        }
        auto fields = detail::split_fields(line);
        if (fields.size() != 4) {
            throw ParseError(location(source, line_no) + ": expected 4 fields 'qid iter docid rel', got "
                             + std::to_string(fields.size()));
        }
        long long rel = 0;
        if (!detail::parse_number(fields[3], rel)) {
            throw ParseError(location(source, line_no) + ": relevance '" + std::string(fields[3])
                             + "' is not an integer");
        }
        qrels.add_judgment(QueryId(std::string(fields[0])), DocId(std::string(fields[2])), rel > 0);
    }
    return qrels;
}

Qrels read_qrels(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return read_qrels(in, path.string());
}

std::vector<RunList> read_run(std::istream& in, std::string_view source)
{
    struct Pending {
        QueryId query;
        std::string tag;
        std::vector<ScoredDoc> entries;
        std::unordered_set<DocId> seen;
    };
    std::vector<Pending> pending;
    std::unordered_map<QueryId, std::size_t> slot;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_blank(line)) {
            continue;
        }
        auto fields = detail::split_fields(line);
        if (fields.size() != 6) {
            throw ParseError(location(source, line_no)
                             + ": expected 6 fields 'qid Q0 docid rank score tag', got "
                             + std::to_string(fields.size()));
        }
        double score = 0.0;
        if (!detail::parse_number(fields[4], score)) {
            throw ParseError(location(source, line_no) + ": score '" + std::string(fields[4])
                             + "' is not a number");
        }
        QueryId query{std::string(fields[0])};
        DocId doc{std::string(fields[2])};
        auto [it, inserted] = slot.try_emplace(query, pending.size());
        if (inserted) {
            pending.push_back(Pending{query, std::string(fields[5]), {}, {}});
        }
        auto& run = pending[it->second];
        if (!run.seen.insert(doc).second) {
            throw ValidationError(location(source, line_no) + ": duplicate document '" + doc.str()
                                  + "' for query '" + query.str() + "'");
        }
        run.entries.push_back(ScoredDoc{std::move(doc), score});
    }

    std::vector<RunList> runs;
    runs.reserve(pending.size());
    for (auto& run : pending) {
        try {
            runs.push_back(RunList::from_unsorted(run.query, run.tag, std::move(run.entries)));
        } catch (const ValidationError& e) {
            throw ValidationError(std::string(source) + ": " + e.what());
        }
    }
    return runs;
}

std::vector<RunList> read_run(const std::filesystem::path& path)
{
    auto in = detail::open_input(path);
    return read_run(in, path.string());
}

std::string format_score(double value)
{
    return fmt::format("{:.17g}", value);
}

void write_run(std::span<const RunList> runs, std::ostream& out, std::string_view tag)
{
    for (const auto& run : runs) {
        const std::string_view run_tag = tag.empty() ? std::string_view(run.system_id()) : tag;
        if (run_tag.empty() || detail::split_fields(run_tag).size() != 1) {
            throw ValidationError("run tag '" + std::string(run_tag)
                                  + "' must be a single non-empty token");
        }
        std::size_t rank = 1;
        for (const auto& entry : run.entries()) {
            out << run.query_id().str() << " Q0 " << entry.doc.str() << ' ' << rank++ << ' '
                << format_score(entry.score) << ' ' << run_tag << '\n';
        }
    }
    if (!out) {
        throw IoError("failed writing run");
    }
}

void write_run(std::span<const RunList> runs, const std::filesystem::path& path, std::string_view tag)
{
    auto out = detail::open_output(path);
    write_run(runs, out, tag);
}

}  // namespace hybrid
