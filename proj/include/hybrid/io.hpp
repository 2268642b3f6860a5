#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybrid/types.hpp"

namespace hybrid {

/// JSON-lines corpus, one `{"id": ..., "text": ...}` object per line. Blank
/// lines are skipped; file order is preserved.
Corpus read_corpus(const std::filesystem::path& path);
Corpus read_corpus(std::istream& in, std::string_view source = "<stream>");

/// Same format as the corpus; ids must be unique.
std::vector<Query> read_queries(const std::filesystem::path& path);
std::vector<Query> read_queries(std::istream& in, std::string_view source = "<stream>");

/// TREC qrels: `qid iter docid rel`. Positive rel marks the document relevant.
Qrels read_qrels(const std::filesystem::path& path);
Qrels read_qrels(std::istream& in, std::string_view source = "<stream>");

/// TREC run: `qid Q0 docid rank score tag`. The rank column is ignored on
/// read; entries are re-sorted by score. Queries come back in order of first
/// appearance and each RunList takes the tag of its first line as system id.
std::vector<RunList> read_run(const std::filesystem::path& path);
std::vector<RunList> read_run(std::istream& in, std::string_view source = "<stream>");

/// Writes runs in TREC format with 1-based ranks and scores printed with 17
/// significant digits. An empty `tag` keeps each RunList's own system id.
void write_run(std::span<const RunList> runs, const std::filesystem::path& path,
               std::string_view tag = {});
void write_run(std::span<const RunList> runs, std::ostream& out, std::string_view tag = {});

/// `%.17g`: enough digits for every double to read back bit-identical.
std::string format_score(double value);

}  // namespace hybrid
