#pragma once

// Shared helpers for the test binaries: temporary directories, file
// fixtures and random run generation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hybrid/types.hpp"

namespace testing_support {

namespace fs = std::filesystem;

class TempDir {
  public:
    TempDir()
    {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = fs::temp_directory_path() / ("hybrid-test-" + std::to_string(rng()));
        fs::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const fs::path& path() const { return path_; }
    [[nodiscard]] fs::path operator/(const std::string& name) const { return path_ / name; }

  private:
    fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

using Entries = std::vector<std::pair<std::string, double>>;

inline hybrid::RunList make_run(const std::string& query, const std::string& system, const Entries& entries)
{
    std::vector<hybrid::ScoredDoc> docs;
    for (const auto& [id, score] : entries) {
        docs.push_back({hybrid::DocId(id), score});
    }
    return hybrid::RunList::from_unsorted(hybrid::QueryId(query), system, std::move(docs));
}

inline Entries entries_of(const hybrid::RunList& run)
{
    Entries out;
    for (const auto& e : run.entries()) {
        out.emplace_back(e.doc.str(), e.score);
    }
    return out;
}

inline std::vector<std::string> doc_order(const hybrid::RunList& run)
{
    std::vector<std::string> ids;
    for (const auto& e : run.entries()) {
        ids.push_back(e.doc.str());
    }
    return ids;
}

/// A random run over docs "d0".."d<pool-1>": a random subset of `length`
/// docs, scores drawn from a small grid when `ties` so duplicates occur.
inline Entries random_entries(std::mt19937_64& rng, std::size_t pool, std::size_t length, bool ties)
{
    std::vector<std::size_t> ids(pool);
    for (std::size_t i = 0; i < pool; ++i) {
        ids[i] = i;
    }
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(std::min(length, pool));
    std::uniform_real_distribution<double> uniform(-5.0, 20.0);
    std::uniform_int_distribution<int> grid(0, 9);
    Entries entries;
    for (auto id : ids) {
        const double score = ties ? static_cast<double>(grid(rng)) * 0.5 : uniform(rng);
        entries.emplace_back("d" + std::to_string(id), score);
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    return entries;
}

/// Relative comparison; values that cancel to within 1e-14 of each other
/// count as equal.
inline bool close_rel(double a, double b, double rel)
{
    const double diff = std::abs(a - b);
    return diff <= rel * std::max(std::abs(a), std::abs(b)) || diff <= 1e-14;
}

}  // namespace testing_support
