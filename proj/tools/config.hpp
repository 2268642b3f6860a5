#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hybrid/bm25.hpp"
#include "hybrid/fusion.hpp"

namespace hybrid::cli {

/// Settings shared by all subcommands. Values come from the built-in
/// defaults, then the config file, then command-line flags.
///
/// Config files are INI: `key = value` lines under `[section]` headers.
///
///   [paths]     corpus, queries, qrels, output_dir
///   [search]    k
///   [bm25]      k1, b
///   [fusion]    method, norm, weights, rrf_k, depth
///   [eval]      cutoffs, rr_cutoff
///   [vectors]   cosine
///   [tune]      step, metric
///   [analysis]  seed, bins, positives, negatives
struct AppConfig {
    std::filesystem::path corpus;
    std::filesystem::path queries;
    std::filesystem::path qrels;
    std::filesystem::path output_dir;

    std::size_t k = 1000;
    Bm25Params bm25 = kBm25InDomain;
    FusionSpec fusion;
    std::vector<std::size_t> cutoffs{10, 100, 500};
    std::size_t rr_cutoff = 10;
    bool cosine = true;
    double tune_step = 0.05;
    std::string tune_metric = "R@10";
    std::uint64_t seed = 42;
    std::size_t bins = 50;
    std::size_t positives = 1500;
    std::size_t negatives = 1500;

    /// Throws ValidationError on non-increasing cutoffs or bad parameters.
    void validate() const;
};

/// Relative paths are resolved against the config file's directory.
/// Throws IoError when unreadable, ParseError on bad syntax and
/// ValidationError on unknown sections, keys or bad values.
AppConfig load_config(const std::filesystem::path& path);

/// "10,100,500" -> {10, 100, 500}; must be positive and strictly increasing.
std::vector<std::size_t> parse_cutoffs(const std::string& text);

}  // namespace hybrid::cli
