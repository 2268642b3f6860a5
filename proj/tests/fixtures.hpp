#pragma once

// Randomized multi-system instances shared by unit tests and the acceptance
// runner.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "hybrid/types.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace testing_support {

struct PlantedSystems {
    std::vector<std::vector<hybrid::RunList>> systems;
    hybrid::Qrels qrels;
    std::vector<oracle::TuningQuery> oracle_queries;  // aligned with query id order
};

/// Three systems over `queries` queries. Query q has three relevant docs;
/// system m lifts only the m-th of them, by an amount that varies per query,
/// so different weightings recover different subsets. Each system returns a
/// random 30 of 40 docs.
inline PlantedSystems planted_three_systems(std::uint64_t seed, std::size_t queries = 12)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> lift(0.2, 1.5);
    PlantedSystems out;
    out.systems.resize(3);
    for (std::size_t q = 0; q < queries; ++q) {
        const std::string qid = "q" + std::to_string(100 + q);  // fixed width keeps id order = creation order
        oracle::TuningQuery oq;
        std::vector<std::size_t> docs(40);
        for (std::size_t i = 0; i < docs.size(); ++i) {
            docs[i] = i;
        }
        std::shuffle(docs.begin(), docs.end(), rng);
        const std::vector<std::string> relevant{"d" + std::to_string(docs[0]), "d" + std::to_string(docs[1]),
                                                "d" + std::to_string(docs[2])};
        for (const auto& r : relevant) {
            out.qrels.add_judgment(hybrid::QueryId(qid), hybrid::DocId(r), true);
            oq.relevant.insert(r);
        }
        for (std::size_t m = 0; m < 3; ++m) {
            std::vector<std::size_t> pool(40);
            for (std::size_t i = 0; i < pool.size(); ++i) {
                pool[i] = i;
            }
            std::shuffle(pool.begin(), pool.end(), rng);
            pool.resize(30);
            Entries entries;
            for (auto d : pool) {
                const std::string id = "d" + std::to_string(d);
                double s = noise(rng) * (1.0 + static_cast<double>(m));
                if (id == relevant[m]) {
                    s += lift(rng) * (1.0 + static_cast<double>(m));
                }
                entries.emplace_back(id, s);
            }
            const auto run = make_run(qid, "s" + std::to_string(m), entries);
            out.systems[m].push_back(run);
            oq.runs.push_back(entries_of(run));
        }
        out.oracle_queries.push_back(std::move(oq));
    }
    return out;
}

/// A random single-query fusion instance: 1 to 5 systems over up to 200 docs,
/// some lists tied, some short, occasionally an empty one.
inline std::vector<Entries> random_fusion_instance(std::mt19937_64& rng)
{
    std::uniform_int_distribution<std::size_t> systems(1, 5);
    std::uniform_int_distribution<std::size_t> pool(1, 200);
    std::uniform_int_distribution<int> coin(0, 9);
    const std::size_t docs = pool(rng);
    std::uniform_int_distribution<std::size_t> length(1, docs);
    std::vector<Entries> runs;
    for (std::size_t m = systems(rng); m > 0; --m) {
        const int c = coin(rng);
        runs.push_back(c == 0 && !runs.empty() ? Entries{} : random_entries(rng, docs, length(rng), c < 4));
    }
    return runs;
}

}  // namespace testing_support
